// Copyright 2026 The privnav Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <CLI11.hpp>
#include <csignal>
#include <iostream>

#include "privnav/cli/commands.hpp"
#include "privnav/common/error.hpp"

namespace {

std::atomic<bool> g_stop{false};

void on_signal(int) { g_stop = true; }

}  // namespace

int main(int argc, char** argv) {
  using namespace privnav::cli;
  CLI::App app{"privnav: private shortest-path navigation"};
  app.set_config("--config", "", "TOML-style configuration file ([serve], [navigate], ... sections)");
  app.require_subcommand(1);

  PreprocessOptions pre;
  auto* c_pre = app.add_subcommand("preprocess", "bound degrees, orient edges, compute next-hop matrices");
  c_pre->add_option("graph", pre.graph, "input graph (JSON)")->required()->check(CLI::ExistingFile);
  c_pre->add_option("-o,--out", pre.out, "next-hop matrices output")->required();
  c_pre->add_option("--graph-out", pre.graph_out, "preprocessed graph output (default <out>.graph.json)");

  CompressOptions comp;
  auto* c_comp = app.add_subcommand("compress", "sign-preserving factorization of next-hop matrices");
  c_comp->add_option("matrices", comp.matrices, "next-hop matrices file")->required()->check(CLI::ExistingFile);
  c_comp->add_option("-o,--out", comp.out, "compressed routing output")->required();
  c_comp->add_option("--d-min", comp.d_min, "smallest rank to try")->check(CLI::PositiveNumber);
  c_comp->add_option("--d-max", comp.d_max, "largest rank to try (0 = n)")->check(CLI::NonNegativeNumber);
  c_comp->add_option("--max-iterations", comp.max_iterations, "optimizer iteration cap")->check(CLI::PositiveNumber);
  c_comp->add_option("--seed", comp.seed, "optimizer seed");

  ServeOptions serve;
  std::string serve_delivery = "offline";
  auto* c_serve = app.add_subcommand("serve", "run the navigation server");
  c_serve->add_option("--graph", serve.graph, "preprocessed graph")->required()->check(CLI::ExistingFile);
  c_serve->add_option("--compressed", serve.compressed, "compressed routing")->required()->check(CLI::ExistingFile);
  c_serve->add_option("--bind", serve.bind, "listen address host:port");
  c_serve->add_option("--min-key-bits", serve.min_key_bits, "smallest client Paillier modulus accepted");
  c_serve->add_option("--field-prime", serve.field_prime, "Mersenne prime of the protocol field");
  c_serve->add_flag("--insecure-toy-field", serve.insecure_toy_field, "allow small test fields");
  c_serve->add_option("--pir-threads", serve.pir_threads, "worker threads for PIR answers")->check(CLI::PositiveNumber);
  c_serve->add_flag("--inline-circuits", serve.inline_circuits, "ship each garbled circuit with its round");
  c_serve->add_option("--rounds", serve.rounds, "override R (must cover the longest route)");
  c_serve->add_option("--max-sessions", serve.max_sessions, "concurrent session limit")->check(CLI::PositiveNumber);
  c_serve->add_option("--seed", serve.seed, "deterministic randomness (testing only)");

  NavigateOptions nav;
  auto* c_nav = app.add_subcommand("navigate", "retrieve a route privately");
  c_nav->add_option("--server", nav.server, "server address host:port");
  c_nav->add_option("-s,--source", nav.s, "source node index")->required();
  c_nav->add_option("-t,--target", nav.t, "target node index")->required();
  c_nav->add_option("--key-bits", nav.key_bits, "Paillier modulus size");
  c_nav->add_flag("--insecure-toy-field", nav.insecure_toy_field, "accept a server on a toy field");
  c_nav->add_flag("--json", nav.json, "print the report as JSON");
  c_nav->add_option("--seed", nav.seed, "deterministic randomness (testing only)");

  BenchOptions bench;
  auto* c_bench = app.add_subcommand("bench", "measure per-round cost over the in-process transport");
  c_bench->add_option("--graph", bench.graph, "preprocessed graph")->check(CLI::ExistingFile);
  c_bench->add_option("--compressed", bench.compressed, "compressed routing")->check(CLI::ExistingFile);
  c_bench->add_option("--grid-width", bench.grid_width, "synthetic grid width")->check(CLI::PositiveNumber);
  c_bench->add_option("--grid-height", bench.grid_height, "synthetic grid height")->check(CLI::PositiveNumber);
  c_bench->add_option("--key-bits", bench.key_bits, "Paillier modulus size");
  c_bench->add_option("--rounds", bench.rounds, "rounds to measure")->check(CLI::PositiveNumber);
  c_bench->add_flag("--inline-circuits", bench.inline_circuits, "ship each garbled circuit with its round");
  c_bench->add_option("--pir-threads", bench.pir_threads, "worker threads for PIR answers")->check(CLI::PositiveNumber);
  c_bench->add_option("--seed", bench.seed, "randomness seed");
  c_bench->add_flag("--json", bench.json, "print the report as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (c_pre->parsed()) cmd_preprocess(pre, std::cout);
    if (c_comp->parsed()) cmd_compress(comp, std::cout);
    if (c_nav->parsed()) cmd_navigate(nav, std::cout);
    if (c_bench->parsed()) cmd_bench(bench, std::cout);
    if (c_serve->parsed()) {
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      cmd_serve(serve, std::cerr, g_stop);
    }
  } catch (const std::exception& e) {
    std::cerr << "privnav: " << e.what() << "\n";
    return exit_code_for(e);
  }
  return kExitOk;
}
