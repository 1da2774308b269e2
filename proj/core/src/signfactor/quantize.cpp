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

#include <cmath>
#include <fstream>
#include <sstream>

#include "privnav/common/error.hpp"
#include "privnav/signfactor/signfactor.hpp"

namespace privnav::signfactor {
namespace {

__int128 dot_row(const IntMatrix& a, const IntMatrix& b, Eigen::Index j, Eigen::Index k) {
  __int128 acc = 0;
  for (Eigen::Index c = 0; c < a.cols(); ++c) acc += static_cast<__int128>(a(j, c)) * b(k, c);
  return acc;
}

void check_shapes(const IntMatrix& a, const IntMatrix& b, const SignMatrix& m) {
  if (a.rows() != m.s.rows() || b.rows() != m.s.cols() || a.cols() != b.cols())
    throw InputError("verify_reconstruction: shape mismatch");
}

std::int64_t max_abs_entry(const IntMatrix& a) {
  std::int64_t best = 0;
  for (Eigen::Index i = 0; i < a.size(); ++i) best = std::max(best, a.data()[i] < 0 ? -a.data()[i] : a.data()[i]);
  return best;
}

}  // namespace

unsigned bit_length(std::uint64_t v) {
  unsigned bits = 0;
  while (v) {
    ++bits;
    v >>= 1;
  }
  return bits;
}

unsigned tau_for(std::int64_t max_abs) {
  if (max_abs <= 1) return 0;
  return bit_length(static_cast<std::uint64_t>(max_abs - 1));
}

std::int64_t max_abs_product(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols() != b.cols()) throw InputError("max_abs_product: rank mismatch");
  __int128 best = 0;
  for (Eigen::Index j = 0; j < a.rows(); ++j)
    for (Eigen::Index k = 0; k < b.rows(); ++k) {
      __int128 v = dot_row(a, b, j, k);
      if (v < 0) v = -v;
      if (v > best) best = v;
    }
  if (best > std::numeric_limits<std::int64_t>::max()) throw InputError("product exceeds 63 bits");
  return static_cast<std::int64_t>(best);
}

VerifyReport verify_reconstruction(const IntMatrix& a, const IntMatrix& b, const SignMatrix& m) {
  check_shapes(a, b, m);
  VerifyReport rep;
  for (Eigen::Index j = 0; j < a.rows(); ++j)
    for (Eigen::Index k = 0; k < b.rows(); ++k) {
      double t = m.s(j, k);
      if (t == 0) continue;
      __int128 v = dot_row(a, b, j, k);
      if (v == 0) {
        rep.violations.push_back({static_cast<std::size_t>(j), static_cast<std::size_t>(k), "zero product"});
      } else if ((v > 0) != (t > 0)) {
        rep.violations.push_back({static_cast<std::size_t>(j), static_cast<std::size_t>(k), "sign mismatch"});
      }
    }
  rep.ok = rep.violations.empty();
  return rep;
}

VerifyReport verify_reconstruction(const RealMatrix& a, const RealMatrix& b, const SignMatrix& m) {
  if (a.rows() != m.s.rows() || b.rows() != m.s.cols() || a.cols() != b.cols())
    throw InputError("verify_reconstruction: shape mismatch");
  RealMatrix p = a * b.transpose();
  VerifyReport rep;
  for (Eigen::Index j = 0; j < p.rows(); ++j)
    for (Eigen::Index k = 0; k < p.cols(); ++k) {
      double t = m.s(j, k);
      if (t == 0) continue;
      if (p(j, k) == 0)
        rep.violations.push_back({static_cast<std::size_t>(j), static_cast<std::size_t>(k), "zero product"});
      else if ((p(j, k) > 0) != (t > 0))
        rep.violations.push_back({static_cast<std::size_t>(j), static_cast<std::size_t>(k), "sign mismatch"});
    }
  rep.ok = rep.violations.empty();
  return rep;
}

IntFactors quantize(const RealFactors& real, const SignMatrix& m) {
  for (int e = 0; e <= 16; ++e) {
    const double scale = std::ldexp(1.0, e);
    IntFactors q;
    q.a = (real.a * scale).array().round().cast<std::int64_t>();
    q.b = (real.b * scale).array().round().cast<std::int64_t>();
    if (!verify_reconstruction(q.a, q.b, m).ok) continue;
    q.scale = std::int64_t{1} << e;
    q.nu = std::max(1u, bit_length(static_cast<std::uint64_t>(std::max(max_abs_entry(q.a), max_abs_entry(q.b)))));
    q.tau = tau_for(max_abs_product(q.a, q.b));
    return q;
  }
  throw InputError("quantize: no scale up to 2^16 preserves the signs");
}

RankResult search_rank(const SignMatrix& m, const RankSearchConfig& config) {
  const int n = static_cast<int>(m.n());
  const int d_max = config.d_max > 0 ? std::min(config.d_max, std::max(n, 1)) : std::max(n, 1);
  RankResult result;
  auto attempt = [&](int d) -> bool {
    RealFactors real = minimize(m, d, config.optimizer);
    bool feasible = false;
    if (real.perfect) {
      try {
        IntFactors q = quantize(real, m);
        if (result.d == 0 || d < result.d) {
          result.d = d;
          result.factors = std::move(q);
        }
        feasible = true;
      } catch (const InputError&) {
      }
    }
    result.attempts.push_back({d, real.j, feasible});
    return feasible;
  };

  int lower = config.d_min - 1;  // largest d known infeasible
  int found = 0;
  for (int d = config.d_min;; d *= 2) {
    d = std::min(d, d_max);
    if (attempt(d)) {
      found = d;
      break;
    }
    lower = d;
    if (d == d_max) break;
  }
  if (found == 0) {
    std::ostringstream msg;
    msg << "search_rank: no perfect reconstruction found; best J per d:";
    for (const auto& a : result.attempts) msg << " d=" << a.d << ":J=" << a.best_j;
    throw InputError(msg.str());
  }
  if (config.scan_down)
    for (int d = found - 1; d > lower; --d)
      if (!attempt(d)) break;
  return result;
}

namespace {

IntMatrix pad_columns(const IntMatrix& m, Eigen::Index d) {
  IntMatrix out = IntMatrix::Zero(m.rows(), d);
  out.leftCols(m.cols()) = m;
  return out;
}

}  // namespace

CompressedRouting compress_routing(const roadgraph::NextHopMatrices& m, const RankSearchConfig& config,
                                   CompressionReport* report) {
  SignMatrix sne = SignMatrix::from_bits(m.n, m.ne);
  SignMatrix snw = SignMatrix::from_bits(m.n, m.nw);
  RankResult ne = search_rank(sne, config);
  RankResult nw = search_rank(snw, config);
  CompressedRouting c;
  c.n = static_cast<std::uint32_t>(m.n);
  c.d = static_cast<std::uint32_t>(std::max(ne.d, nw.d));
  c.a_ne = pad_columns(ne.factors.a, c.d);
  c.b_ne = pad_columns(ne.factors.b, c.d);
  c.a_nw = pad_columns(nw.factors.a, c.d);
  c.b_nw = pad_columns(nw.factors.b, c.d);
  c.nu = std::max(ne.factors.nu, nw.factors.nu);
  c.tau = std::max(ne.factors.tau, nw.factors.tau);
  if (report != nullptr) {
    report->ne = std::move(ne);
    report->nw = std::move(nw);
    report->factor = compression_factor(c.n, c.d, c.nu);
  }
  return c;
}

roadgraph::NextHopMatrices reconstruct(const CompressedRouting& c) {
  roadgraph::NextHopMatrices m{c.n, std::vector<std::uint8_t>(std::size_t{c.n} * c.n, 0),
                               std::vector<std::uint8_t>(std::size_t{c.n} * c.n, 0)};
  for (Eigen::Index j = 0; j < c.n; ++j)
    for (Eigen::Index k = 0; k < c.n; ++k) {
      if (j == k) continue;
      m.ne[j * c.n + k] = dot_row(c.a_ne, c.b_ne, j, k) > 0;
      m.nw[j * c.n + k] = dot_row(c.a_nw, c.b_nw, j, k) > 0;
    }
  return m;
}

void check_bounds(const CompressedRouting& c) {
  for (const IntMatrix* mat : {&c.a_ne, &c.b_ne, &c.a_nw, &c.b_nw})
    if (mat->rows() != c.n || mat->cols() != c.d) throw InputError("compressed routing: matrix shape mismatch");
  std::int64_t entry = std::max({max_abs_entry(c.a_ne), max_abs_entry(c.b_ne), max_abs_entry(c.a_nw),
                                 max_abs_entry(c.b_nw)});
  if (bit_length(static_cast<std::uint64_t>(entry)) > c.nu)
    throw InputError("compressed routing: entries exceed stated precision nu=" + std::to_string(c.nu));
  std::int64_t prod = std::max(max_abs_product(c.a_ne, c.b_ne), max_abs_product(c.a_nw, c.b_nw));
  if (tau_for(prod) > c.tau)
    throw InputError("compressed routing: product bound 2^" + std::to_string(c.tau) + " exceeded (max |product| = " +
                     std::to_string(prod) + ")");
}

Bytes serialize_compressed(const CompressedRouting& c) {
  ByteWriter w;
  w.raw(as_bytes("PRSF"));
  w.u32(c.n);
  w.u32(c.d);
  w.u32(c.nu);
  w.u32(c.tau);
  for (const IntMatrix* mat : {&c.a_ne, &c.b_ne, &c.a_nw, &c.b_nw})
    for (Eigen::Index i = 0; i < mat->size(); ++i) w.i64(mat->data()[i]);
  return w.take();
}

CompressedRouting parse_compressed(ByteView data) {
  try {
    ByteReader r(data);
    auto magic = r.raw(4);
    if (std::memcmp(magic.data(), "PRSF", 4) != 0) throw InputError("not a compressed-routing file");
    CompressedRouting c;
    c.n = r.u32();
    c.d = r.u32();
    c.nu = r.u32();
    c.tau = r.u32();
    if (std::uint64_t{c.n} * c.d * 32 > r.remaining()) throw DecodeError("truncated matrices");
    for (IntMatrix* mat : {&c.a_ne, &c.b_ne, &c.a_nw, &c.b_nw}) {
      mat->resize(c.n, c.d);
      for (Eigen::Index i = 0; i < mat->size(); ++i) mat->data()[i] = r.i64();
    }
    r.expect_end();
    return c;
  } catch (const DecodeError& e) {
    throw InputError(std::string("compressed routing: ") + e.what());
  }
}

void save_compressed(const CompressedRouting& c, const std::filesystem::path& path) {
  Bytes data = serialize_compressed(c);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
}

CompressedRouting load_compressed(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  Bytes data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_compressed(data);
}

}  // namespace privnav::signfactor
