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

#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "privnav/common/bytes.hpp"
#include "privnav/roadgraph/roadgraph.hpp"

namespace privnav::signfactor {

using RealMatrix = Eigen::MatrixXd;
using IntMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Target signs in {-1, +1}; 0 marks a masked entry (the diagonal).
struct SignMatrix {
  RealMatrix s;

  std::size_t n() const { return static_cast<std::size_t>(s.rows()); }
  bool masked(Eigen::Index j, Eigen::Index k) const { return s(j, k) == 0; }

  // sign = 2 * bit - 1, diagonal masked.
  static SignMatrix from_bits(std::size_t n, const std::vector<std::uint8_t>& bits);
  static SignMatrix from_signs(const RealMatrix& signs, bool mask_diagonal);
};

double huber_loss(double x, double t);
double huber_grad(double x, double t);

double objective(const RealMatrix& a, const RealMatrix& b, const SignMatrix& m);
// Gradient (dJ/dA, dJ/dB).
std::pair<RealMatrix, RealMatrix> objective_grad(const RealMatrix& a, const RealMatrix& b, const SignMatrix& m);

struct OptimizerConfig {
  int max_iterations = 5000;
  int restarts = 3;
  int history = 10;
  std::uint64_t seed = 1;
  // After J < 1, keep descending this many iterations (or until J = 0) to
  // widen the product margins before rounding.
  int polish_iterations = 500;
};

struct RealFactors {
  RealMatrix a, b;
  double j = 0;
  int iterations = 0;
  bool perfect = false;
};

// Throws Error on non-finite values.
RealFactors minimize(const SignMatrix& m, int d, const OptimizerConfig& config = {});

struct IntFactors {
  IntMatrix a, b;
  std::int64_t scale = 1;
  unsigned nu = 0;   // |entry| < 2^nu
  unsigned tau = 0;  // every product in [-2^tau, 2^tau]
};

// Smallest power-of-two scale (2^0..2^16) whose rounding keeps every
// unmasked sign; checked with exact integer products. Throws InputError if
// none works.
IntFactors quantize(const RealFactors& real, const SignMatrix& m);

struct Violation {
  std::size_t row, col;
  std::string reason;
};

struct VerifyReport {
  bool ok = true;
  std::vector<Violation> violations;
};

VerifyReport verify_reconstruction(const IntMatrix& a, const IntMatrix& b, const SignMatrix& m);
VerifyReport verify_reconstruction(const RealMatrix& a, const RealMatrix& b, const SignMatrix& m);

// Exact max |(A B^T)_{jk}| over all entries including the diagonal.
std::int64_t max_abs_product(const IntMatrix& a, const IntMatrix& b);
unsigned tau_for(std::int64_t max_abs_product);
unsigned bit_length(std::uint64_t v);

struct RankSearchConfig {
  int d_min = 1;
  int d_max = 0;  // 0 means n
  // Linear scan below the first feasible power of two.
  bool scan_down = true;
  OptimizerConfig optimizer;
};

struct RankAttempt {
  int d;
  double best_j;
  bool feasible;
};

struct RankResult {
  int d = 0;
  IntFactors factors;
  std::vector<RankAttempt> attempts;
};

// Throws InputError listing the best J per tried d if nothing succeeds.
RankResult search_rank(const SignMatrix& m, const RankSearchConfig& config = {});

double compression_factor(double n, double d, double nu);

// Both routing matrices compressed to a common rank d (the smaller factor
// pair is zero-padded) with shared nu and tau.
struct CompressedRouting {
  std::uint32_t n = 0, d = 0, nu = 0, tau = 0;
  IntMatrix a_ne, b_ne, a_nw, b_nw;
};

struct CompressionReport {
  RankResult ne, nw;
  double factor = 0;
};

CompressedRouting compress_routing(const roadgraph::NextHopMatrices& m, const RankSearchConfig& config,
                                   CompressionReport* report = nullptr);

// Rebuilds next-hop bits from product signs.
roadgraph::NextHopMatrices reconstruct(const CompressedRouting& c);

// Recomputes nu and tau by exact arithmetic and compares with the stored
// values; tau must be an upper bound. Throws InputError.
void check_bounds(const CompressedRouting& c);

// "PRSF", u32 n, d, nu, tau, then A_NE, B_NE, A_NW, B_NW row-major i64.
void save_compressed(const CompressedRouting& c, const std::filesystem::path& path);
CompressedRouting load_compressed(const std::filesystem::path& path);
Bytes serialize_compressed(const CompressedRouting& c);
CompressedRouting parse_compressed(ByteView data);

}  // namespace privnav::signfactor
