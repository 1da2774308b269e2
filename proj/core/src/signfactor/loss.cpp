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

#include "privnav/common/error.hpp"
#include "privnav/signfactor/signfactor.hpp"

namespace privnav::signfactor {

SignMatrix SignMatrix::from_bits(std::size_t n, const std::vector<std::uint8_t>& bits) {
  if (bits.size() != n * n) throw InputError("sign matrix: expected n*n bits");
  SignMatrix m{RealMatrix(n, n)};
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k) m.s(j, k) = j == k ? 0.0 : (bits[j * n + k] ? 1.0 : -1.0);
  return m;
}

SignMatrix SignMatrix::from_signs(const RealMatrix& signs, bool mask_diagonal) {
  SignMatrix m{signs};
  for (Eigen::Index j = 0; j < signs.rows(); ++j)
    for (Eigen::Index k = 0; k < signs.cols(); ++k) {
      double v = signs(j, k);
      if (v != 1.0 && v != -1.0 && v != 0.0) throw InputError("sign matrix entries must be -1, 0 or +1");
    }
  if (mask_diagonal) m.s.diagonal().setZero();
  return m;
}

double huber_loss(double x, double t) {
  double u = t * x;
  if (u >= 1) return 0;
  if (u >= -1) return (1 - u) * (1 - u);
  return -4 * u;
}

double huber_grad(double x, double t) {
  double u = t * x;
  if (u >= 1) return 0;
  if (u >= -1) return -2 * t * (1 - u);
  return -4 * t;
}

namespace {

void check_shapes(const RealMatrix& a, const RealMatrix& b, const SignMatrix& m) {
  if (a.rows() != m.s.rows() || b.rows() != m.s.cols() || a.cols() != b.cols())
    throw InputError("objective: shape mismatch");
}

}  // namespace

double objective(const RealMatrix& a, const RealMatrix& b, const SignMatrix& m) {
  check_shapes(a, b, m);
  RealMatrix p = a * b.transpose();
  double j = 0;
  for (Eigen::Index c = 0; c < p.cols(); ++c)
    for (Eigen::Index r = 0; r < p.rows(); ++r)
      if (m.s(r, c) != 0) j += huber_loss(p(r, c), m.s(r, c));
  return j;
}

std::pair<RealMatrix, RealMatrix> objective_grad(const RealMatrix& a, const RealMatrix& b, const SignMatrix& m) {
  check_shapes(a, b, m);
  RealMatrix g = a * b.transpose();
  for (Eigen::Index c = 0; c < g.cols(); ++c)
    for (Eigen::Index r = 0; r < g.rows(); ++r)
      g(r, c) = m.s(r, c) != 0 ? huber_grad(g(r, c), m.s(r, c)) : 0.0;
  return {g * b, g.transpose() * a};
}

double compression_factor(double n, double d, double nu) {
  if (n <= 0 || d <= 0 || nu <= 0) throw InputError("compression_factor: arguments must be positive");
  return n / (2 * d * nu);
}

}  // namespace privnav::signfactor
