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
#include <deque>
#include <limits>
#include <random>
#include <sstream>

#include "privnav/common/error.hpp"
#include "privnav/signfactor/signfactor.hpp"

namespace privnav::signfactor {
namespace {

using Vec = Eigen::VectorXd;

// Objective over the stacked parameter vector [vec(A); vec(B)].
class Problem {
 public:
  Problem(const SignMatrix& m, int d) : m_(m), n_(static_cast<Eigen::Index>(m.n())), d_(d) {}

  Eigen::Index size() const { return 2 * n_ * d_; }

  double eval(const Vec& x, Vec& grad) {
    Eigen::Map<const RealMatrix> a(x.data(), n_, d_);
    Eigen::Map<const RealMatrix> b(x.data() + n_ * d_, n_, d_);
    p_.noalias() = a * b.transpose();
    double j = 0;
    for (Eigen::Index c = 0; c < n_; ++c)
      for (Eigen::Index r = 0; r < n_; ++r) {
        double t = m_.s(r, c);
        if (t == 0) {
          p_(r, c) = 0;
          continue;
        }
        double v = p_(r, c);
        j += huber_loss(v, t);
        p_(r, c) = huber_grad(v, t);
      }
    grad.resize(size());
    Eigen::Map<RealMatrix> ga(grad.data(), n_, d_);
    Eigen::Map<RealMatrix> gb(grad.data() + n_ * d_, n_, d_);
    ga.noalias() = p_ * b;
    gb.noalias() = p_.transpose() * a;
    if (!std::isfinite(j) || !grad.allFinite()) throw Error("optimizer: non-finite objective or gradient");
    return j;
  }

 private:
  const SignMatrix& m_;
  Eigen::Index n_, d_;
  RealMatrix p_;
};

struct LbfgsState {
  std::deque<Vec> s, y;
  std::deque<double> rho;

  void reset() {
    s.clear();
    y.clear();
    rho.clear();
  }

  Vec direction(const Vec& g) const {
    Vec q = -g;
    std::vector<double> alpha(s.size());
    for (int i = static_cast<int>(s.size()) - 1; i >= 0; --i) {
      alpha[i] = rho[i] * s[i].dot(q);
      q -= alpha[i] * y[i];
    }
    if (!s.empty()) q *= s.back().dot(y.back()) / y.back().squaredNorm();
    for (std::size_t i = 0; i < s.size(); ++i) {
      double beta = rho[i] * y[i].dot(q);
      q += (alpha[i] - beta) * s[i];
    }
    return q;
  }
};

struct RunResult {
  Vec x;
  double j;
  int iterations;
};

RunResult run_lbfgs(Problem& prob, Vec x, const OptimizerConfig& cfg) {
  Vec g, g_new, x_new;
  double f = prob.eval(x, g);
  LbfgsState mem;
  int it = 0;
  int polish_left = -1;
  double window_start = f;
  for (; it < cfg.max_iterations; ++it) {
    if (f < 1.0 && polish_left < 0) polish_left = cfg.polish_iterations;
    if (polish_left == 0 || f == 0.0) break;
    if (polish_left > 0) --polish_left;

    Vec dir = mem.direction(g);
    double slope = g.dot(dir);
    if (!(slope < 0)) {
      mem.reset();
      dir = -g;
      slope = -g.squaredNorm();
      if (slope == 0) break;
    }
    double step = mem.s.empty() ? std::min(1.0, 1.0 / std::sqrt(-slope)) : 1.0;
    double f_new = 0;
    bool accepted = false;
    for (int k = 0; k < 50; ++k) {
      x_new = x + step * dir;
      f_new = prob.eval(x_new, g_new);
      if (f_new <= f + 1e-4 * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      if (mem.s.empty()) break;
      mem.reset();
      continue;
    }
    Vec sv = x_new - x, yv = g_new - g;
    double sy = sv.dot(yv);
    if (sy > 1e-12 * yv.squaredNorm()) {
      if (static_cast<int>(mem.s.size()) == cfg.history) {
        mem.s.pop_front();
        mem.y.pop_front();
        mem.rho.pop_front();
      }
      mem.s.push_back(std::move(sv));
      mem.y.push_back(std::move(yv));
      mem.rho.push_back(1.0 / sy);
    }
    x.swap(x_new);
    g.swap(g_new);
    f = f_new;
    // Stagnation: less than 1e-9 relative progress over 200 iterations.
    if (it % 200 == 199) {
      if (polish_left < 0 && window_start - f < 1e-9 * std::max(1.0, window_start)) break;
      window_start = f;
    }
  }
  return {std::move(x), f, it};
}

bool signs_match(const RealMatrix& a, const RealMatrix& b, const SignMatrix& m) {
  RealMatrix p = a * b.transpose();
  for (Eigen::Index c = 0; c < p.cols(); ++c)
    for (Eigen::Index r = 0; r < p.rows(); ++r) {
      double t = m.s(r, c);
      if (t != 0 && !(p(r, c) * t > 0)) return false;
    }
  return true;
}

}  // namespace

RealFactors minimize(const SignMatrix& m, int d, const OptimizerConfig& config) {
  if (d < 1) throw InputError("minimize: rank must be positive");
  const Eigen::Index n = static_cast<Eigen::Index>(m.n());
  Problem prob(m, d);
  RealFactors best;
  best.j = std::numeric_limits<double>::infinity();
  for (int attempt = 0; attempt <= config.restarts; ++attempt) {
    std::mt19937_64 rng(config.seed * 0x9e3779b97f4a7c15ull + static_cast<std::uint64_t>(attempt) * 7919 +
                        static_cast<std::uint64_t>(d));
    std::normal_distribution<double> init(0.0, 1.0 / std::sqrt(static_cast<double>(d)));
    Vec x(prob.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = init(rng);
    RunResult run = run_lbfgs(prob, std::move(x), config);
    RealFactors cur;
    cur.a = Eigen::Map<const RealMatrix>(run.x.data(), n, d);
    cur.b = Eigen::Map<const RealMatrix>(run.x.data() + n * d, n, d);
    cur.j = run.j;
    cur.iterations = run.iterations;
    cur.perfect = signs_match(cur.a, cur.b, m);
    if (cur.perfect) return cur;
    if (cur.j < best.j) best = std::move(cur);
  }
  return best;
}

}  // namespace privnav::signfactor
