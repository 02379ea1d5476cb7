#pragma once

// Shared fixtures and independent oracles for the test binaries.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "sosl1/approx.hpp"
#include "sosl1/moment.hpp"
#include "sosl1/polynomial.hpp"
#include "sosl1/sdp.hpp"

namespace sosl1::testing {

// ---------------------------------------------------------------------------
// Random instances. Every generator takes the engine by reference so a seeded
// mt19937_64 gives a reproducible stream.

inline Polynomial random_polynomial(std::mt19937_64& rng, std::size_t n, int max_degree,
                                    double density = 0.6) {
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  std::bernoulli_distribution keep(density);
  MonomialBasis basis(n, max_degree);
  Polynomial f(n);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    if (keep(rng)) f.add_term(basis[i], coef(rng));
  }
  return f;
}

/// Random Gram matrix G = B Bᵀ + shift·I over the degree-d basis.
inline Eigen::MatrixXd random_gram(std::mt19937_64& rng, std::size_t dim, double shift = 0.0) {
  std::normal_distribution<double> z(0.0, 1.0);
  Eigen::MatrixXd b(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (Eigen::Index i = 0; i < b.rows(); ++i) {
    for (Eigen::Index j = 0; j < b.cols(); ++j) b(i, j) = z(rng);
  }
  Eigen::MatrixXd g = b * b.transpose() / static_cast<double>(dim);
  g.diagonal().array() += shift;
  return g;
}

/// g_α = ⟨G, Bα⟩.
inline Polynomial polynomial_from_gram(const Eigen::MatrixXd& gram, std::size_t n, int d) {
  BasisProducts bp(n, d);
  Polynomial g(n);
  for (std::size_t a = 0; a < bp.count(); ++a) {
    g.add_term(bp.product_basis()[a], bp.inner(gram, a));
  }
  return g;
}

inline Polynomial random_sos(std::mt19937_64& rng, std::size_t n, int d) {
  return polynomial_from_gram(random_gram(rng, basis_size(n, d), 0.05), n, d);
}

/// Moments of Σ_k w_k δ_{p_k} with points in [−2, 2]ⁿ and weights in (0, 1].
inline MomentVector random_atomic_moments(std::mt19937_64& rng, std::size_t n, int order,
                                          int atoms) {
  std::uniform_real_distribution<double> coord(-2.0, 2.0);
  std::uniform_real_distribution<double> weight(0.05, 1.0);
  std::vector<std::vector<double>> pts;
  std::vector<double> w;
  for (int k = 0; k < atoms; ++k) {
    std::vector<double> p(n);
    for (auto& x : p) x = coord(rng);
    pts.push_back(std::move(p));
    w.push_back(weight(rng));
  }
  return MomentVector::atomic(n, order, pts, w);
}

// ---------------------------------------------------------------------------
// Quadrature oracles.

/// ∫_a^b h(x) dx by composite Simpson with `intervals` (even) panels.
inline double simpson(const std::function<double(double)>& h, double a, double b,
                      int intervals = 20000) {
  const double step = (b - a) / intervals;
  double s = h(a) + h(b);
  for (int i = 1; i < intervals; ++i) s += (i % 2 ? 4.0 : 2.0) * h(a + i * step);
  return s * step / 3.0;
}

/// ∫_ℝ x^k e^{−x²} dx, truncated to [−12, 12].
inline double gaussian_integral(int k) {
  return simpson([k](double x) { return std::pow(x, k) * std::exp(-x * x); }, -12.0, 12.0);
}

// ---------------------------------------------------------------------------
// Brute-force oracles for tiny problems.

/// min a + c over 2×2 PSD [[a, b], [b, c]] with 2b = 2, by grid search over a
/// (c = b²/a is the smallest feasible c for fixed a).
inline double trace_grid_oracle() {
  double best = HUGE_VAL;
  for (int i = 1; i <= 400000; ++i) {
    const double a = i * 1e-5;
    best = std::min(best, a + 1.0 / a);
  }
  return best;
}

/// ρ₁ of f = a + b·x + c·x² (n = 1, d = 1): minimize λ₀ + λ₁ over λ ≥ 0 with
/// (a+λ₀) + b·x + (c+λ₁)x² SOS, i.e. A, C ≥ 0 and 4AC ≥ b². For fixed λ₀ the
/// best λ₁ is explicit; λ₀ is scanned and then refined by golden section.
inline double univariate_quadratic_oracle(double a, double b, double c) {
  auto cost = [&](double l0) -> double {
    const double A = a + l0;
    if (A < 0.0) return HUGE_VAL;
    if (A == 0.0) return b == 0.0 ? l0 + std::max(0.0, -c) : HUGE_VAL;
    return l0 + std::max(0.0, b * b / (4.0 * A) - c);
  };
  const double lo = std::max(0.0, -a);
  const double hi = lo + 10.0 + std::abs(b) + std::abs(c);
  double best_x = lo;
  double best = cost(lo);
  const int samples = 200000;
  for (int i = 1; i <= samples; ++i) {
    const double x = lo + (hi - lo) * i / samples;
    if (const double v = cost(x); v < best) {
      best = v;
      best_x = x;
    }
  }
  double l = std::max(lo, best_x - (hi - lo) / samples);
  double r = std::min(hi, best_x + (hi - lo) / samples);
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int it = 0; it < 200; ++it) {
    const double m1 = r - phi * (r - l);
    const double m2 = l + phi * (r - l);
    if (cost(m1) <= cost(m2)) {
      r = m2;
    } else {
      l = m1;
    }
  }
  return std::min(best, cost(0.5 * (l + r)));
}

// ---------------------------------------------------------------------------
// The three solver micro-problems with closed-form optima.

struct MicroSdp {
  const char* name;
  sdp::ConicProblem problem;
  double optimum;
};

/// max y s.t. [[1, y], [y, 1]] ⪰ 0, written as the dual of
/// min tr X s.t. −2X₁₂ = 1. Optimum 1 at y = 1.
inline MicroSdp lmi_micro() {
  sdp::ConicProblem p;
  p.blocks = {sdp::BlockSpec::psd(2)};
  p.objective.add(0, 0, 0, 1.0);
  p.objective.add(0, 1, 1, 1.0);
  p.constraints.resize(1);
  p.constraints[0].add(0, 0, 1, -1.0);
  p.rhs = Eigen::VectorXd::Ones(1);
  return {"lmi 2x2: max y s.t. [[1,y],[y,1]] psd", std::move(p), 1.0};
}

/// min x s.t. x = 1, x ≥ 0. Optimum 1, multiplier 1.
inline MicroSdp lp_micro() {
  sdp::ConicProblem p;
  p.blocks = {sdp::BlockSpec::nonneg(1)};
  p.objective.add(0, 0, 0, 1.0);
  p.constraints.resize(1);
  p.constraints[0].add(0, 0, 0, 1.0);
  p.rhs = Eigen::VectorXd::Ones(1);
  return {"lp: min x s.t. x = 1, x >= 0", std::move(p), 1.0};
}

/// min tr X s.t. X₁₂ + X₂₁ = 2, X ⪰ 0. Optimum 2 at [[1, 1], [1, 1]].
inline MicroSdp trace_micro() {
  sdp::ConicProblem p;
  p.blocks = {sdp::BlockSpec::psd(2)};
  p.objective.add(0, 0, 0, 1.0);
  p.objective.add(0, 1, 1, 1.0);
  p.constraints.resize(1);
  p.constraints[0].add(0, 0, 1, 1.0);
  p.rhs = Eigen::VectorXd::Constant(1, 2.0);
  return {"trace: min tr X s.t. X12 + X21 = 2", std::move(p), 2.0};
}

inline std::vector<MicroSdp> micro_sdps() { return {lmi_micro(), lp_micro(), trace_micro()}; }

}  // namespace sosl1::testing
