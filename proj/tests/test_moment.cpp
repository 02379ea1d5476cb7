#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "sosl1/error.hpp"
#include "sosl1/moment.hpp"
#include "support.hpp"

namespace sosl1 {
namespace {

TEST(Basis, UnivariateDegreeTwo) {
  const auto b = enumerate_basis(1, 2);
  ASSERT_EQ(b.size(), 3u);
  EXPECT_EQ(b[0], Monomial{0});
  EXPECT_EQ(b[1], Monomial{1});
  EXPECT_EQ(b[2], Monomial{2});
}

TEST(Basis, Sizes) {
  EXPECT_EQ(enumerate_basis(2, 2).size(), 6u);
  EXPECT_EQ(enumerate_basis(2, 5).size(), 21u);
  EXPECT_EQ(enumerate_basis(2, 3).size(), 10u);
  EXPECT_EQ(enumerate_basis(2, 10).size(), 66u);
  for (std::size_t n = 1; n <= 4; ++n) {
    for (int d = 0; d <= 6; ++d) EXPECT_EQ(MonomialBasis(n, d).size(), basis_size(n, d));
  }
}

TEST(Basis, GradedLexAndBijection) {
  const auto b = enumerate_basis(3, 4);
  EXPECT_EQ(b.at(Monomial::one(3)), 0u);
  for (std::size_t i = 0; i < b.size(); ++i) {
    EXPECT_EQ(b.at(b[i]), i);
    if (i > 0) EXPECT_LT(b[i - 1], b[i]);
  }
  EXPECT_FALSE(b.index_of(Monomial{5, 0, 0}).has_value());
}

TEST(Basis, RejectsBadInput) {
  EXPECT_THROW(enumerate_basis(0, 2), InvalidArgument);
  EXPECT_THROW(enumerate_basis(-1, 2), InvalidArgument);
  EXPECT_THROW(enumerate_basis(2, -1), InvalidArgument);
}

TEST(BasisProducts, UnivariateDegreeOne) {
  const auto bp = basis_products(1, 1);
  ASSERT_EQ(bp.count(), 3u);
  Eigen::Matrix2d b0, b1, b2;
  b0 << 1, 0, 0, 0;
  b1 << 0, 1, 1, 0;
  b2 << 0, 0, 0, 1;
  EXPECT_EQ(bp.dense(0).dense(), Eigen::MatrixXd(b0));
  EXPECT_EQ(bp.dense(1).dense(), Eigen::MatrixXd(b1));
  EXPECT_EQ(bp.dense(2).dense(), Eigen::MatrixXd(b2));
}

TEST(BasisProducts, MixedDegreeOne) {
  const auto bp = basis_products(2, 1);
  const auto& basis = bp.basis();
  const std::size_t a = bp.product_basis().at(Monomial{1, 1});
  const auto m = bp.dense(a).dense();
  const auto i = static_cast<Eigen::Index>(basis.at(Monomial{1, 0}));
  const auto j = static_cast<Eigen::Index>(basis.at(Monomial{0, 1}));
  EXPECT_EQ(m.sum(), 2.0);
  EXPECT_EQ(m(i, j), 1.0);
  EXPECT_EQ(m(j, i), 1.0);
}

TEST(BasisProducts, EntryCountsAndTotal) {
  for (std::size_t n = 1; n <= 3; ++n) {
    for (int d = 0; d <= 3; ++d) {
      BasisProducts bp(n, d);
      const auto& basis = bp.basis();
      double total = 0.0;
      for (std::size_t a = 0; a < bp.count(); ++a) {
        // Count pairs (β, γ) with β + γ = α directly.
        std::size_t pairs = 0;
        for (std::size_t i = 0; i < basis.size(); ++i) {
          for (std::size_t j = 0; j < basis.size(); ++j) {
            if (basis[i] * basis[j] == bp.product_basis()[a]) ++pairs;
          }
        }
        EXPECT_EQ(bp.positions(a).size(), pairs);
        total += bp.dense(a).dense().sum();
      }
      EXPECT_EQ(total, static_cast<double>(basis.size() * basis.size()));
    }
  }
}

TEST(BasisProducts, OuterProductIdentity) {
  // v_d(x) v_d(x)ᵀ = Σ_α x^α Bα at random points.
  std::mt19937_64 rng(201);
  std::uniform_real_distribution<double> coord(-1.0, 1.0);
  BasisProducts bp(2, 3);
  for (int t = 0; t < 20; ++t) {
    const std::vector<double> x{coord(rng), coord(rng)};
    Eigen::VectorXd v(static_cast<Eigen::Index>(bp.basis().size()));
    for (std::size_t i = 0; i < bp.basis().size(); ++i) v[static_cast<Eigen::Index>(i)] = bp.basis()[i].eval(x);
    Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(v.size(), v.size());
    for (std::size_t a = 0; a < bp.count(); ++a) rhs += bp.product_basis()[a].eval(x) * bp.dense(a).dense();
    EXPECT_LE((v * v.transpose() - rhs).cwiseAbs().maxCoeff(), 1e-14);
  }
}

TEST(MomentMatrix, IdentityExample) {
  const MomentVector y(1, 2, Eigen::Vector3d(1, 0, 1));
  EXPECT_EQ(moment_matrix(y, 1).dense(), Eigen::MatrixXd::Identity(2, 2));
}

TEST(MomentMatrix, LebesgueOnInterval) {
  // Moments of dx on [−1, 1] from quadrature, not from the closed form.
  Eigen::Vector3d v;
  for (int k = 0; k < 3; ++k) {
    v[k] = testing::simpson([k](double x) { return std::pow(x, k); }, -1.0, 1.0, 2000);
  }
  const auto m = moment_matrix(MomentVector(1, 2, v), 1).dense();
  EXPECT_NEAR(m(0, 0), 2.0, 1e-12);
  EXPECT_NEAR(m(0, 1), 0.0, 1e-12);
  EXPECT_NEAR(m(1, 0), 0.0, 1e-12);
  EXPECT_NEAR(m(1, 1), 2.0 / 3.0, 1e-12);
}

TEST(MomentMatrix, DiracIsRankOneOuterProduct) {
  const std::vector<double> p{0.7, -1.3};
  const auto y = MomentVector::atomic(2, 4, {p}, {1.0});
  const auto m = moment_matrix(y, 2);
  const MonomialBasis basis(2, 2);
  Eigen::VectorXd v(static_cast<Eigen::Index>(basis.size()));
  for (std::size_t i = 0; i < basis.size(); ++i) v[static_cast<Eigen::Index>(i)] = basis[i].eval(p);
  EXPECT_LE((m.dense() - v * v.transpose()).cwiseAbs().maxCoeff(), 1e-13);
  const auto ev = m.eigenvalues();
  EXPECT_NEAR(ev(ev.size() - 1), v.squaredNorm(), 1e-12);
  EXPECT_LE(std::abs(ev(ev.size() - 2)), 1e-12);
  EXPECT_TRUE(m.is_psd());
}

TEST(MomentMatrix, OrderTooSmall) {
  const MomentVector y(1, 2, Eigen::Vector3d(1, 0, 1));
  EXPECT_THROW(moment_matrix(y, 2), InvalidArgument);
}

TEST(MomentVector, IncompleteMapRejected) {
  std::map<Monomial, double> m{{Monomial{0}, 1.0}, {Monomial{1}, 0.0}};
  EXPECT_THROW(MomentVector::from_map(1, 2, m), InvalidArgument);
  EXPECT_THROW(MomentVector(1, 2, Eigen::Vector2d(1, 0)), InvalidArgument);
}

TEST(Riesz, Definitions) {
  std::mt19937_64 rng(202);
  const auto y = testing::random_atomic_moments(rng, 2, 6, 3);
  EXPECT_EQ(riesz(y, Polynomial::constant(2, 1.0)), y.at(Monomial{0, 0}));
  const Polynomial x1_6(2, {{Monomial{6, 0}, 1.0}});
  EXPECT_EQ(riesz(y, x1_6), y.at(Monomial{6, 0}));
  EXPECT_THROW(riesz(y, Polynomial(2, {{Monomial{7, 0}, 1.0}})), InvalidArgument);
  EXPECT_THROW(riesz(y, Polynomial(3)), InvalidArgument);
}

TEST(Riesz, DiracEvaluates) {
  std::mt19937_64 rng(203);
  const std::vector<double> p{0.4, -0.9};
  const auto y = MomentVector::atomic(2, 6, {p}, {1.0});
  for (int t = 0; t < 20; ++t) {
    const auto f = testing::random_polynomial(rng, 2, 6);
    EXPECT_NEAR(riesz(y, f), f.eval(p), 1e-12);
  }
}

TEST(Gaussian, OddMomentsVanish) {
  const auto y = gaussian_moments(2, 6);
  for (std::size_t i = 0; i < y.basis().size(); ++i) {
    const auto& m = y.basis()[i];
    if (m[0] % 2 || m[1] % 2) EXPECT_EQ(y[i], 0.0);
  }
}

TEST(Gaussian, UnivariateRatioMatchesIntegral) {
  const double i0 = testing::gaussian_integral(0);
  const double i2 = testing::gaussian_integral(2);
  const double i4 = testing::gaussian_integral(4);
  EXPECT_NEAR(i0, std::sqrt(M_PI), 1e-10);
  const auto y = gaussian_moments(1, 4);
  EXPECT_NEAR(y.at(Monomial{2}) / y.at(Monomial{0}), i2 / i0, 1e-10);
  EXPECT_NEAR(y.at(Monomial{4}) / y.at(Monomial{0}), i4 / i0, 1e-10);
}

TEST(Gaussian, StrictlyFeasibleForCompactProgram) {
  for (int d = 1; d <= 4; ++d) {
    const auto y = gaussian_moments(2, 2 * d);
    EXPECT_LE(y.values().cwiseAbs().maxCoeff(), 0.5 + 1e-15);
    EXPECT_GT(moment_matrix(y, d).min_eigenvalue(), 0.0);
  }
}

TEST(MomentProperty, GramIdentity) {
  // L_y(g²) = ĝᵀ M_d(y) ĝ.
  std::mt19937_64 rng(204);
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 1 + t % 3;
    const int d = 1 + t % 3;
    const auto y = testing::random_atomic_moments(rng, n, 2 * d, 4);
    const auto g = testing::random_polynomial(rng, n, d, 0.7);
    MonomialBasis basis(n, d);
    Eigen::VectorXd gh = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(basis.size()));
    for (const auto& [m, c] : g.terms()) gh[static_cast<Eigen::Index>(basis.at(m))] = c;
    const double lhs = riesz(y, g * g);
    const double rhs = gh.dot(moment_matrix(y, d).dense() * gh);
    EXPECT_NEAR(lhs, rhs, 1e-10 * (1.0 + std::abs(lhs)));
  }
}

TEST(MomentProperty, BoundFromPsdMomentMatrix) {
  std::mt19937_64 rng(205);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 1 + t % 3;
    const int d = 1 + (t / 3) % 3;
    const auto y = testing::random_atomic_moments(rng, n, 2 * d, 1 + t % 5);
    double bound = y.at(Monomial::one(n));
    for (std::size_t i = 0; i < n; ++i) bound = std::max(bound, y.at(Monomial::pure_power(n, i, 2 * d)));
    EXPECT_LE(y.values().cwiseAbs().maxCoeff(), bound + 1e-12);
  }
}

TEST(MomentProperty, ReconstructionFromBasisProducts) {
  std::mt19937_64 rng(206);
  for (int t = 0; t < 20; ++t) {
    const std::size_t n = 1 + t % 3;
    const int d = 1 + t % 2;
    const auto y = testing::random_atomic_moments(rng, n, 2 * d, 3);
    BasisProducts bp(n, d);
    Eigen::MatrixXd s = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(bp.basis().size()),
                                              static_cast<Eigen::Index>(bp.basis().size()));
    for (std::size_t a = 0; a < bp.count(); ++a) s += y.at(bp.product_basis()[a]) * bp.dense(a).dense();
    EXPECT_EQ(s, moment_matrix(y, d).dense());
  }
}

TEST(SymmetricMatrix, UpperTriangleAuthoritative) {
  Eigen::Matrix2d m;
  m << 1, 2, 99, 3;
  const SymmetricMatrix s(m);
  EXPECT_EQ(s(1, 0), 2.0);
  EXPECT_THROW(SymmetricMatrix(std::size_t{0}), InvalidArgument);
}

}  // namespace
}  // namespace sosl1
