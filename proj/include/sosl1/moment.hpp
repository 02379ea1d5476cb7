#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "sosl1/polynomial.hpp"

namespace sosl1 {

/// All exponents α ∈ ℕⁿ with |α| ≤ d in graded-lex order; size C(n+d, n).
class MonomialBasis {
 public:
  MonomialBasis(std::size_t nvars, int max_degree);

  std::size_t nvars() const noexcept { return nvars_; }
  int max_degree() const noexcept { return max_degree_; }
  std::size_t size() const noexcept { return monomials_.size(); }
  const Monomial& operator[](std::size_t i) const { return monomials_[i]; }
  const std::vector<Monomial>& monomials() const noexcept { return monomials_; }

  std::optional<std::size_t> index_of(const Monomial& m) const;
  /// Throws InvalidArgument when m is outside the basis.
  std::size_t at(const Monomial& m) const;

 private:
  std::size_t nvars_;
  int max_degree_;
  std::vector<Monomial> monomials_;
  std::map<Monomial, std::size_t> index_;
};

MonomialBasis enumerate_basis(int nvars, int max_degree);

/// C(n + d, n).
std::size_t basis_size(std::size_t nvars, int max_degree);

/// Dense real symmetric matrix. The upper triangle of the source is
/// authoritative; storage is always exactly symmetric.
class SymmetricMatrix {
 public:
  explicit SymmetricMatrix(std::size_t dim);
  explicit SymmetricMatrix(const Eigen::MatrixXd& upper);

  std::size_t dim() const noexcept { return static_cast<std::size_t>(m_.rows()); }
  double operator()(std::size_t i, std::size_t j) const { return m_(i, j); }
  /// Sets (i,j) and (j,i).
  void set(std::size_t i, std::size_t j, double v);
  const Eigen::MatrixXd& dense() const noexcept { return m_; }

  /// Ascending eigenvalues.
  Eigen::VectorXd eigenvalues() const;
  double min_eigenvalue() const;
  double max_eigenvalue() const;
  /// λ_min ≥ −rel_tol·(1 + |λ_max|).
  bool is_psd(double rel_tol = 1e-8) const;

 private:
  Eigen::MatrixXd m_;
};

/// The 0/1 matrices Bα with v_d(x) v_d(x)ᵀ = Σ_α x^α Bα, for α ∈ ℕⁿ_{2d}.
///
/// Each Bα is kept as the list of (row, col) positions holding a one, both
/// orientations included, so ⟨X, Bα⟩ is a sum of selected entries of X.
class BasisProducts {
 public:
  using Position = std::pair<std::size_t, std::size_t>;

  BasisProducts(std::size_t nvars, int half_degree);

  const MonomialBasis& basis() const noexcept { return basis_; }
  const MonomialBasis& product_basis() const noexcept { return product_basis_; }
  std::size_t count() const noexcept { return positions_.size(); }

  /// Positions of Bα, α given by its index in product_basis().
  const std::vector<Position>& positions(std::size_t alpha) const { return positions_[alpha]; }
  SymmetricMatrix dense(std::size_t alpha) const;
  /// ⟨X, Bα⟩.
  double inner(const Eigen::MatrixXd& x, std::size_t alpha) const;

 private:
  MonomialBasis basis_;
  MonomialBasis product_basis_;
  std::vector<std::vector<Position>> positions_;
};

BasisProducts basis_products(int nvars, int half_degree);

/// A real sequence y indexed by ℕⁿ_{order}.
class MomentVector {
 public:
  MomentVector(std::size_t nvars, int order, Eigen::VectorXd values);
  /// Every α in ℕⁿ_{order} must be present; throws InvalidArgument otherwise.
  static MomentVector from_map(std::size_t nvars, int order,
                               const std::map<Monomial, double>& values);
  /// y_α = Σ_k w_k p_k^α for an atomic measure Σ_k w_k δ_{p_k}.
  static MomentVector atomic(std::size_t nvars, int order,
                             const std::vector<std::vector<double>>& points,
                             const std::vector<double>& weights);

  std::size_t nvars() const noexcept { return basis_->nvars(); }
  int order() const noexcept { return basis_->max_degree(); }
  const MonomialBasis& basis() const noexcept { return *basis_; }
  const Eigen::VectorXd& values() const noexcept { return values_; }
  double operator[](std::size_t i) const { return values_[static_cast<Eigen::Index>(i)]; }
  double at(const Monomial& m) const;

 private:
  std::shared_ptr<const MonomialBasis> basis_;
  Eigen::VectorXd values_;
};

/// M_d(y)(β, γ) = y_{β+γ}; needs order(y) ≥ 2d.
SymmetricMatrix moment_matrix(const MomentVector& y, int half_degree);

/// L_y(f) = Σ_α f_α y_α; needs deg f ≤ order(y).
double riesz(const MomentVector& y, const Polynomial& f);

/// Moments of e^{−‖x‖²}dx up to the given order, scaled so max |y_α| = 1/2.
MomentVector gaussian_moments(int nvars, int order);

/// Unscaled ∫ x^α e^{−‖x‖²} dx = Π_j Γ((α_j+1)/2) when every α_j is even, else 0.
double raw_gaussian_moment(const Monomial& alpha);

}  // namespace sosl1
