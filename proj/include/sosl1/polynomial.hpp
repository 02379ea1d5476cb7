#pragma once

#include <cstddef>
#include <initializer_list>
#include <map>
#include <span>
#include <utility>
#include <vector>

namespace sosl1 {

/// Exponent vector x^α = x₁^α₁ ··· x_n^α_n.
///
/// Monomials are ordered graded-lexicographically: lower total degree first,
/// ties broken so that (1,0) precedes (0,1). This order fixes the row and
/// column indexing of every moment matrix in the library.
class Monomial {
 public:
  Monomial() = default;
  explicit Monomial(std::vector<int> exps);
  Monomial(std::initializer_list<int> exps) : Monomial(std::vector<int>(exps)) {}

  static Monomial one(std::size_t nvars) { return Monomial(std::vector<int>(nvars, 0)); }
  /// x_var^power.
  static Monomial pure_power(std::size_t nvars, std::size_t var, int power);

  std::size_t nvars() const noexcept { return exps_.size(); }
  int degree() const noexcept { return degree_; }
  int operator[](std::size_t i) const { return exps_[i]; }
  std::span<const int> exponents() const noexcept { return exps_; }

  /// Variables must agree.
  Monomial operator*(const Monomial& other) const;

  double eval(std::span<const double> point) const;

  friend bool operator==(const Monomial& a, const Monomial& b) { return a.exps_ == b.exps_; }
  /// Graded-lex position order.
  friend bool operator<(const Monomial& a, const Monomial& b);

 private:
  std::vector<int> exps_;
  int degree_ = 0;
};

/// Sparse real polynomial in a fixed number of variables.
///
/// Stored coefficients are never exactly zero; arithmetic drops exact-zero
/// results and nothing else.
class Polynomial {
 public:
  using TermMap = std::map<Monomial, double>;

  explicit Polynomial(std::size_t nvars = 1);
  /// Throws InvalidArgument on wrong arity or a repeated monomial. Zero
  /// coefficients are dropped.
  Polynomial(std::size_t nvars, std::vector<std::pair<Monomial, double>> terms);

  static Polynomial constant(std::size_t nvars, double c);

  std::size_t nvars() const noexcept { return nvars_; }
  const TermMap& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }
  bool is_zero() const noexcept { return terms_.empty(); }

  /// Max total degree over stored terms; 0 for the zero polynomial.
  int degree() const;
  double coefficient(const Monomial& m) const;
  double l1_norm() const;
  double eval(std::span<const double> point) const;

  /// Adds c·m in place.
  void add_term(const Monomial& m, double c);

  Polynomial operator+(const Polynomial& other) const;
  Polynomial operator-(const Polynomial& other) const;
  Polynomial operator*(const Polynomial& other) const;
  Polynomial operator*(double c) const;
  Polynomial operator-() const { return *this * -1.0; }

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
  }

 private:
  void check_arity(const Monomial& m) const;
  void check_same(const Polynomial& other) const;

  std::size_t nvars_;
  TermMap terms_;
};

inline Polynomial operator*(double c, const Polynomial& p) { return p * c; }

/// x₁²x₂²(x₁²+x₂²−1) + 1/27: nonnegative on ℝ², not a sum of squares.
Polynomial motzkin_like();

}  // namespace sosl1
