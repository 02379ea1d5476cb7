#include "sosl1/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sosl1/error.hpp"

namespace sosl1 {

Monomial::Monomial(std::vector<int> exps) : exps_(std::move(exps)) {
  for (int e : exps_) {
    if (e < 0) throw InvalidArgument("negative exponent in monomial");
    degree_ += e;
  }
}

Monomial Monomial::pure_power(std::size_t nvars, std::size_t var, int power) {
  if (var >= nvars) throw InvalidArgument("variable index out of range");
  std::vector<int> e(nvars, 0);
  e[var] = power;
  return Monomial(std::move(e));
}

Monomial Monomial::operator*(const Monomial& other) const {
  if (nvars() != other.nvars()) throw InvalidArgument("monomial variable count mismatch");
  std::vector<int> e(exps_);
  for (std::size_t i = 0; i < e.size(); ++i) e[i] += other.exps_[i];
  return Monomial(std::move(e));
}

double Monomial::eval(std::span<const double> point) const {
  double v = 1.0;
  for (std::size_t i = 0; i < exps_.size(); ++i) {
    for (int k = 0; k < exps_[i]; ++k) v *= point[i];
  }
  return v;
}

bool operator<(const Monomial& a, const Monomial& b) {
  if (a.degree_ != b.degree_) return a.degree_ < b.degree_;
  // Same degree: larger leading exponents come first.
  return std::lexicographical_compare(b.exps_.begin(), b.exps_.end(), a.exps_.begin(),
                                      a.exps_.end());
}

Polynomial::Polynomial(std::size_t nvars) : nvars_(nvars) {
  if (nvars == 0) throw InvalidArgument("polynomial needs at least one variable");
}

Polynomial::Polynomial(std::size_t nvars, std::vector<std::pair<Monomial, double>> terms)
    : Polynomial(nvars) {
  std::map<Monomial, bool> seen;
  for (auto& [m, c] : terms) {
    check_arity(m);
    if (!seen.emplace(m, true).second) throw InvalidArgument("duplicate monomial");
    if (c != 0.0) terms_.emplace(std::move(m), c);
  }
}

Polynomial Polynomial::constant(std::size_t nvars, double c) {
  Polynomial p(nvars);
  p.add_term(Monomial::one(nvars), c);
  return p;
}

int Polynomial::degree() const {
  // Map is graded, so the last key has maximal degree.
  return terms_.empty() ? 0 : terms_.rbegin()->first.degree();
}

double Polynomial::coefficient(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? 0.0 : it->second;
}

double Polynomial::l1_norm() const {
  double s = 0.0;
  for (const auto& [m, c] : terms_) s += std::abs(c);
  return s;
}

double Polynomial::eval(std::span<const double> point) const {
  if (point.size() != nvars_) throw InvalidArgument("evaluation point has wrong dimension");
  double v = 0.0;
  for (const auto& [m, c] : terms_) v += c * m.eval(point);
  return v;
}

void Polynomial::add_term(const Monomial& m, double c) {
  check_arity(m);
  if (c == 0.0) return;
  auto [it, inserted] = terms_.emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0.0) terms_.erase(it);
  }
}

Polynomial Polynomial::operator+(const Polynomial& other) const {
  check_same(other);
  Polynomial r(*this);
  for (const auto& [m, c] : other.terms_) r.add_term(m, c);
  return r;
}

Polynomial Polynomial::operator-(const Polynomial& other) const {
  check_same(other);
  Polynomial r(*this);
  for (const auto& [m, c] : other.terms_) r.add_term(m, -c);
  return r;
}

Polynomial Polynomial::operator*(const Polynomial& other) const {
  check_same(other);
  Polynomial r(nvars_);
  for (const auto& [ma, ca] : terms_) {
    for (const auto& [mb, cb] : other.terms_) r.add_term(ma * mb, ca * cb);
  }
  return r;
}

Polynomial Polynomial::operator*(double c) const {
  Polynomial r(nvars_);
  if (c == 0.0) return r;
  for (const auto& [m, v] : terms_) {
    double p = v * c;
    if (p != 0.0) r.terms_.emplace_hint(r.terms_.end(), m, p);
  }
  return r;
}

void Polynomial::check_arity(const Monomial& m) const {
  if (m.nvars() != nvars_) {
    throw InvalidArgument("monomial has " + std::to_string(m.nvars()) +
                          " exponents, polynomial has " + std::to_string(nvars_) +
                          " variables");
  }
}

void Polynomial::check_same(const Polynomial& other) const {
  if (other.nvars_ != nvars_) throw InvalidArgument("polynomial variable count mismatch");
}

Polynomial motzkin_like() {
  return Polynomial(2, {{Monomial{4, 2}, 1.0},
                        {Monomial{2, 4}, 1.0},
                        {Monomial{2, 2}, -1.0},
                        {Monomial{0, 0}, 1.0 / 27.0}});
}

}  // namespace sosl1
