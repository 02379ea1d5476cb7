#include "sosl1/moment.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sosl1/error.hpp"

namespace sosl1 {

namespace {

// Appends every exponent vector of total degree `remaining` over variables
// [var, n) in graded-lex order (largest leading exponent first).
void append_degree(std::vector<int>& prefix, std::size_t var, int remaining,
                   std::vector<Monomial>& out) {
  const std::size_t n = prefix.size();
  if (var + 1 == n) {
    prefix[var] = remaining;
    out.emplace_back(prefix);
    prefix[var] = 0;
    return;
  }
  for (int e = remaining; e >= 0; --e) {
    prefix[var] = e;
    append_degree(prefix, var + 1, remaining - e, out);
  }
  prefix[var] = 0;
}

}  // namespace

MonomialBasis::MonomialBasis(std::size_t nvars, int max_degree)
    : nvars_(nvars), max_degree_(max_degree) {
  if (nvars == 0) throw InvalidArgument("monomial basis needs at least one variable");
  if (max_degree < 0) throw InvalidArgument("monomial basis degree must be nonnegative");
  std::vector<int> prefix(nvars, 0);
  for (int t = 0; t <= max_degree; ++t) append_degree(prefix, 0, t, monomials_);
  for (std::size_t i = 0; i < monomials_.size(); ++i) index_.emplace(monomials_[i], i);
}

std::optional<std::size_t> MonomialBasis::index_of(const Monomial& m) const {
  auto it = index_.find(m);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t MonomialBasis::at(const Monomial& m) const {
  if (m.nvars() != nvars_) throw InvalidArgument("monomial variable count mismatch");
  auto idx = index_of(m);
  if (!idx) {
    throw InvalidArgument("monomial of degree " + std::to_string(m.degree()) +
                          " outside basis of degree " + std::to_string(max_degree_));
  }
  return *idx;
}

MonomialBasis enumerate_basis(int nvars, int max_degree) {
  if (nvars <= 0) throw InvalidArgument("number of variables must be positive");
  return MonomialBasis(static_cast<std::size_t>(nvars), max_degree);
}

std::size_t basis_size(std::size_t nvars, int max_degree) {
  // C(n+d, d) computed incrementally; exact for the sizes used here.
  std::size_t r = 1;
  for (int k = 1; k <= max_degree; ++k) r = r * (nvars + static_cast<std::size_t>(k)) / k;
  return r;
}

SymmetricMatrix::SymmetricMatrix(std::size_t dim) {
  if (dim == 0) throw InvalidArgument("symmetric matrix dimension must be positive");
  m_ = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
}

SymmetricMatrix::SymmetricMatrix(const Eigen::MatrixXd& upper) {
  if (upper.rows() == 0 || upper.rows() != upper.cols()) {
    throw InvalidArgument("symmetric matrix must be square and nonempty");
  }
  m_ = upper.selfadjointView<Eigen::Upper>();
}

void SymmetricMatrix::set(std::size_t i, std::size_t j, double v) {
  const auto a = static_cast<Eigen::Index>(i);
  const auto b = static_cast<Eigen::Index>(j);
  m_(a, b) = v;
  m_(b, a) = v;
}

Eigen::VectorXd SymmetricMatrix::eigenvalues() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m_, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

double SymmetricMatrix::min_eigenvalue() const { return eigenvalues()(0); }

double SymmetricMatrix::max_eigenvalue() const {
  Eigen::VectorXd ev = eigenvalues();
  return ev(ev.size() - 1);
}

bool SymmetricMatrix::is_psd(double rel_tol) const {
  Eigen::VectorXd ev = eigenvalues();
  return ev(0) >= -rel_tol * (1.0 + std::abs(ev(ev.size() - 1)));
}

BasisProducts::BasisProducts(std::size_t nvars, int half_degree)
    : basis_(nvars, half_degree), product_basis_(nvars, 2 * half_degree) {
  positions_.resize(product_basis_.size());
  for (std::size_t i = 0; i < basis_.size(); ++i) {
    for (std::size_t j = 0; j < basis_.size(); ++j) {
      positions_[product_basis_.at(basis_[i] * basis_[j])].emplace_back(i, j);
    }
  }
}

SymmetricMatrix BasisProducts::dense(std::size_t alpha) const {
  SymmetricMatrix b(basis_.size());
  for (auto [i, j] : positions_.at(alpha)) b.set(i, j, 1.0);
  return b;
}

double BasisProducts::inner(const Eigen::MatrixXd& x, std::size_t alpha) const {
  double s = 0.0;
  for (auto [i, j] : positions_.at(alpha)) {
    s += x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
  return s;
}

BasisProducts basis_products(int nvars, int half_degree) {
  if (nvars <= 0) throw InvalidArgument("number of variables must be positive");
  if (half_degree < 0) throw InvalidArgument("degree must be nonnegative");
  return BasisProducts(static_cast<std::size_t>(nvars), half_degree);
}

MomentVector::MomentVector(std::size_t nvars, int order, Eigen::VectorXd values)
    : basis_(std::make_shared<const MonomialBasis>(nvars, order)), values_(std::move(values)) {
  if (static_cast<std::size_t>(values_.size()) != basis_->size()) {
    throw InvalidArgument("moment vector needs " + std::to_string(basis_->size()) +
                          " values, got " + std::to_string(values_.size()));
  }
}

MomentVector MomentVector::from_map(std::size_t nvars, int order,
                                    const std::map<Monomial, double>& values) {
  MonomialBasis basis(nvars, order);
  Eigen::VectorXd v(static_cast<Eigen::Index>(basis.size()));
  for (std::size_t i = 0; i < basis.size(); ++i) {
    auto it = values.find(basis[i]);
    if (it == values.end()) throw InvalidArgument("moment vector is missing an entry");
    v[static_cast<Eigen::Index>(i)] = it->second;
  }
  if (values.size() != basis.size()) {
    throw InvalidArgument("moment vector has entries outside its order");
  }
  return MomentVector(nvars, order, std::move(v));
}

MomentVector MomentVector::atomic(std::size_t nvars, int order,
                                  const std::vector<std::vector<double>>& points,
                                  const std::vector<double>& weights) {
  if (points.size() != weights.size()) throw InvalidArgument("points/weights size mismatch");
  MonomialBasis basis(nvars, order);
  Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(basis.size()));
  for (std::size_t k = 0; k < points.size(); ++k) {
    if (points[k].size() != nvars) throw InvalidArgument("atom has wrong dimension");
    for (std::size_t i = 0; i < basis.size(); ++i) {
      v[static_cast<Eigen::Index>(i)] += weights[k] * basis[i].eval(points[k]);
    }
  }
  return MomentVector(nvars, order, std::move(v));
}

double MomentVector::at(const Monomial& m) const {
  return values_[static_cast<Eigen::Index>(basis_->at(m))];
}

SymmetricMatrix moment_matrix(const MomentVector& y, int half_degree) {
  if (half_degree < 0) throw InvalidArgument("degree must be nonnegative");
  if (y.order() < 2 * half_degree) {
    throw InvalidArgument("moment vector of order " + std::to_string(y.order()) +
                          " cannot fill a moment matrix of degree " +
                          std::to_string(half_degree));
  }
  MonomialBasis basis(y.nvars(), half_degree);
  SymmetricMatrix m(basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i) {
    for (std::size_t j = i; j < basis.size(); ++j) m.set(i, j, y.at(basis[i] * basis[j]));
  }
  return m;
}

double riesz(const MomentVector& y, const Polynomial& f) {
  if (f.nvars() != y.nvars()) throw InvalidArgument("variable count mismatch");
  if (f.degree() > y.order()) {
    throw InvalidArgument("polynomial of degree " + std::to_string(f.degree()) +
                          " exceeds moment order " + std::to_string(y.order()));
  }
  double s = 0.0;
  for (const auto& [m, c] : f.terms()) s += c * y.at(m);
  return s;
}

double raw_gaussian_moment(const Monomial& alpha) {
  double v = 1.0;
  for (int e : alpha.exponents()) {
    if (e % 2 != 0) return 0.0;
    v *= std::tgamma((e + 1) / 2.0);
  }
  return v;
}

MomentVector gaussian_moments(int nvars, int order) {
  if (nvars <= 0) throw InvalidArgument("number of variables must be positive");
  if (order < 0) throw InvalidArgument("order must be nonnegative");
  MonomialBasis basis(static_cast<std::size_t>(nvars), order);
  Eigen::VectorXd v(static_cast<Eigen::Index>(basis.size()));
  for (std::size_t i = 0; i < basis.size(); ++i) {
    v[static_cast<Eigen::Index>(i)] = raw_gaussian_moment(basis[i]);
  }
  v /= 2.0 * v.cwiseAbs().maxCoeff();
  return MomentVector(static_cast<std::size_t>(nvars), order, std::move(v));
}

}  // namespace sosl1
