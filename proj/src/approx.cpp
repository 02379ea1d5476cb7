#include "sosl1/approx.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "sosl1/error.hpp"

namespace sosl1 {

namespace {

using Eigen::Index;

constexpr int kGramBlock = 0;
constexpr int kScalarBlock = 1;

void check_degrees(const Polynomial& f, int half_degree) {
  if (half_degree < 1) throw InvalidArgument("degree bound d must be at least 1");
  if (2 * half_degree < f.degree()) {
    throw DegreeError("degree bound too small: 2d = " + std::to_string(2 * half_degree) +
                      " < deg f = " + std::to_string(f.degree()));
  }
}

// Adds ⟨X, Bα⟩ to the constraint, X being the Gram block.
void add_gram_inner(sdp::SparseBlockMatrix& a, const BasisProducts& bp, std::size_t alpha) {
  for (auto [i, j] : bp.positions(alpha)) {
    if (i <= j) a.add(kGramBlock, static_cast<int>(i), static_cast<int>(j), 1.0);
  }
}

Eigen::VectorXd padded_coefficients(const Polynomial& f, const MonomialBasis& basis) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Index>(basis.size()));
  for (const auto& [m, c] : f.terms()) v[static_cast<Index>(basis.at(m))] = c;
  return v;
}

// Index of x_i^{2d} (i = 0 … n−1) and of the constant in the product basis.
std::vector<std::size_t> support_indices(const MonomialBasis& product_basis, int half_degree) {
  std::vector<std::size_t> idx;
  for (const auto& m : perturbation_support(product_basis.nvars(), half_degree)) {
    idx.push_back(product_basis.at(m));
  }
  return idx;
}

double clip_multiplier(double v) { return (v < 0.0 && v >= -kLambdaClip) ? 0.0 : v; }

std::vector<std::string> condition_warnings(const Polynomial& f) {
  std::vector<std::string> w;
  const double n1 = f.l1_norm();
  if (n1 > 1e6) w.push_back("large coefficient norm (" + std::to_string(n1) + "); solve may be ill-conditioned");
  if (n1 > 0.0 && n1 < 1e-6) w.push_back("tiny coefficient norm (" + std::to_string(n1) + "); solve may be ill-conditioned");
  return w;
}

sdp::ConicSolution solve_or_throw(const sdp::ConicProblem& p, const sdp::SolverOptions& o,
                                  const char* what) {
  sdp::ConicSolution s = sdp::solve(p, o);
  if (!s.optimal()) {
    throw SolverError(std::string(what) + ": solver stopped with status " +
                      std::string(sdp::to_string(s.status)) + " after " +
                      std::to_string(s.iterations) + " iterations (gap " +
                      std::to_string(s.gap) + ", primal residual " +
                      std::to_string(s.feas_primal) + ", dual residual " +
                      std::to_string(s.feas_dual) + ")" +
                      (s.message.empty() ? "" : ": " + s.message));
  }
  return s;
}

ApproximationResult zero_result(std::size_t n, int half_degree, Form form) {
  ApproximationResult r;
  r.nvars = n;
  r.half_degree = half_degree;
  r.form = form;
  r.lambda.assign(n + 1, 0.0);
  r.rho = 0.0;
  r.g = Polynomial(n);
  MonomialBasis product(n, 2 * half_degree);
  r.y_star = MomentVector(n, 2 * half_degree,
                          Eigen::VectorXd::Zero(static_cast<Index>(product.size())));
  r.gram = SymmetricMatrix(basis_size(n, half_degree));
  r.solver_report.message = "zero input; solver not invoked";
  return r;
}

}  // namespace

std::string_view to_string(Form f) { return f == Form::Reduced ? "reduced" : "full"; }

SolverReport SolverReport::from(const sdp::ConicSolution& s) {
  return {s.status,          s.iterations,       s.gap, s.feas_primal, s.feas_dual,
          s.primal_objective, s.dual_objective, s.message};
}

std::vector<Monomial> perturbation_support(std::size_t nvars, int half_degree) {
  std::vector<Monomial> s{Monomial::one(nvars)};
  for (std::size_t i = 0; i < nvars; ++i) s.push_back(Monomial::pure_power(nvars, i, 2 * half_degree));
  return s;
}

sdp::ConicProblem assemble_reduced_dual(const Polynomial& f, int half_degree) {
  check_degrees(f, half_degree);
  const std::size_t n = f.nvars();
  BasisProducts bp(n, half_degree);
  const auto& product = bp.product_basis();
  const auto support = support_indices(product, half_degree);

  sdp::ConicProblem p;
  p.blocks = {sdp::BlockSpec::psd(static_cast<int>(bp.basis().size())),
              sdp::BlockSpec::nonneg(static_cast<int>(n + 1))};
  for (std::size_t k = 0; k <= n; ++k) {
    p.objective.add(kScalarBlock, static_cast<int>(k), static_cast<int>(k), 1.0);
  }
  p.constraints.resize(product.size());
  for (std::size_t a = 0; a < product.size(); ++a) add_gram_inner(p.constraints[a], bp, a);
  for (std::size_t k = 0; k <= n; ++k) {
    p.constraints[support[k]].add(kScalarBlock, static_cast<int>(k), static_cast<int>(k), -1.0);
  }
  p.rhs = padded_coefficients(f, product);
  return p;
}

sdp::ConicProblem assemble_full_form(const Polynomial& f, int half_degree) {
  check_degrees(f, half_degree);
  BasisProducts bp(f.nvars(), half_degree);
  const auto& product = bp.product_basis();
  const int m = static_cast<int>(product.size());

  sdp::ConicProblem p;
  p.blocks = {sdp::BlockSpec::psd(static_cast<int>(bp.basis().size())),
              sdp::BlockSpec::nonneg(3 * m)};
  for (int k = 0; k < m; ++k) p.objective.add(kScalarBlock, k, k, 1.0);
  p.constraints.resize(2 * static_cast<std::size_t>(m));
  const Eigen::VectorXd fc = padded_coefficients(f, product);
  p.rhs.resize(2 * m);
  for (int k = 0; k < m; ++k) {
    auto& upper = p.constraints[static_cast<std::size_t>(k)];
    add_gram_inner(upper, bp, static_cast<std::size_t>(k));
    upper.add(kScalarBlock, k, k, 1.0);
    upper.add(kScalarBlock, m + k, m + k, -1.0);
    p.rhs[k] = fc[k];

    auto& lower = p.constraints[static_cast<std::size_t>(m + k)];
    for (auto [i, j] : bp.positions(static_cast<std::size_t>(k))) {
      if (i <= j) lower.add(kGramBlock, static_cast<int>(i), static_cast<int>(j), -1.0);
    }
    lower.add(kScalarBlock, k, k, 1.0);
    lower.add(kScalarBlock, 2 * m + k, 2 * m + k, -1.0);
    p.rhs[m + k] = -fc[k];
  }
  return p;
}

SosCertificate extract_certificate(const SymmetricMatrix& gram, const MonomialBasis& basis,
                                   const Polynomial& g) {
  if (gram.dim() != basis.size()) throw InvalidArgument("Gram matrix does not match basis");
  SosCertificate cert;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram.dense());
  const auto& ev = es.eigenvalues();
  const double lmax = ev(ev.size() - 1);
  if (lmax > 0.0) {
    for (Index k = ev.size() - 1; k >= 0; --k) {
      if (ev(k) <= kEigenClip * lmax) break;
      Polynomial q(basis.nvars());
      for (std::size_t j = 0; j < basis.size(); ++j) {
        q.add_term(basis[j], es.eigenvectors()(static_cast<Index>(j), k));
      }
      cert.squares.push_back(std::move(q));
      cert.weights.push_back(ev(k));
    }
  }
  cert.residual = certificate_residual(cert.squares, cert.weights, g);
  return cert;
}

double certificate_residual(const std::vector<Polynomial>& squares,
                            const std::vector<double>& weights, const Polynomial& g) {
  if (squares.size() != weights.size()) throw InvalidArgument("squares/weights size mismatch");
  Polynomial r = g;
  for (std::size_t k = 0; k < squares.size(); ++k) r = r - weights[k] * (squares[k] * squares[k]);
  return r.l1_norm();
}

ApproximationResult best_l1_sos_approximation(const Polynomial& f, int half_degree,
                                              const ApproxOptions& options) {
  check_degrees(f, half_degree);
  const std::size_t n = f.nvars();
  if (f.is_zero()) return zero_result(n, half_degree, options.form);

  BasisProducts bp(n, half_degree);
  const auto& product = bp.product_basis();
  const auto support = support_indices(product, half_degree);

  ApproximationResult r;
  r.nvars = n;
  r.half_degree = half_degree;
  r.form = options.form;
  r.warnings = condition_warnings(f);

  Eigen::VectorXd y;
  if (options.form == Form::Reduced) {
    const auto sol = solve_or_throw(assemble_reduced_dual(f, half_degree), options.solver,
                                    "reduced moment program");
    r.solver_report = SolverReport::from(sol);
    r.gram = SymmetricMatrix(sol.primal[kGramBlock]);
    r.lambda.resize(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
      r.lambda[k] = clip_multiplier(sol.primal[kScalarBlock](static_cast<Index>(k), static_cast<Index>(k)));
    }
    r.g = f;
    for (std::size_t k = 0; k <= n; ++k) r.g.add_term(product[support[k]], r.lambda[k]);
    y = -sol.dual;
  } else {
    const auto sol = solve_or_throw(assemble_full_form(f, half_degree), options.solver,
                                    "coefficient-wise program");
    r.solver_report = SolverReport::from(sol);
    r.gram = SymmetricMatrix(sol.primal[kGramBlock]);
    const Index m = static_cast<Index>(product.size());
    r.g = Polynomial(n);
    for (std::size_t a = 0; a < product.size(); ++a) {
      r.g.add_term(product[a], bp.inner(r.gram.dense(), a));
    }
    const Polynomial diff = r.g - f;
    r.lambda.resize(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
      r.lambda[k] = clip_multiplier(diff.coefficient(product[support[k]]));
    }
    double off_support = diff.l1_norm();
    for (std::size_t k = 0; k <= n; ++k) off_support -= std::abs(diff.coefficient(product[support[k]]));
    if (off_support > 1e-7 * (1.0 + diff.l1_norm())) {
      char buf[160];
      std::snprintf(buf, sizeof buf,
                    "coefficient-wise optimum moves %.3e of l1 mass outside 1, x_i^2d; "
                    "lambda lists only the on-support part",
                    off_support);
      r.warnings.emplace_back(buf);
    }
    y = -(sol.dual.head(m) - sol.dual.tail(m));
  }
  r.rho = 0.0;
  if (options.form == Form::Reduced) {
    for (double l : r.lambda) r.rho += l;
  } else {
    r.rho = (r.g - f).l1_norm();
  }
  r.y_star = MomentVector(n, 2 * half_degree, std::move(y));
  r.certificate = extract_certificate(r.gram, bp.basis(), r.g);
  return r;
}

SosCheck is_sos(const Polynomial& g, int half_degree, const sdp::SolverOptions& options) {
  check_degrees(g, half_degree);
  const std::size_t n = g.nvars();
  BasisProducts bp(n, half_degree);
  SosCheck out;
  if (g.is_zero()) {
    out.is_sos = true;
    out.certificate = SosCertificate{};
    out.gram = SymmetricMatrix(bp.basis().size());
    return out;
  }
  const double tol = 1e-6 * (1.0 + g.l1_norm());

  sdp::ConicProblem p;
  p.blocks = {sdp::BlockSpec::psd(static_cast<int>(bp.basis().size()))};
  p.constraints.resize(bp.count());
  for (std::size_t a = 0; a < bp.count(); ++a) add_gram_inner(p.constraints[a], bp, a);
  p.rhs = padded_coefficients(g, bp.product_basis());
  const auto feas = sdp::solve(p, options);
  out.solver_report = SolverReport::from(feas);
  if (feas.optimal()) {
    SymmetricMatrix gram(feas.primal[0]);
    SosCertificate cert = extract_certificate(gram, bp.basis(), g);
    if (cert.residual <= tol) {
      out.is_sos = true;
      out.certificate = std::move(cert);
      out.gram = std::move(gram);
      return out;
    }
  }

  // No Gram matrix found: the bounded moment program either produces a
  // separating y or shows g sits numerically on the cone.
  ApproxOptions reduced;
  reduced.solver = options;
  const ApproximationResult best = best_l1_sos_approximation(g, half_degree, reduced);
  out.solver_report = best.solver_report;
  const double value = riesz(best.y_star, g);
  const SymmetricMatrix mom = moment_matrix(best.y_star, half_degree);
  if (value < -kLambdaClip && mom.min_eigenvalue() >= -1e-8) {
    out.is_sos = false;
    out.witness = best.y_star;
    out.witness_value = value;
    return out;
  }
  SosCertificate cert = extract_certificate(best.gram, bp.basis(), g);
  if (cert.residual <= tol) {
    out.is_sos = true;
    out.certificate = std::move(cert);
    out.gram = best.gram;
    return out;
  }
  throw SolverError("SOS membership inconclusive: no Gram matrix within tolerance and no valid separating moment vector");
}

UniformPerturbation uniform_sos_perturbation(const Polynomial& f, int half_degree,
                                             const sdp::SolverOptions& options) {
  check_degrees(f, half_degree);
  const std::size_t n = f.nvars();
  UniformPerturbation out;
  out.g = f;
  if (f.is_zero()) return out;

  BasisProducts bp(n, half_degree);
  const auto& product = bp.product_basis();
  const auto support = support_indices(product, half_degree);

  sdp::ConicProblem p;
  p.blocks = {sdp::BlockSpec::psd(static_cast<int>(bp.basis().size())), sdp::BlockSpec::nonneg(1)};
  p.objective.add(kScalarBlock, 0, 0, 1.0);
  p.constraints.resize(product.size());
  for (std::size_t a = 0; a < product.size(); ++a) add_gram_inner(p.constraints[a], bp, a);
  for (std::size_t k : support) p.constraints[k].add(kScalarBlock, 0, 0, -1.0);
  p.rhs = padded_coefficients(f, product);

  const auto sol = solve_or_throw(p, options, "uniform perturbation program");
  out.solver_report = SolverReport::from(sol);
  out.epsilon = clip_multiplier(sol.primal[kScalarBlock](0, 0));
  for (std::size_t k : support) out.g.add_term(product[k], out.epsilon);
  return out;
}

bool VerificationReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

const VerificationCheck* VerificationReport::find(std::string_view name) const {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

VerificationReport verify(const ApproximationResult& result, const Polynomial& f,
                          int half_degree) {
  VerificationReport rep;
  auto add = [&](std::string name, double measured, double tol, bool passed) {
    rep.checks.push_back({std::move(name), passed, measured, tol});
  };
  auto le = [&](std::string name, double measured, double tol) {
    add(std::move(name), measured, tol, std::isfinite(measured) && measured <= tol);
  };

  const std::size_t n = f.nvars();
  const bool shape_ok = result.nvars == n && result.g.nvars() == n &&
                        result.half_degree == half_degree && result.lambda.size() == n + 1 &&
                        result.y_star.nvars() == n && result.y_star.order() == 2 * half_degree &&
                        result.gram.dim() == basis_size(n, half_degree);
  add("shape", shape_ok ? 0.0 : 1.0, 0.0, shape_ok);
  if (!shape_ok) return rep;

  const auto support = perturbation_support(n, half_degree);
  const double rho = result.rho;
  const double rel = 1.0 + std::abs(rho);

  double lambda_min = 0.0;
  double lambda_sum = 0.0;
  for (double l : result.lambda) {
    lambda_min = std::min(lambda_min, l);
    lambda_sum += l;
  }
  le("lambda_nonnegative", -lambda_min, 0.0);
  le("rho_equals_lambda_sum", std::abs(rho - lambda_sum), 1e-9 * rel);

  le("g_degree", result.g.degree(), 2.0 * half_degree);

  // g − f supported on {1, x_i^{2d}} and equal to λ there.
  const Polynomial diff = result.g - f;
  double off_support = 0.0;
  for (const auto& [m, c] : diff.terms()) {
    if (std::find(support.begin(), support.end(), m) == support.end()) off_support += std::abs(c);
  }
  le("perturbation_support", off_support, 0.0);
  double lambda_mismatch = 0.0;
  for (std::size_t k = 0; k <= n; ++k) {
    lambda_mismatch = std::max(lambda_mismatch, std::abs(diff.coefficient(support[k]) - result.lambda[k]));
  }
  le("perturbation_matches_lambda", lambda_mismatch, 1e-9 * rel);
  le("rho_equals_l1_distance", std::abs(rho - diff.l1_norm()), 1e-9 * rel);

  // Gram matrix reproduces g.
  BasisProducts bp(n, half_degree);
  const Eigen::VectorXd gvec = padded_coefficients(result.g, bp.product_basis());
  double gram_err = 0.0;
  for (std::size_t a = 0; a < bp.count(); ++a) {
    gram_err = std::max(gram_err, std::abs(gvec[static_cast<Index>(a)] - bp.inner(result.gram.dense(), a)));
  }
  le("gram_reproduces_g", gram_err, 1e-7);
  {
    const Eigen::VectorXd ev = result.gram.eigenvalues();
    le("gram_psd", -ev(0), 1e-8 * (1.0 + std::abs(ev(ev.size() - 1))));
  }

  // Dual side: y feasible for the moment program and value −L_y(f) = ρ.
  {
    const Eigen::VectorXd ev = moment_matrix(result.y_star, half_degree).eigenvalues();
    le("moment_matrix_psd", -ev(0), 1e-8 * (1.0 + std::abs(ev(ev.size() - 1))));
  }
  double bound_violation = 0.0;
  for (const auto& m : support) bound_violation = std::max(bound_violation, result.y_star.at(m) - 1.0);
  le("moment_bounds", bound_violation, 1e-8);
  le("zero_duality_gap", std::abs(rho + riesz(result.y_star, f)), 1e-7 * rel);

  // Certificate recomputed from its squares.
  const auto& cert = result.certificate;
  double wmin = cert.weights.empty() ? 1.0 : *std::min_element(cert.weights.begin(), cert.weights.end());
  add("certificate_weights_positive", wmin, 0.0, wmin > 0.0 || result.g.is_zero());
  bool cert_ok = cert.squares.size() == cert.weights.size();
  double resid = cert_ok ? certificate_residual(cert.squares, cert.weights, result.g) : INFINITY;
  for (const auto& q : cert.squares) cert_ok = cert_ok && q.nvars() == n && q.degree() <= half_degree;
  if (!cert_ok) resid = INFINITY;
  le("certificate_residual", resid, 1e-6 * (1.0 + result.g.l1_norm()));
  return rep;
}

}  // namespace sosl1
