#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sosl1/moment.hpp"
#include "sosl1/polynomial.hpp"
#include "sosl1/sdp.hpp"

namespace sosl1 {

/// Which conic program computes ρ_d.
enum class Form {
  /// Moment program with M_d(y) ⪰ 0, L_y(1) ≤ 1, L_y(x_i^{2d}) ≤ 1; its
  /// multipliers are λ* and the Gram matrix of g.
  Reduced,
  /// Coefficient-wise program with one λ_α per monomial of ℕⁿ_{2d}.
  Full,
};

std::string_view to_string(Form f);

struct ApproxOptions {
  sdp::SolverOptions solver;
  Form form = Form::Reduced;
};

struct SolverReport {
  sdp::Status status = sdp::Status::Optimal;
  int iterations = 0;
  double gap = 0.0;
  double feas_primal = 0.0;
  double feas_dual = 0.0;
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  std::string message;

  static SolverReport from(const sdp::ConicSolution& s);
};

/// g = Σ_k w_k q_k², with the ℓ1 reconstruction residual ‖g − Σ_k w_k q_k²‖₁.
struct SosCertificate {
  std::vector<Polynomial> squares;
  std::vector<double> weights;
  double residual = 0.0;
};

struct ApproximationResult {
  std::size_t nvars = 1;
  int half_degree = 1;
  Form form = Form::Reduced;
  /// (λ₀, λ₁, …, λ_n): weights of 1, x₁^{2d}, …, x_n^{2d}.
  std::vector<double> lambda;
  double rho = 0.0;
  Polynomial g;
  MomentVector y_star{1, 0, Eigen::VectorXd::Zero(1)};
  SymmetricMatrix gram{std::size_t{1}};
  SosCertificate certificate;
  SolverReport solver_report;
  std::vector<std::string> warnings;
};

/// Signed multipliers in [−1e−9, 0) are treated as solver noise and clipped.
inline constexpr double kLambdaClip = 1e-9;
/// Eigenvalues of the Gram matrix below this fraction of λ_max are dropped.
inline constexpr double kEigenClip = 1e-9;

/// Best ℓ1 approximation of f by a sum of squares of degree ≤ 2d.
///
/// Throws DegreeError when 2d < deg f, InvalidArgument when d < 1 and
/// SolverError when the interior-point solve does not reach Optimal.
ApproximationResult best_l1_sos_approximation(const Polynomial& f, int half_degree,
                                              const ApproxOptions& options = {});

/// Primal blocks: PSD s(d) (Gram X), NonNeg n+1 (λ). One equality per α ∈ ℕⁿ_{2d}:
/// ⟨X, Bα⟩ − λ₀[α = 0] − Σ_i λ_i[α = 2d·e_i] = f_α. The dual is exactly the
/// moment program over y = −z.
sdp::ConicProblem assemble_reduced_dual(const Polynomial& f, int half_degree);

/// Primal blocks: PSD s(d), NonNeg 3·s(2d) holding (λ_α, s⁺_α, s⁻_α) with
/// λ_α + ⟨X,Bα⟩ − s⁺_α = f_α and λ_α − ⟨X,Bα⟩ − s⁻_α = −f_α.
sdp::ConicProblem assemble_full_form(const Polynomial& f, int half_degree);

/// Eigen-decomposes the Gram matrix into weighted squares over the basis.
SosCertificate extract_certificate(const SymmetricMatrix& gram, const MonomialBasis& basis,
                                   const Polynomial& g);
/// ‖g − Σ_k w_k q_k²‖₁.
double certificate_residual(const std::vector<Polynomial>& squares,
                            const std::vector<double>& weights, const Polynomial& g);

struct SosCheck {
  bool is_sos = false;
  /// Present when is_sos.
  std::optional<SosCertificate> certificate;
  std::optional<SymmetricMatrix> gram;
  /// Present when !is_sos: M_d(y) ⪰ 0 and L_y(g) < 0.
  std::optional<MomentVector> witness;
  double witness_value = 0.0;
  SolverReport solver_report;
};

/// Throws DegreeError when 2d < deg g.
SosCheck is_sos(const Polynomial& g, int half_degree, const sdp::SolverOptions& options = {});

/// Smallest ε ≥ 0 with f + ε(1 + Σ_i x_i^{2d}) a sum of squares of degree ≤ 2d.
struct UniformPerturbation {
  double epsilon = 0.0;
  Polynomial g;
  SolverReport solver_report;
};

UniformPerturbation uniform_sos_perturbation(const Polynomial& f, int half_degree,
                                             const sdp::SolverOptions& options = {});

struct VerificationCheck {
  std::string name;
  bool passed = false;
  double measured = 0.0;
  double tolerance = 0.0;
};

struct VerificationReport {
  std::vector<VerificationCheck> checks;

  bool all_passed() const;
  /// nullptr when absent.
  const VerificationCheck* find(std::string_view name) const;
};

/// Recomputes every structural property of a result from its stored fields.
/// Failures are report entries; nothing is thrown for a bad result.
VerificationReport verify(const ApproximationResult& result, const Polynomial& f,
                          int half_degree);

/// 1, x₁^{2d}, …, x_n^{2d}: the only monomials where g and f may differ.
std::vector<Monomial> perturbation_support(std::size_t nvars, int half_degree);

}  // namespace sosl1
