#include "sosl1/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "sosl1/error.hpp"

namespace sosl1::sdp {

namespace {

using Eigen::Index;

// Iterates are carried in extended precision: near the optimum the Schur
// complement of these moment programs is too ill-conditioned for a double
// solve to keep the primal residual below the default tolerance.
using Real = long double;
using Mat = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
using Vec = Eigen::Matrix<Real, Eigen::Dynamic, 1>;
using Blocks = std::vector<Mat>;

constexpr Real kInf = std::numeric_limits<Real>::infinity();

Blocks zeros(const std::vector<BlockSpec>& blocks) {
  Blocks z;
  z.reserve(blocks.size());
  for (const auto& b : blocks) z.push_back(Mat::Zero(b.dim, b.dim));
  return z;
}

void symmetrize(Mat& m) {
  Mat t = Real(0.5) * (m + m.transpose());
  m.swap(t);
}

Real max_abs(const Blocks& x) {
  Real r = 0;
  for (const auto& b : x) r = std::max(r, b.cwiseAbs().maxCoeff());
  return r;
}

Real frobenius(const Blocks& x) {
  Real s = 0;
  for (const auto& b : x) s += b.squaredNorm();
  return std::sqrt(s);
}

Real inner(const Blocks& a, const Blocks& b) {
  Real s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i].cwiseProduct(b[i]).sum();
  return s;
}

Real inner(const SparseBlockMatrix& a, const Blocks& x) {
  Real s = 0;
  for (const auto& e : a.entries()) {
    const auto& xb = x[static_cast<std::size_t>(e.block)];
    const Real v = e.value;
    s += e.row == e.col ? v * xb(e.row, e.row) : v * (xb(e.row, e.col) + xb(e.col, e.row));
  }
  return s;
}

Blocks dense(const SparseBlockMatrix& a, const std::vector<BlockSpec>& blocks) {
  Blocks out = zeros(blocks);
  for (const auto& e : a.entries()) {
    out[e.block](e.row, e.col) += e.value;
    if (e.row != e.col) out[e.block](e.col, e.row) += e.value;
  }
  return out;
}

BlockMatrix to_double(const Blocks& x) {
  BlockMatrix out;
  out.reserve(x.size());
  for (const auto& b : x) out.push_back(b.cast<double>());
  return out;
}

// Largest α with X + α·dX ⪰ 0 (∞ when unbounded); nullopt when X is not
// numerically positive definite.
std::optional<Real> max_step(const Blocks& x, const Blocks& dx) {
  Real alpha = kInf;
  for (std::size_t b = 0; b < x.size(); ++b) {
    Eigen::LLT<Mat> llt(x[b]);
    if (llt.info() != Eigen::Success) return std::nullopt;
    Mat w = llt.matrixL().solve(dx[b]);
    w = llt.matrixL().solve(Mat(w.transpose()));
    symmetrize(w);
    Eigen::SelfAdjointEigenSolver<Mat> es(w, Eigen::EigenvaluesOnly);
    const Real lmin = es.eigenvalues()(0);
    if (lmin < 0) alpha = std::min(alpha, Real(-1) / lmin);
  }
  return alpha;
}

class Workspace {
 public:
  Workspace(const ConicProblem& p, const SolverOptions& o) : p_(p), opts_(o) {
    c_ = dense(p.objective, p.blocks);
    for (const auto& b : p.blocks) total_dim_ += b.dim;
    m_ = static_cast<Index>(p.constraints.size());
    rhs_ = p.rhs.cast<Real>();
  }

  ConicSolution run();

 private:
  struct Direction {
    Blocks dx;
    Vec dz;
    Blocks ds;
  };

  // Σ z_i A_i.
  Blocks adjoint(const Vec& z) const;
  Vec apply(const Blocks& x) const;
  bool factor_schur();
  // Direction for complementarity target ΔX·S + X·ΔS = R, given R·S⁻¹.
  Direction direction(const Blocks& r_sinv, const Vec& rp, const Blocks& rd,
                      const Blocks& x_rd_sinv) const;

  const ConicProblem& p_;
  const SolverOptions& opts_;
  Blocks c_;
  Vec rhs_;
  int total_dim_ = 0;
  Index m_ = 0;

  Blocks x_, s_, sinv_;
  Vec z_;
  Mat schur_matrix_;
  Eigen::LLT<Mat> schur_;
};

Blocks Workspace::adjoint(const Vec& z) const {
  Blocks out = zeros(p_.blocks);
  for (std::size_t i = 0; i < p_.constraints.size(); ++i) {
    const Real zi = z[static_cast<Index>(i)];
    if (zi == 0) continue;
    for (const auto& e : p_.constraints[i].entries()) {
      out[e.block](e.row, e.col) += zi * e.value;
      if (e.row != e.col) out[e.block](e.col, e.row) += zi * e.value;
    }
  }
  return out;
}

Vec Workspace::apply(const Blocks& x) const {
  Vec r(m_);
  for (Index i = 0; i < m_; ++i) r[i] = inner(p_.constraints[static_cast<std::size_t>(i)], x);
  return r;
}

bool Workspace::factor_schur() {
  // M_ij = tr(A_i X A_j S⁻¹) = ⟨P_i, P_j⟩ with P_i = L_S⁻¹ A_i L_X, which
  // keeps M symmetric positive semidefinite in floating point.
  std::vector<Mat> lx(p_.blocks.size());
  std::vector<Mat> ls(p_.blocks.size());
  for (std::size_t b = 0; b < p_.blocks.size(); ++b) {
    Eigen::LLT<Mat> cx(x_[b]);
    Eigen::LLT<Mat> cs(s_[b]);
    if (cx.info() != Eigen::Success || cs.info() != Eigen::Success) return false;
    lx[b] = cx.matrixL();
    ls[b] = cs.matrixL();
  }
  std::vector<Blocks> pm(static_cast<std::size_t>(m_), Blocks(p_.blocks.size()));
  for (Index i = 0; i < m_; ++i) {
    auto& pi = pm[static_cast<std::size_t>(i)];
    for (const auto& e : p_.constraints[static_cast<std::size_t>(i)].entries()) {
      auto& t = pi[e.block];
      const Index n = p_.blocks[e.block].dim;
      if (t.size() == 0) t = Mat::Zero(n, n);
      // Row r of A·L_X gains v·L_X(c,:) for entry (r,c), plus the mirror.
      const Real v = e.value;
      t.row(e.row) += v * lx[e.block].row(e.col);
      if (e.row != e.col) t.row(e.col) += v * lx[e.block].row(e.row);
    }
    for (std::size_t b = 0; b < pi.size(); ++b) {
      if (pi[b].size() != 0) ls[b].triangularView<Eigen::Lower>().solveInPlace(pi[b]);
    }
  }
  Mat m = Mat::Zero(m_, m_);
  for (Index i = 0; i < m_; ++i) {
    const auto& pi = pm[static_cast<std::size_t>(i)];
    for (Index j = 0; j <= i; ++j) {
      const auto& pj = pm[static_cast<std::size_t>(j)];
      Real v = 0;
      for (std::size_t b = 0; b < pi.size(); ++b) {
        if (pi[b].size() != 0 && pj[b].size() != 0) v += pi[b].cwiseProduct(pj[b]).sum();
      }
      m(i, j) = v;
      m(j, i) = v;
    }
  }
  const Real scale = std::max(Real(1), m.diagonal().cwiseAbs().maxCoeff());
  schur_matrix_ = std::move(m);
  for (Real reg = 1e-18L; reg <= 1.0000001e-6L; reg *= 10) {
    Mat mr = schur_matrix_;
    mr.diagonal().array() += reg * scale;
    schur_.compute(mr);
    if (schur_.info() == Eigen::Success) return true;
  }
  return false;
}

Workspace::Direction Workspace::direction(const Blocks& r_sinv, const Vec& rp, const Blocks& rd,
                                          const Blocks& x_rd_sinv) const {
  // M Δz = rp − A(R S⁻¹) + A(X Rd S⁻¹)
  const Vec rhs = rp - apply(r_sinv) + apply(x_rd_sinv);
  Direction d;
  d.dz = schur_.solve(rhs);
  // Refine against the unregularized matrix.
  for (int k = 0; k < 3; ++k) {
    const Vec res = rhs - schur_matrix_ * d.dz;
    if (res.lpNorm<Eigen::Infinity>() <= 1e-18L * (1 + rhs.lpNorm<Eigen::Infinity>())) break;
    d.dz += schur_.solve(res);
  }
  const Blocks at = adjoint(d.dz);
  d.ds.resize(p_.blocks.size());
  d.dx.resize(p_.blocks.size());
  for (std::size_t b = 0; b < p_.blocks.size(); ++b) {
    d.ds[b] = rd[b] - at[b];
    symmetrize(d.ds[b]);
    d.dx[b] = r_sinv[b] - x_[b] * d.ds[b] * sinv_[b];
    symmetrize(d.dx[b]);
  }
  return d;
}

ConicSolution Workspace::run() {
  ConicSolution sol;
  Real data_scale = rhs_.size() ? rhs_.cwiseAbs().maxCoeff() : Real(0);
  for (const auto& a : p_.constraints) {
    for (const auto& e : a.entries()) data_scale = std::max<Real>(data_scale, std::abs(e.value));
  }
  for (const auto& e : p_.objective.entries()) {
    data_scale = std::max<Real>(data_scale, std::abs(e.value));
  }
  const Real tau = 1 + data_scale;
  for (const auto& b : p_.blocks) {
    x_.push_back(tau * Mat::Identity(b.dim, b.dim));
    s_.push_back(tau * Mat::Identity(b.dim, b.dim));
  }
  z_ = Vec::Zero(m_);

  const Real norm_b = rhs_.norm();
  const Real norm_c = frobenius(c_);
  Real last_primal_step = 0;
  Real last_dual_step = 0;

  for (int iter = 0;; ++iter) {
    const Vec rp = rhs_ - apply(x_);
    Blocks rd = adjoint(z_);
    for (std::size_t b = 0; b < rd.size(); ++b) rd[b] = c_[b] - s_[b] - rd[b];

    const Real pobj = inner(p_.objective, x_);
    const Real dobj = rhs_.dot(z_);
    const Real comp = inner(x_, s_);
    const Real mu = comp / total_dim_;

    IterationInfo info{};
    info.iteration = iter;
    info.primal_objective = static_cast<double>(pobj);
    info.dual_objective = static_cast<double>(dobj);
    info.complementarity = static_cast<double>(comp);
    info.feas_primal = static_cast<double>(rp.norm() / (1 + norm_b));
    info.feas_dual = static_cast<double>(frobenius(rd) / (1 + norm_c));
    info.mu = static_cast<double>(mu);
    info.primal_step = static_cast<double>(last_primal_step);
    info.dual_step = static_cast<double>(last_dual_step);
    sol.history.push_back(info);

    sol.iterations = iter;
    sol.primal_objective = info.primal_objective;
    sol.dual_objective = info.dual_objective;
    sol.gap = static_cast<double>(std::abs(pobj - dobj) / (1 + std::abs(dobj)));
    sol.feas_primal = info.feas_primal;
    sol.feas_dual = info.feas_dual;

    const double gap_scale = opts_.gap_tol * (1.0 + std::abs(info.dual_objective));
    if (info.feas_primal <= opts_.feas_tol && info.feas_dual <= opts_.feas_tol &&
        sol.gap <= opts_.gap_tol && info.complementarity <= gap_scale) {
      sol.status = Status::Optimal;
      break;
    }
    const Real scale = std::max({z_.size() ? z_.cwiseAbs().maxCoeff() : Real(0), max_abs(x_),
                                 max_abs(s_)});
    if (!std::isfinite(scale) || scale > opts_.divergence_bound) {
      sol.status = Status::Infeasible;
      sol.message = "iterates diverged (scale " + std::to_string(static_cast<double>(scale)) + ")";
      break;
    }
    if (iter >= opts_.max_iter) {
      sol.status = Status::MaxIterations;
      sol.message = "iteration limit reached";
      break;
    }

    sinv_.resize(p_.blocks.size());
    bool ok = true;
    for (std::size_t b = 0; b < p_.blocks.size(); ++b) {
      Eigen::LLT<Mat> llt(s_[b]);
      if (llt.info() != Eigen::Success) {
        ok = false;
        break;
      }
      sinv_[b] = llt.solve(Mat::Identity(p_.blocks[b].dim, p_.blocks[b].dim));
      symmetrize(sinv_[b]);
    }
    if (!ok || !factor_schur()) {
      sol.status = Status::NumericalFailure;
      sol.message = ok ? "Schur complement factorization failed" : "dual slack lost definiteness";
      break;
    }

    Blocks x_rd_sinv(p_.blocks.size());
    for (std::size_t b = 0; b < p_.blocks.size(); ++b) x_rd_sinv[b] = x_[b] * rd[b] * sinv_[b];

    // Predictor: R = −XS, so R S⁻¹ = −X.
    Blocks r_sinv(p_.blocks.size());
    for (std::size_t b = 0; b < p_.blocks.size(); ++b) r_sinv[b] = -x_[b];
    const Direction aff = direction(r_sinv, rp, rd, x_rd_sinv);
    auto ap = max_step(x_, aff.dx);
    auto ad = max_step(s_, aff.ds);
    if (!ap || !ad) {
      sol.status = Status::NumericalFailure;
      sol.message = "iterate lost definiteness";
      break;
    }
    const Real alpha_p_aff = std::min(Real(1), *ap);
    const Real alpha_d_aff = std::min(Real(1), *ad);
    Real mu_aff = 0;
    for (std::size_t b = 0; b < p_.blocks.size(); ++b) {
      mu_aff +=
          (x_[b] + alpha_p_aff * aff.dx[b]).cwiseProduct(s_[b] + alpha_d_aff * aff.ds[b]).sum();
    }
    mu_aff /= total_dim_;
    const Real ratio = mu > 0 ? std::max(Real(0), mu_aff / mu) : Real(0);
    // The exponent drops toward 1 after short predictor steps, adding centering.
    const Real step_aff = std::min(alpha_p_aff, alpha_d_aff);
    const Real sigma =
        std::min(Real(1), std::pow(ratio, std::max(Real(1), 3 * step_aff * step_aff)));

    // Corrector: R = σμI − XS − ΔX_aff ΔS_aff.
    for (std::size_t b = 0; b < p_.blocks.size(); ++b) {
      r_sinv[b] = sigma * mu * sinv_[b] - x_[b] - aff.dx[b] * aff.ds[b] * sinv_[b];
    }
    const Direction dir = direction(r_sinv, rp, rd, x_rd_sinv);
    ap = max_step(x_, dir.dx);
    ad = max_step(s_, dir.ds);
    if (!ap || !ad) {
      sol.status = Status::NumericalFailure;
      sol.message = "iterate lost definiteness";
      break;
    }
    last_primal_step = std::min(Real(1), Real(opts_.step_fraction) * *ap);
    last_dual_step = std::min(Real(1), Real(opts_.step_fraction) * *ad);

    for (std::size_t b = 0; b < p_.blocks.size(); ++b) {
      x_[b] += last_primal_step * dir.dx[b];
      s_[b] += last_dual_step * dir.ds[b];
      symmetrize(x_[b]);
      symmetrize(s_[b]);
    }
    z_ += last_dual_step * dir.dz;
  }

  sol.primal = to_double(x_);
  sol.slack = to_double(s_);
  sol.dual = z_.cast<double>();
  return sol;
}

}  // namespace

void SparseBlockMatrix::add(int block, int row, int col, double value) {
  if (row > col) std::swap(row, col);
  if (value == 0.0) return;
  for (auto& e : entries_) {
    if (e.block == block && e.row == row && e.col == col) {
      e.value += value;
      return;
    }
  }
  entries_.push_back({block, row, col, value});
}

void ConicProblem::validate() const {
  if (blocks.empty()) throw InvalidArgument("conic problem has no blocks");
  for (const auto& b : blocks) {
    if (b.dim <= 0) throw InvalidArgument("block dimension must be positive");
  }
  if (constraints.empty()) throw InvalidArgument("conic problem has no constraints");
  if (static_cast<std::size_t>(rhs.size()) != constraints.size()) {
    throw InvalidArgument("right-hand side length does not match constraint count");
  }
  if (!rhs.allFinite()) throw InvalidArgument("right-hand side is not finite");
  auto check = [&](const SparseBlockMatrix& a, const char* what) {
    for (const auto& e : a.entries()) {
      if (e.block < 0 || static_cast<std::size_t>(e.block) >= blocks.size()) {
        throw InvalidArgument(std::string(what) + ": block index out of range");
      }
      const auto& b = blocks[static_cast<std::size_t>(e.block)];
      if (e.row < 0 || e.col < e.row || e.col >= b.dim) {
        throw InvalidArgument(std::string(what) + ": entry index out of range");
      }
      if (b.kind == BlockKind::NonNeg && e.row != e.col) {
        throw InvalidArgument(std::string(what) + ": off-diagonal entry in a NonNeg block");
      }
      if (!std::isfinite(e.value)) throw InvalidArgument(std::string(what) + ": non-finite entry");
    }
  };
  check(objective, "objective");
  for (const auto& a : constraints) check(a, "constraint");
}

std::string_view to_string(Status s) {
  switch (s) {
    case Status::Optimal:
      return "optimal";
    case Status::MaxIterations:
      return "max_iterations";
    case Status::NumericalFailure:
      return "numerical_failure";
    case Status::Infeasible:
      return "infeasible";
  }
  return "unknown";
}

ConicSolution solve(const ConicProblem& problem, const SolverOptions& options) {
  problem.validate();
  Workspace w(problem, options);
  return w.run();
}

double inner(const SparseBlockMatrix& a, const BlockMatrix& x) {
  double s = 0.0;
  for (const auto& e : a.entries()) {
    const auto& xb = x[static_cast<std::size_t>(e.block)];
    s += e.row == e.col ? e.value * xb(e.row, e.row)
                        : e.value * (xb(e.row, e.col) + xb(e.col, e.row));
  }
  return s;
}

double inner(const BlockMatrix& a, const BlockMatrix& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i].cwiseProduct(b[i]).sum();
  return s;
}

BlockMatrix to_dense(const SparseBlockMatrix& a, const std::vector<BlockSpec>& blocks) {
  return to_double(dense(a, blocks));
}

bool blocks_psd(const BlockMatrix& x, double rel_tol) {
  for (const auto& b : x) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(b, Eigen::EigenvaluesOnly);
    const auto& ev = es.eigenvalues();
    if (ev(0) < -rel_tol * (1.0 + std::abs(ev(ev.size() - 1)))) return false;
  }
  return true;
}

}  // namespace sosl1::sdp
