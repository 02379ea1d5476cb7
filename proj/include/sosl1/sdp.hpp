#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace sosl1::sdp {

enum class BlockKind { PSD, NonNeg };

/// One diagonal block of the conic variable. A NonNeg block of count k is
/// handled as a k×k diagonal PSD block.
struct BlockSpec {
  BlockKind kind;
  int dim;

  static BlockSpec psd(int dim) { return {BlockKind::PSD, dim}; }
  static BlockSpec nonneg(int count) { return {BlockKind::NonNeg, count}; }
};

/// Nonzero of a symmetric block-diagonal coefficient matrix. Only row ≤ col
/// is stored; an off-diagonal entry stands for both (row,col) and (col,row).
struct Entry {
  int block;
  int row;
  int col;
  double value;
};

/// Block-diagonal symmetric matrix stored as its upper-triangle nonzeros.
class SparseBlockMatrix {
 public:
  SparseBlockMatrix() = default;
  /// Adds v at (row, col) and its mirror; entries on the same position sum.
  void add(int block, int row, int col, double value);
  const std::vector<Entry>& entries() const noexcept { return entries_; }
  bool empty() const noexcept { return entries_.empty(); }

 private:
  std::vector<Entry> entries_;
};

/// Dense block-diagonal variable, one square matrix per block.
using BlockMatrix = std::vector<Eigen::MatrixXd>;

/// min ⟨C, X⟩  s.t. ⟨A_i, X⟩ = b_i, X in the cone;
/// dual: max bᵀz  s.t.  C − Σ z_i A_i = S, S in the cone.
struct ConicProblem {
  std::vector<BlockSpec> blocks;
  SparseBlockMatrix objective;
  std::vector<SparseBlockMatrix> constraints;
  Eigen::VectorXd rhs;

  std::size_t num_constraints() const noexcept { return constraints.size(); }
  /// Throws InvalidArgument when dimensions, indices or values are inconsistent.
  void validate() const;
};

enum class Status { Optimal, MaxIterations, NumericalFailure, Infeasible };

std::string_view to_string(Status s);

struct SolverOptions {
  double gap_tol = 1e-8;
  double feas_tol = 1e-8;
  int max_iter = 200;
  double step_fraction = 0.98;
  /// Iterates with any of |z|∞, max|X|, max|S| above this are declared Infeasible.
  double divergence_bound = 1e10;
};

struct IterationInfo {
  int iteration;
  double primal_objective;
  double dual_objective;
  double complementarity;  // ⟨X, S⟩
  double feas_primal;
  double feas_dual;
  double mu;
  double primal_step;
  double dual_step;
};

struct ConicSolution {
  Status status = Status::NumericalFailure;
  BlockMatrix primal;
  Eigen::VectorXd dual;
  BlockMatrix slack;
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  /// |pobj − dobj| / (1 + |dobj|).
  double gap = 0.0;
  double feas_primal = 0.0;
  double feas_dual = 0.0;
  int iterations = 0;
  std::string message;
  std::vector<IterationInfo> history;

  bool optimal() const noexcept { return status == Status::Optimal; }
};

/// Primal–dual path following with the HKM direction and Mehrotra
/// predictor–corrector steps. Deterministic for a given problem and options.
ConicSolution solve(const ConicProblem& problem, const SolverOptions& options = {});

// Operator helpers, exposed for tests.

/// ⟨A, X⟩ where X may be nonsymmetric (inner product with the symmetric A).
double inner(const SparseBlockMatrix& a, const BlockMatrix& x);
double inner(const BlockMatrix& a, const BlockMatrix& b);
/// Dense form of a sparse coefficient matrix under the given block layout.
BlockMatrix to_dense(const SparseBlockMatrix& a, const std::vector<BlockSpec>& blocks);
/// Per-block λ_min ≥ −tol·(1+λ_max).
bool blocks_psd(const BlockMatrix& x, double rel_tol = 1e-8);

}  // namespace sosl1::sdp
