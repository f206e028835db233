#pragma once

#include <string>
#include <utility>
#include <vector>

#include "incompat/hermitian.hpp"

namespace incompat {

enum class BlockKind { Psd, Nonneg, Free };

struct BlockSpec {
  std::string name;
  BlockKind kind = BlockKind::Nonneg;
  int dim = 1;  // matrix size for Psd blocks; 1 for scalar kinds
};

enum class Sense { Minimize, Maximize };

/// One real-linear functional of the block variables:
///   sum over matrix terms of Re tr(coeff * V_block)
/// + sum over scalar terms of coeff * x_block.
struct LinearRow {
  std::vector<std::pair<int, HermitianOperator>> matrix_terms;
  std::vector<std::pair<int, double>> scalar_terms;
  double rhs = 0.0;
};

/// Conic program in standard form: optimize a linear functional subject to
/// linear equality rows, with each block constrained to its cone.
struct ConeProgram {
  std::vector<BlockSpec> blocks;
  LinearRow objective;  // objective.rhs is ignored
  Sense sense = Sense::Minimize;
  std::vector<LinearRow> constraints;

  int find_block(const std::string& name) const;
  void validate() const;
  /// Total real dimension of the variable space (svec counting for psd).
  int real_dimension() const;
};

enum class SolveStatus { Optimal, PrimalInfeasible, DualInfeasible, NumericalFailure };

std::string to_string(SolveStatus s);

struct SolverSettings {
  double eps_gap = 1e-8;
  double eps_feas = 1e-8;
  double eps_psd = 1e-8;
  int max_iters = 200;
  double infeas_cert_tol = 1e-9;  // certificate residual per unit of ray objective
  double infeas_ray_scale = 1e6;  // ray objective relative to tau must exceed this
  int dim_cap = 20000;
  bool verbose = false;
};

struct ConeSolution {
  SolveStatus status = SolveStatus::NumericalFailure;

  // Per block (indexed as in the program): matrix value for Psd blocks,
  // scalar value for Nonneg/Free blocks. Zero-filled placeholders are kept in
  // the other vector so both index directly by block.
  std::vector<HermitianOperator> matrix_values;
  std::vector<double> scalar_values;

  /// Constraint multipliers, minimization orientation: A'y + s = c with
  /// s in the dual cone. For Sense::Maximize the internal objective is the
  /// negated one.
  std::vector<double> duals;

  double objective_primal = 0.0;  // in the caller's sense orientation
  double objective_dual = 0.0;
  double gap = 0.0;  // |objective_primal - objective_dual|
  int iterations = 0;

  // status == PrimalInfeasible: Farkas multipliers with b'y = 1, A'y <= 0
  // on the cone columns.
  std::vector<double> farkas_y;
  // status == DualInfeasible: improving primal ray with A x = 0,
  // objective ray normalized to -1 (minimization orientation).
  std::vector<HermitianOperator> ray_matrix;
  std::vector<double> ray_scalar;

  // residuals achieved by the reported point (useful on NumericalFailure)
  double primal_residual = 0.0;
  double dual_residual = 0.0;
};

/// Standard complex-to-real embedding H -> [[Re H, -Im H], [Im H, Re H]].
HermitianOperator real_embedding(const HermitianOperator& h);
/// Inverse of real_embedding on (possibly asymmetric-in-blocks) real values.
HermitianOperator complex_readback(const HermitianOperator& e);

/// Equivalent program over real-symmetric blocks. Blocks whose coefficients
/// are all real are kept unchanged; complex blocks of dimension d become
/// real blocks of dimension 2d with coefficients pre-scaled so objective and
/// constraint values are preserved verbatim (recorded scale factor 1).
ConeProgram realify(const ConeProgram& p);

namespace detail {
// Imaginary-part rows with no data content ("Im V_ij = 0") are satisfied
// identically once every block they touch is restricted to real entries, and
// must be pruned so the lowered constraint matrix keeps full row rank. A
// fixed point decides which blocks embed: any non-prunable row or objective
// with an imaginary coefficient embeds its block, and a prunable row touching
// an embedded block is reinstated as a real constraint.
struct RealifyResult {
  ConeProgram prog;
  std::vector<int> kept_rows;  // indices into the caller's constraints
  bool any_embedded = false;
};
RealifyResult realify_ex(const ConeProgram& p);
}  // namespace detail

ConeSolution solve(const ConeProgram& p, const SolverSettings& settings = {});

/// Metadata for the rows emitted by one matrix equality, used to rebuild the
/// Hermitian operator paired with those rows from dual multipliers.
struct MatrixEqRows {
  int dim = 0;
  struct Entry {
    int row;  // constraint index in the program
    int i, j;
    bool imag;
  };
  std::vector<Entry> entries;
};

/// Hermitian-matrix-valued affine expression over the blocks of a program:
///   sum_i scale_i * V_{block_i} + sum_j x_{block_j} * K_j + constant.
class MatrixExpr {
 public:
  explicit MatrixExpr(int dim) : dim_(dim), constant_(HermitianOperator::zero(dim)) {}

  MatrixExpr& add_variable(int block, double scale = 1.0) {
    var_terms_.emplace_back(block, scale);
    return *this;
  }
  MatrixExpr& add_scalar_times(int block, const HermitianOperator& coeff);
  MatrixExpr& add_constant(const HermitianOperator& c);

  int dim() const { return dim_; }
  const std::vector<std::pair<int, double>>& var_terms() const { return var_terms_; }
  const std::vector<std::pair<int, HermitianOperator>>& scalar_terms() const {
    return scalar_terms_;
  }
  const HermitianOperator& constant() const { return constant_; }

 private:
  int dim_;
  std::vector<std::pair<int, double>> var_terms_;
  std::vector<std::pair<int, HermitianOperator>> scalar_terms_;
  HermitianOperator constant_;
};

class ProgramBuilder {
 public:
  int add_psd_block(const std::string& name, int dim);
  int add_nonneg(const std::string& name);
  int add_free(const std::string& name);

  /// expr == rhs entrywise (up to dim^2 real rows; all-zero rows dropped).
  MatrixEqRows add_matrix_eq(const MatrixExpr& expr, const HermitianOperator& rhs);

  /// expr >= rhs in the PSD order, lowered to an equality with a fresh PSD
  /// slack block. Returns the slack block index.
  int add_psd_ge(const MatrixExpr& expr, const HermitianOperator& rhs,
                 const std::string& slack_name);

  void add_row(LinearRow row) { p_.constraints.push_back(std::move(row)); }
  void set_objective(LinearRow obj, Sense sense);

  int block_count() const { return static_cast<int>(p_.blocks.size()); }
  ConeProgram take() { return std::move(p_); }

  static HermitianOperator dual_operator(const MatrixEqRows& rows, const std::vector<double>& y);

 private:
  ConeProgram p_;
};

}  // namespace incompat
