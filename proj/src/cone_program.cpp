#include "incompat/cone_program.hpp"

#include <cmath>
#include <utility>

namespace incompat {

namespace {

// Hermitian pairing matrices: <C_re(i,j), V> = Re V_ij, <C_im(i,j), V> = Im V_ij.
CMatrix entry_extractor(int dim, int i, int j, bool imag) {
  CMatrix c = CMatrix::Zero(dim, dim);
  if (i == j) {
    c(i, i) = 1.0;
  } else if (!imag) {
    c(i, j) = 0.5;
    c(j, i) = 0.5;
  } else {
    c(i, j) = Complex(0, 0.5);
    c(j, i) = Complex(0, -0.5);
  }
  return c;
}

}  // namespace

int ConeProgram::find_block(const std::string& name) const {
  for (int i = 0; i < static_cast<int>(blocks.size()); ++i)
    if (blocks[i].name == name) return i;
  return -1;
}

void ConeProgram::validate() const {
  const int nb = static_cast<int>(blocks.size());
  for (const auto& b : blocks) {
    if (b.kind == BlockKind::Psd && b.dim < 1)
      throw ValidationError("ConeProgram: psd block '" + b.name + "' has dim < 1");
    if (b.kind != BlockKind::Psd && b.dim != 1)
      throw ValidationError("ConeProgram: scalar block '" + b.name + "' must have dim 1");
  }
  auto check_row = [&](const LinearRow& row, const std::string& what) {
    for (const auto& [blk, coeff] : row.matrix_terms) {
      if (blk < 0 || blk >= nb)
        throw ValidationError("ConeProgram: " + what + " references unknown block");
      if (blocks[blk].kind != BlockKind::Psd)
        throw ValidationError("ConeProgram: " + what + " pairs a matrix with scalar block '" +
                              blocks[blk].name + "'");
      if (coeff.dim() != blocks[blk].dim)
        throw ValidationError("ConeProgram: " + what + " coefficient dim " +
                              std::to_string(coeff.dim()) + " != block dim " +
                              std::to_string(blocks[blk].dim) + " for '" + blocks[blk].name +
                              "'");
    }
    for (const auto& [blk, coeff] : row.scalar_terms) {
      (void)coeff;
      if (blk < 0 || blk >= nb)
        throw ValidationError("ConeProgram: " + what + " references unknown block");
      if (blocks[blk].kind == BlockKind::Psd)
        throw ValidationError("ConeProgram: " + what + " uses scalar coefficient on psd block '" +
                              blocks[blk].name + "'");
    }
  };
  check_row(objective, "objective");
  for (size_t r = 0; r < constraints.size(); ++r)
    check_row(constraints[r], "constraint " + std::to_string(r));
}

int ConeProgram::real_dimension() const {
  int n = 0;
  for (const auto& b : blocks) {
    if (b.kind == BlockKind::Psd) {
      n += b.dim * (b.dim + 1) / 2;
    } else {
      n += b.kind == BlockKind::Free ? 2 : 1;
    }
  }
  return n;
}

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::PrimalInfeasible: return "primal_infeasible";
    case SolveStatus::DualInfeasible: return "dual_infeasible";
    case SolveStatus::NumericalFailure: return "numerical_failure";
  }
  return "unknown";
}

HermitianOperator real_embedding(const HermitianOperator& h) {
  const int d = h.dim();
  Eigen::MatrixXd re = h.entries().real();
  Eigen::MatrixXd im = h.entries().imag();
  Eigen::MatrixXd e(2 * d, 2 * d);
  e.topLeftCorner(d, d) = re;
  e.topRightCorner(d, d) = -im;
  e.bottomLeftCorner(d, d) = im;
  e.bottomRightCorner(d, d) = re;
  return HermitianOperator(e.cast<Complex>());
}

HermitianOperator complex_readback(const HermitianOperator& e) {
  const int d2 = e.dim();
  if (d2 % 2 != 0) throw DimensionError("complex_readback: dimension must be even");
  const int d = d2 / 2;
  Eigen::MatrixXd m = e.entries().real();
  Eigen::MatrixXd re = 0.5 * (m.topLeftCorner(d, d) + m.bottomRightCorner(d, d));
  Eigen::MatrixXd im = 0.5 * (m.bottomLeftCorner(d, d) - m.topRightCorner(d, d));
  CMatrix out(d, d);
  out.real() = re;
  out.imag() = im;
  return HermitianOperator(out);
}

namespace detail {

RealifyResult realify_ex(const ConeProgram& p) {
  p.validate();
  const int nb = static_cast<int>(p.blocks.size());
  const int nr = static_cast<int>(p.constraints.size());
  const double eps = 1e-14;

  auto imag_of = [](const HermitianOperator& h) {
    return h.entries().imag().cwiseAbs().maxCoeff();
  };
  auto real_of = [](const HermitianOperator& h) {
    return h.entries().real().cwiseAbs().maxCoeff();
  };

  // Rows of the form sum_b <i*K_b, V_b> = 0 carry no data; they only pin
  // imaginary parts and are prunable while all their blocks stay real.
  std::vector<char> prunable(nr, 0);
  for (int r = 0; r < nr; ++r) {
    const LinearRow& row = p.constraints[r];
    if (std::abs(row.rhs) > eps || row.matrix_terms.empty()) continue;
    bool ok = true;
    for (const auto& [blk, coeff] : row.scalar_terms) {
      (void)blk;
      if (std::abs(coeff) > eps) ok = false;
    }
    for (const auto& [blk, coeff] : row.matrix_terms) {
      (void)blk;
      if (real_of(coeff) > eps) ok = false;
    }
    prunable[r] = ok;
  }

  std::vector<char> embed(nb, 0);
  auto scan_row = [&](const LinearRow& row) {
    for (const auto& [blk, coeff] : row.matrix_terms)
      if (imag_of(coeff) > eps) embed[blk] = 1;
  };
  scan_row(p.objective);
  for (int r = 0; r < nr; ++r)
    if (!prunable[r]) scan_row(p.constraints[r]);

  std::vector<char> reinstated(nr, 0);
  bool changed = true;
  while (changed) {
    changed = false;
    for (int r = 0; r < nr; ++r) {
      if (!prunable[r] || reinstated[r]) continue;
      bool touches_embedded = false;
      for (const auto& [blk, coeff] : p.constraints[r].matrix_terms) {
        (void)coeff;
        if (embed[blk]) touches_embedded = true;
      }
      if (!touches_embedded) continue;
      reinstated[r] = 1;
      for (const auto& [blk, coeff] : p.constraints[r].matrix_terms) {
        if (imag_of(coeff) > eps && !embed[blk]) {
          embed[blk] = 1;
          changed = true;
        }
      }
    }
  }

  RealifyResult out;
  out.prog.sense = p.sense;
  out.prog.blocks = p.blocks;
  for (int b = 0; b < nb; ++b) {
    if (embed[b]) {
      out.prog.blocks[b].dim = 2 * p.blocks[b].dim;
      out.any_embedded = true;
    }
  }
  auto lower_row = [&](const LinearRow& row) {
    LinearRow r;
    r.rhs = row.rhs;
    r.scalar_terms = row.scalar_terms;
    for (const auto& [blk, coeff] : row.matrix_terms) {
      if (embed[blk]) {
        // <E(C)/2, E(V)> = Re tr(C V); the factor 2 is folded into the
        // coefficient so objective and rhs stay unscaled.
        r.matrix_terms.emplace_back(blk, real_embedding(coeff).scaled(0.5));
      } else {
        r.matrix_terms.emplace_back(blk, HermitianOperator(
                                             coeff.entries().real().cast<Complex>()));
      }
    }
    return r;
  };
  out.prog.objective = lower_row(p.objective);
  for (int r = 0; r < nr; ++r) {
    if (prunable[r] && !reinstated[r]) continue;
    out.kept_rows.push_back(r);
    out.prog.constraints.push_back(lower_row(p.constraints[r]));
  }
  return out;
}

}  // namespace detail

ConeProgram realify(const ConeProgram& p) {
  detail::RealifyResult r = detail::realify_ex(p);
  if (!r.any_embedded) return p;
  return std::move(r.prog);
}

MatrixExpr& MatrixExpr::add_scalar_times(int block, const HermitianOperator& coeff) {
  if (coeff.dim() != dim_) throw DimensionError("MatrixExpr: scalar coefficient dim mismatch");
  scalar_terms_.emplace_back(block, coeff);
  return *this;
}

MatrixExpr& MatrixExpr::add_constant(const HermitianOperator& c) {
  if (c.dim() != dim_) throw DimensionError("MatrixExpr: constant dim mismatch");
  constant_ = constant_ + c;
  return *this;
}

int ProgramBuilder::add_psd_block(const std::string& name, int dim) {
  p_.blocks.push_back({name, BlockKind::Psd, dim});
  return static_cast<int>(p_.blocks.size()) - 1;
}

int ProgramBuilder::add_nonneg(const std::string& name) {
  p_.blocks.push_back({name, BlockKind::Nonneg, 1});
  return static_cast<int>(p_.blocks.size()) - 1;
}

int ProgramBuilder::add_free(const std::string& name) {
  p_.blocks.push_back({name, BlockKind::Free, 1});
  return static_cast<int>(p_.blocks.size()) - 1;
}

MatrixEqRows ProgramBuilder::add_matrix_eq(const MatrixExpr& expr, const HermitianOperator& rhs) {
  const int d = expr.dim();
  if (rhs.dim() != d) throw DimensionError("add_matrix_eq: rhs dim mismatch");
  MatrixEqRows meta;
  meta.dim = d;
  const CMatrix target = rhs.entries() - expr.constant().entries();

  for (int j = 0; j < d; ++j) {
    for (int i = 0; i <= j; ++i) {
      for (int part = 0; part < (i == j ? 1 : 2); ++part) {
        const bool imag = part == 1;
        LinearRow row;
        const HermitianOperator c(entry_extractor(d, i, j, imag));
        double maxcoef = 0.0;

        // accumulate matrix coefficients per block (a block may appear in
        // several variable terms)
        std::vector<std::pair<int, CMatrix>> acc;
        for (const auto& [blk, scale] : expr.var_terms()) {
          bool found = false;
          for (auto& [ablk, am] : acc) {
            if (ablk == blk) {
              am += scale * c.entries();
              found = true;
              break;
            }
          }
          if (!found) acc.emplace_back(blk, scale * c.entries());
        }
        for (const auto& [blk, m] : acc) {
          HermitianOperator h(m);
          maxcoef = std::max(maxcoef, h.max_abs());
          row.matrix_terms.emplace_back(blk, std::move(h));
        }
        for (const auto& [blk, k] : expr.scalar_terms()) {
          const Complex e = k(i, j);
          const double v = imag ? e.imag() : e.real();
          if (std::abs(v) <= 1e-14) continue;
          maxcoef = std::max(maxcoef, std::abs(v));
          row.scalar_terms.emplace_back(blk, v);
        }
        const Complex t = target(i, j);
        row.rhs = imag ? t.imag() : t.real();

        if (maxcoef <= 1e-14 && std::abs(row.rhs) <= 1e-14) continue;
        meta.entries.push_back({static_cast<int>(p_.constraints.size()), i, j, imag});
        p_.constraints.push_back(std::move(row));
      }
    }
  }
  return meta;
}

int ProgramBuilder::add_psd_ge(const MatrixExpr& expr, const HermitianOperator& rhs,
                               const std::string& slack_name) {
  const int slack = add_psd_block(slack_name, expr.dim());
  MatrixExpr shifted = expr;
  shifted.add_variable(slack, -1.0);
  add_matrix_eq(shifted, rhs);
  return slack;
}

void ProgramBuilder::set_objective(LinearRow obj, Sense sense) {
  p_.objective = std::move(obj);
  p_.sense = sense;
}

HermitianOperator ProgramBuilder::dual_operator(const MatrixEqRows& rows,
                                                const std::vector<double>& y) {
  CMatrix w = CMatrix::Zero(rows.dim, rows.dim);
  for (const auto& e : rows.entries) {
    w += y.at(e.row) * entry_extractor(rows.dim, e.i, e.j, e.imag);
  }
  return HermitianOperator(w);
}

}  // namespace incompat
