#include "incompat/measurement.hpp"

#include <cmath>
#include <utility>

namespace incompat {

std::vector<OutcomeString> deterministic_table(int settings, int outcomes, int cap) {
  return enumerate_strings(std::vector<int>(settings, outcomes), cap);
}

std::vector<OutcomeString> enumerate_strings(const std::vector<int>& radices, int cap) {
  double total = 1;
  for (int r : radices) {
    if (r < 1) throw ValidationError("enumerate_strings: radix < 1");
    total *= r;
  }
  if (total > cap) {
    throw ValidationError("enumerate_strings: " + std::to_string(static_cast<long long>(total)) +
                          " strings exceed cap " + std::to_string(cap));
  }
  const int m = static_cast<int>(radices.size());
  std::vector<OutcomeString> out;
  out.reserve(static_cast<size_t>(total));
  OutcomeString cur{std::vector<int>(m, 0)};
  while (true) {
    out.push_back(cur);
    int x = m - 1;
    while (x >= 0) {
      if (++cur.digits[x] < radices[x]) break;
      cur.digits[x] = 0;
      --x;
    }
    if (x < 0) break;
  }
  return out;
}

Povm::Povm(int dim, std::vector<HermitianOperator> elements)
    : dim_(dim), elements_(std::move(elements)) {
  if (elements_.empty()) throw ValidationError("Povm: no elements");
  for (size_t a = 0; a < elements_.size(); ++a) {
    if (elements_[a].dim() != dim_)
      throw DimensionError("Povm: element " + std::to_string(a) + " has dim " +
                           std::to_string(elements_[a].dim()) + ", expected " +
                           std::to_string(dim_));
    const double lam = min_eigenvalue(elements_[a]);
    if (lam < -tol::psd)
      throw ValidationError("Povm: element " + std::to_string(a) +
                            " not PSD, min eigenvalue " + std::to_string(lam));
  }
  const double res = completeness_residual();
  if (res > tol::feas)
    throw ValidationError("Povm: completeness residual " + std::to_string(res));
}

double Povm::worst_psd_residual() const {
  double worst = 0.0;
  for (const auto& e : elements_) worst = std::min(worst, min_eigenvalue(e));
  return -worst;
}

double Povm::completeness_residual() const {
  HermitianOperator sum = HermitianOperator::zero(dim_);
  for (const auto& e : elements_) sum = sum + e;
  return (sum - HermitianOperator::identity(dim_)).max_abs();
}

MeasurementSet::MeasurementSet(std::vector<Povm> povms) {
  if (povms.empty()) throw ValidationError("MeasurementSet: no settings");
  dim_ = povms[0].dim();
  outcomes_ = 0;
  for (const auto& p : povms) {
    if (p.dim() != dim_) throw DimensionError("MeasurementSet: mixed dimensions");
    outcomes_ = std::max(outcomes_, p.outcomes());
  }
  povms_.reserve(povms.size());
  for (auto& p : povms) {
    if (p.outcomes() == outcomes_) {
      povms_.push_back(std::move(p));
    } else {
      std::vector<HermitianOperator> padded = p.elements();
      while (static_cast<int>(padded.size()) < outcomes_)
        padded.push_back(HermitianOperator::zero(dim_));
      povms_.emplace_back(dim_, std::move(padded));
    }
  }
}

SimulationKernel::SimulationKernel(int source_settings, int source_outcomes, int target_settings,
                                   int target_outcomes, std::vector<double> table)
    : m_(source_settings), o_(source_outcomes), n_(target_settings), p_(target_outcomes),
      table_(std::move(table)) {
  if (m_ < 1 || o_ < 1 || n_ < 1 || p_ < 1)
    throw ValidationError("SimulationKernel: empty shape");
  if (table_.size() != static_cast<size_t>(m_) * o_ * n_ * p_)
    throw DimensionError("SimulationKernel: table size mismatch");
  for (double v : table_)
    if (v < -1e-12) throw ValidationError("SimulationKernel: negative entry");
  for (int y = 0; y < n_; ++y) {
    double tsum = 0.0;
    for (int x = 0; x < m_; ++x) {
      const double t0 = t(y, x);
      tsum += t0;
      for (int a = 1; a < o_; ++a) {
        double ta = 0.0;
        for (int b = 0; b < p_; ++b) ta += r(y, x, b, a);
        if (std::abs(ta - t0) > tol::feas)
          throw ValidationError("SimulationKernel: marginal depends on the input outcome at y=" +
                                std::to_string(y) + ", x=" + std::to_string(x));
      }
    }
    if (std::abs(tsum - 1.0) > tol::feas)
      throw ValidationError("SimulationKernel: setting distribution at y=" + std::to_string(y) +
                            " sums to " + std::to_string(tsum));
  }
}

double SimulationKernel::t(int y, int x) const {
  double s = 0.0;
  for (int b = 0; b < p_; ++b) s += r(y, x, b, 0);
  return s;
}

SimulationKernel SimulationKernel::identity(int settings, int outcomes) {
  std::vector<double> table(
      static_cast<size_t>(settings) * outcomes * settings * outcomes, 0.0);
  for (int y = 0; y < settings; ++y)
    for (int a = 0; a < outcomes; ++a)
      table[((static_cast<size_t>(y) * settings + y) * outcomes + a) * outcomes + a] = 1.0;
  return SimulationKernel(settings, outcomes, settings, outcomes, std::move(table));
}

SimulationKernel compose(const SimulationKernel& second, const SimulationKernel& first) {
  if (second.source_settings() != first.target_settings() ||
      second.source_outcomes() != first.target_outcomes())
    throw DimensionError("compose: kernel shapes do not chain");
  const int m = first.source_settings(), o = first.source_outcomes();
  const int n = second.target_settings(), p = second.target_outcomes();
  std::vector<double> table(static_cast<size_t>(m) * o * n * p, 0.0);
  for (int z = 0; z < n; ++z)
    for (int x = 0; x < m; ++x)
      for (int c = 0; c < p; ++c)
        for (int a = 0; a < o; ++a) {
          double v = 0.0;
          for (int y = 0; y < first.target_settings(); ++y)
            for (int b = 0; b < first.target_outcomes(); ++b)
              v += second.r(z, y, c, b) * first.r(y, x, b, a);
          table[((static_cast<size_t>(z) * m + x) * p + c) * o + a] = v;
        }
  return SimulationKernel(m, o, n, p, std::move(table));
}

MeasurementSet apply_simulation(const MeasurementSet& m, const SimulationKernel& k) {
  if (k.source_settings() != m.settings() || k.source_outcomes() != m.outcomes())
    throw DimensionError("apply_simulation: kernel shape does not match the measurement set");
  std::vector<Povm> povms;
  povms.reserve(k.target_settings());
  for (int y = 0; y < k.target_settings(); ++y) {
    std::vector<HermitianOperator> els;
    els.reserve(k.target_outcomes());
    for (int b = 0; b < k.target_outcomes(); ++b) {
      HermitianOperator e = HermitianOperator::zero(m.dim());
      for (int x = 0; x < m.settings(); ++x)
        for (int a = 0; a < m.outcomes(); ++a)
          e = e + k.r(y, x, b, a) * m.element(a, x);
      els.push_back(e);
    }
    povms.emplace_back(m.dim(), std::move(els));  // asserts completeness
  }
  return MeasurementSet(std::move(povms));
}

MeasurementSet mix(const MeasurementSet& m1, const MeasurementSet& m2, double p) {
  if (m1.dim() != m2.dim() || m1.settings() != m2.settings() || m1.outcomes() != m2.outcomes())
    throw DimensionError("mix: shape mismatch");
  if (p < 0.0 || p > 1.0) throw ValidationError("mix: weight outside [0,1]");
  std::vector<Povm> povms;
  for (int x = 0; x < m1.settings(); ++x) {
    std::vector<HermitianOperator> els;
    for (int a = 0; a < m1.outcomes(); ++a)
      els.push_back(p * m1.element(a, x) + (1.0 - p) * m2.element(a, x));
    povms.emplace_back(m1.dim(), std::move(els));
  }
  return MeasurementSet(std::move(povms));
}

MeasurementSet random_measurement_set(int dim, int settings, int outcomes, std::uint64_t seed) {
  if (dim < 1 || settings < 1 || outcomes < 1)
    throw ValidationError("random_measurement_set: empty shape");
  Rng rng(seed);
  std::vector<Povm> povms;
  for (int x = 0; x < settings; ++x) {
    std::vector<HermitianOperator> as;
    HermitianOperator s = HermitianOperator::zero(dim);
    for (int a = 0; a < outcomes; ++a) {
      as.push_back(random_psd(dim, rng));
      s = s + as.back();
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> es(s.entries());
    CMatrix si =
        es.eigenvectors() *
        es.eigenvalues().cwiseMax(1e-14).cwiseSqrt().cwiseInverse().asDiagonal().toDenseMatrix().cast<Complex>() *
        es.eigenvectors().adjoint();
    std::vector<HermitianOperator> els;
    for (int a = 0; a < outcomes; ++a)
      els.emplace_back(si * as[a].entries() * si);
    povms.emplace_back(dim, std::move(els));
  }
  return MeasurementSet(std::move(povms));
}

SimulationKernel random_kernel(int source_settings, int source_outcomes, int target_settings,
                               int target_outcomes, Rng& rng) {
  std::vector<double> table(static_cast<size_t>(source_settings) * source_outcomes *
                                target_settings * target_outcomes,
                            0.0);
  for (int y = 0; y < target_settings; ++y) {
    const std::vector<double> t = rng.simplex(source_settings);
    for (int x = 0; x < source_settings; ++x)
      for (int a = 0; a < source_outcomes; ++a) {
        const std::vector<double> k = rng.simplex(target_outcomes);
        for (int b = 0; b < target_outcomes; ++b)
          table[((static_cast<size_t>(y) * source_settings + x) * target_outcomes + b) *
                    source_outcomes +
                a] = t[x] * k[b];
      }
  }
  return SimulationKernel(source_settings, source_outcomes, target_settings, target_outcomes,
                          std::move(table));
}

MeasurementSet trivial_set(int dim, int settings, int outcomes) {
  std::vector<Povm> povms;
  for (int x = 0; x < settings; ++x) {
    std::vector<HermitianOperator> els(
        outcomes, HermitianOperator::identity(dim).scaled(1.0 / outcomes));
    povms.emplace_back(dim, std::move(els));
  }
  return MeasurementSet(std::move(povms));
}

MeasurementSet random_compatible_set(int dim, int settings, int outcomes, std::uint64_t seed) {
  Rng rng(seed);
  double cap = 1;
  for (int x = 0; x < settings; ++x) cap *= outcomes;
  const int parent_outcomes = static_cast<int>(std::min(cap, 8.0));
  const MeasurementSet parent = random_measurement_set(dim, 1, parent_outcomes, rng.next_u64());
  const SimulationKernel k = random_kernel(1, parent_outcomes, settings, outcomes, rng);
  return apply_simulation(parent, k);
}

namespace {
Povm basis_povm(const CVector& v0, const CVector& v1) {
  return Povm(2, {projector(v0), projector(v1)});
}
}  // namespace

MeasurementSet qubit_mub_pair() {
  CVector e0(2), e1(2), plus(2), minus(2);
  e0 << 1, 0;
  e1 << 0, 1;
  plus << 1, 1;
  minus << 1, -1;
  return MeasurementSet({basis_povm(e0, e1), basis_povm(plus, minus)});
}

MeasurementSet qubit_mub_trio() {
  CVector e0(2), e1(2), plus(2), minus(2), iplus(2), iminus(2);
  e0 << 1, 0;
  e1 << 0, 1;
  plus << 1, 1;
  minus << 1, -1;
  iplus << 1, Complex(0, 1);
  iminus << 1, Complex(0, -1);
  return MeasurementSet({basis_povm(e0, e1), basis_povm(plus, minus), basis_povm(iplus, iminus)});
}

MeasurementSet smeared_mub_pair(double eta) {
  return mix(qubit_mub_pair(), trivial_set(2, 2, 2), eta);
}

ParentPovm::ParentPovm(int dim, std::vector<HermitianOperator> elements, double scale)
    : dim_(dim), scale_(scale), elements_(std::move(elements)) {
  if (elements_.empty()) throw ValidationError("ParentPovm: no elements");
  HermitianOperator sum = HermitianOperator::zero(dim_);
  for (size_t i = 0; i < elements_.size(); ++i) {
    if (elements_[i].dim() != dim_) throw DimensionError("ParentPovm: element dim mismatch");
    const double lam = min_eigenvalue(elements_[i]);
    if (lam < -tol::psd)
      throw ValidationError("ParentPovm: element " + std::to_string(i) +
                            " not PSD, min eigenvalue " + std::to_string(lam));
    sum = sum + elements_[i];
  }
  const double res = (sum - HermitianOperator::identity(dim_).scaled(scale_)).max_abs();
  if (res > 10 * tol::feas)
    throw ValidationError("ParentPovm: normalisation residual " + std::to_string(res));
}

}  // namespace incompat
