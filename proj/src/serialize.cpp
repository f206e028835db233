#include "incompat/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace incompat {

namespace {

Json real_matrix(const Eigen::MatrixXd& m) {
  Json rows = Json::array();
  for (int i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_field(const Json& j, int dim, const char* name) {
  if (!j.is_array() || static_cast<int>(j.size()) != dim)
    throw ValidationError(std::string("matrix field '") + name + "' has wrong row count");
  Eigen::MatrixXd m(dim, dim);
  for (int i = 0; i < dim; ++i) {
    const Json& row = j.at(i);
    if (!row.is_array() || static_cast<int>(row.size()) != dim)
      throw ValidationError(std::string("matrix field '") + name + "' row " +
                            std::to_string(i) + " has wrong length");
    for (int k = 0; k < dim; ++k) m(i, k) = row.at(k).get<double>();
  }
  return m;
}

}  // namespace

Json to_json(const HermitianOperator& h) {
  Json j;
  j["dim"] = h.dim();
  j["re"] = real_matrix(h.entries().real());
  if (!h.is_real()) j["im"] = real_matrix(h.entries().imag());
  return j;
}

HermitianOperator hermitian_from_json(const Json& j) {
  const int dim = j.at("dim").get<int>();
  if (dim < 1) throw ValidationError("matrix: dim < 1");
  CMatrix m(dim, dim);
  m.real() = matrix_field(j.at("re"), dim, "re");
  m.imag() = j.contains("im") ? matrix_field(j.at("im"), dim, "im")
                              : Eigen::MatrixXd::Zero(dim, dim);
  return HermitianOperator(m);
}

Json to_json(const MeasurementSet& m) {
  Json j;
  j["dim"] = m.dim();
  j["settings"] = m.settings();
  j["outcomes"] = m.outcomes();
  Json povms = Json::array();
  for (int x = 0; x < m.settings(); ++x) {
    Json els = Json::array();
    for (int a = 0; a < m.outcomes(); ++a) els.push_back(to_json(m.element(a, x)));
    povms.push_back(std::move(els));
  }
  j["povms"] = std::move(povms);
  return j;
}

MeasurementSet measurement_set_from_json(const Json& j) {
  const int dim = j.at("dim").get<int>();
  std::vector<Povm> povms;
  for (const Json& p : j.at("povms")) {
    std::vector<HermitianOperator> els;
    for (const Json& e : p) els.push_back(hermitian_from_json(e));
    povms.emplace_back(dim, std::move(els));
  }
  MeasurementSet m(std::move(povms));
  if (j.contains("settings") && j.at("settings").get<int>() != m.settings())
    throw ValidationError("measurement set: declared settings disagree with povm list");
  if (j.contains("outcomes") && j.at("outcomes").get<int>() != m.outcomes())
    throw ValidationError("measurement set: declared outcomes disagree with povm list");
  return m;
}

Json to_json(const DiscriminationGame& g) {
  Json j;
  Json prior = Json::array();
  for (int y = 0; y < g.size(); ++y) prior.push_back(g.prior(y));
  j["prior"] = std::move(prior);
  Json ens = Json::array();
  for (int y = 0; y < g.size(); ++y) {
    Json e;
    Json probs = Json::array();
    Json states = Json::array();
    for (int b = 0; b < g.ensemble(y).size(); ++b) {
      probs.push_back(g.ensemble(y).prob(b));
      states.push_back(to_json(g.ensemble(y).state(b).op()));
    }
    e["probs"] = std::move(probs);
    e["states"] = std::move(states);
    ens.push_back(std::move(e));
  }
  j["ensembles"] = std::move(ens);
  return j;
}

DiscriminationGame game_from_json(const Json& j) {
  std::vector<Ensemble> ensembles;
  for (size_t y = 0; y < j.at("ensembles").size(); ++y) {
    const Json& e = j.at("ensembles").at(y);
    std::vector<DensityOperator> states;
    std::vector<double> probs = e.at("probs").get<std::vector<double>>();
    for (const Json& s : e.at("states")) {
      try {
        states.emplace_back(hermitian_from_json(s));
      } catch (const ValidationError& err) {
        throw ValidationError("game ensemble " + std::to_string(y) + ": " + err.what());
      }
    }
    ensembles.emplace_back(std::move(states), std::move(probs));
  }
  return DiscriminationGame(std::move(ensembles), j.at("prior").get<std::vector<double>>());
}

Json to_json(const Assemblage& a) {
  Json j;
  j["dim"] = a.dim();
  j["settings"] = a.settings();
  j["outcomes"] = a.outcomes();
  Json sigma = Json::array();
  for (int x = 0; x < a.settings(); ++x) {
    Json row = Json::array();
    for (int o = 0; o < a.outcomes(); ++o) row.push_back(to_json(a.sigma(o, x)));
    sigma.push_back(std::move(row));
  }
  j["sigma"] = std::move(sigma);
  return j;
}

Assemblage assemblage_from_json(const Json& j) {
  const int dim = j.at("dim").get<int>();
  std::vector<std::vector<HermitianOperator>> sigma;
  for (const Json& row : j.at("sigma")) {
    std::vector<HermitianOperator> r;
    for (const Json& s : row) r.push_back(hermitian_from_json(s));
    sigma.push_back(std::move(r));
  }
  return Assemblage(dim, std::move(sigma));
}

Json to_json(const SimulationKernel& k) {
  Json j;
  j["source_settings"] = k.source_settings();
  j["source_outcomes"] = k.source_outcomes();
  j["target_settings"] = k.target_settings();
  j["target_outcomes"] = k.target_outcomes();
  Json table = Json::array();
  for (int y = 0; y < k.target_settings(); ++y) {
    Json ty = Json::array();
    for (int x = 0; x < k.source_settings(); ++x) {
      Json tx = Json::array();
      for (int b = 0; b < k.target_outcomes(); ++b) {
        Json tb = Json::array();
        for (int a = 0; a < k.source_outcomes(); ++a) tb.push_back(k.r(y, x, b, a));
        tx.push_back(std::move(tb));
      }
      ty.push_back(std::move(tx));
    }
    table.push_back(std::move(ty));
  }
  j["table"] = std::move(table);
  return j;
}

SimulationKernel kernel_from_json(const Json& j) {
  const int m = j.at("source_settings").get<int>();
  const int o = j.at("source_outcomes").get<int>();
  const int n = j.at("target_settings").get<int>();
  const int p = j.at("target_outcomes").get<int>();
  std::vector<double> table;
  table.reserve(static_cast<size_t>(m) * o * n * p);
  for (const Json& ty : j.at("table"))
    for (const Json& tx : ty)
      for (const Json& tb : tx)
        for (const Json& v : tb) table.push_back(v.get<double>());
  return SimulationKernel(m, o, n, p, std::move(table));
}

Json to_json(const ParentPovm& p) {
  Json j;
  j["dim"] = p.dim();
  j["scale"] = p.scale();
  Json els = Json::array();
  for (int i = 0; i < p.size(); ++i) els.push_back(to_json(p.element(i)));
  j["elements"] = std::move(els);
  return j;
}

ParentPovm parent_from_json(const Json& j) {
  const int dim = j.at("dim").get<int>();
  std::vector<HermitianOperator> els;
  for (const Json& e : j.at("elements")) els.push_back(hermitian_from_json(e));
  return ParentPovm(dim, std::move(els), j.at("scale").get<double>());
}

Json to_json(const DualWitness& w) {
  Json j;
  j["X"] = to_json(w.x_op);
  Json omega = Json::array();
  for (int x = 0; x < w.settings(); ++x) {
    Json row = Json::array();
    for (int a = 0; a < w.outcomes(); ++a) row.push_back(to_json(w.omega[x][a]));
    omega.push_back(std::move(row));
  }
  j["omega"] = std::move(omega);  // indexed [x][a]
  return j;
}

DualWitness witness_from_json(const Json& j) {
  DualWitness w{hermitian_from_json(j.at("X")), {}};
  for (const Json& row : j.at("omega")) {
    std::vector<HermitianOperator> r;
    for (const Json& e : row) r.push_back(hermitian_from_json(e));
    w.omega.push_back(std::move(r));
  }
  w.verify();
  return w;
}

Json to_json(const RoiResult& r) {
  Json j;
  j["value"] = r.value;
  j["gap"] = r.gap;
  j["primal"] = to_json(r.primal);
  j["dual"] = to_json(r.dual);
  return j;
}

RoiResult roi_result_from_json(const Json& j) {
  return RoiResult{j.at("value").get<double>(), j.at("gap").get<double>(),
                   parent_from_json(j.at("primal")), witness_from_json(j.at("dual"))};
}

Json dump_program(const ConeProgram& p) {
  Json j;
  j["sense"] = p.sense == Sense::Maximize ? "max" : "min";
  Json blocks = Json::array();
  for (const auto& b : p.blocks) {
    Json jb;
    jb["name"] = b.name;
    jb["kind"] = b.kind == BlockKind::Psd ? "psd" : b.kind == BlockKind::Nonneg ? "nonneg" : "free";
    if (b.kind == BlockKind::Psd) jb["dim"] = b.dim;
    blocks.push_back(std::move(jb));
  }
  j["blocks"] = std::move(blocks);
  auto row_json = [&](const LinearRow& row, bool with_rhs) {
    Json jr;
    Json terms;
    for (const auto& [blk, coeff] : row.matrix_terms) terms[p.blocks[blk].name] = to_json(coeff);
    for (const auto& [blk, coeff] : row.scalar_terms) terms[p.blocks[blk].name] = coeff;
    jr["terms"] = std::move(terms);
    if (with_rhs) jr["rhs"] = row.rhs;
    return jr;
  };
  j["objective"] = row_json(p.objective, false);
  Json rows = Json::array();
  for (const auto& row : p.constraints) rows.push_back(row_json(row, true));
  j["constraints"] = std::move(rows);
  return j;
}

namespace {

void write_fixed(std::ostream& os, const Json& j, int indent, int depth) {
  const std::string pad(static_cast<size_t>(indent) * depth, ' ');
  const std::string padin(static_cast<size_t>(indent) * (depth + 1), ' ');
  const char* nl = indent > 0 ? "\n" : "";
  switch (j.type()) {
    case Json::value_t::object: {
      os << "{" << nl;
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << "," << nl;
        first = false;
        os << padin << Json(it.key()).dump() << (indent > 0 ? ": " : ":");
        write_fixed(os, it.value(), indent, depth + 1);
      }
      os << nl << pad << "}";
      break;
    }
    case Json::value_t::array: {
      os << "[" << nl;
      bool first = true;
      for (const auto& v : j) {
        if (!first) os << "," << nl;
        first = false;
        os << padin;
        write_fixed(os, v, indent, depth + 1);
      }
      os << nl << pad << "]";
      break;
    }
    case Json::value_t::number_float: {
      char buf[64];
      std::snprintf(buf, sizeof(buf), "%.12g", j.get<double>());
      os << buf;
      break;
    }
    default:
      os << j.dump();
  }
}

}  // namespace

std::string dump_fixed(const Json& j, int indent) {
  std::ostringstream os;
  write_fixed(os, j, indent, 0);
  os << "\n";
  return os.str();
}

}  // namespace incompat
