#pragma once

#include <json.hpp>

#include <string>

#include "incompat/cone_program.hpp"
#include "incompat/discrimination.hpp"
#include "incompat/incompatibility.hpp"
#include "incompat/measurement.hpp"
#include "incompat/steering.hpp"

namespace incompat {

using Json = nlohmann::json;

// Matrices serialize as {"dim": d, "re": [[..]], "im": [[..]]}, row-major,
// with "im" omitted when all-zero.
Json to_json(const HermitianOperator& h);
HermitianOperator hermitian_from_json(const Json& j);

Json to_json(const MeasurementSet& m);
MeasurementSet measurement_set_from_json(const Json& j);

Json to_json(const DiscriminationGame& g);
DiscriminationGame game_from_json(const Json& j);

Json to_json(const Assemblage& a);
Assemblage assemblage_from_json(const Json& j);

Json to_json(const SimulationKernel& k);
SimulationKernel kernel_from_json(const Json& j);

Json to_json(const ParentPovm& p);
ParentPovm parent_from_json(const Json& j);

Json to_json(const DualWitness& w);
DualWitness witness_from_json(const Json& j);

Json to_json(const RoiResult& r);
RoiResult roi_result_from_json(const Json& j);

/// Debug dump of a cone program (replayable problem description).
Json dump_program(const ConeProgram& p);

/// Deterministic serialisation: doubles printed with 12 significant digits,
/// keys in nlohmann's (sorted) object order, no locale dependence.
std::string dump_fixed(const Json& j, int indent = 0);

}  // namespace incompat
