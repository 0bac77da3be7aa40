#pragma once

#include <json.hpp>

#include "crystalforms/decomposition.hpp"

namespace crystalforms {

using Json = nlohmann::json;

Json graph_to_json(const MultiGraph& g);
MultiGraph graph_from_json(const Json& j);

Json lattice_to_json(const PeriodicLattice& lat);
PeriodicLattice lattice_from_json(const Json& j);

Json interaction_to_json(const Interaction& in);
Interaction interaction_from_json(const Json& j);

Json configuration_to_json(const Configuration& c, const Interaction& in);
Configuration configuration_from_json(const Json& j, const Interaction& in, int rank);

Json form_to_json(const OrbitDataForm& form, const Interaction& in);
// Builds the orbit-data form described by the JSON against the system.
OrbitDataForm form_from_json(const Json& j, const System& sys);

Json uniform_function_to_json(const UniformFunction& f, const Interaction& in);

Json conserved_quantity_to_json(const ConservedQuantity& q, const Interaction& in);

Json decomposition_to_json(const DecompositionResult& res, const System& sys);

Json load_json_file(const std::string& path);
void save_json_file(const std::string& path, const Json& j);

}  // namespace crystalforms
