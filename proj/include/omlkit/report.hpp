#pragma once

// JSON forms of the reports that have no natural home next to json.hpp.

#include <json.hpp>

#include "omlkit/bigraph.hpp"
#include "omlkit/equations.hpp"
#include "omlkit/lattice.hpp"
#include "omlkit/mmp.hpp"

namespace omlkit {

nlohmann::json to_json(const MmpHypergraph& h, const ValidationReport& r);
nlohmann::json to_json(const MmpHypergraph& h, const LoopReport& r);
nlohmann::json to_json(const Oml& L, const AxiomReport& r);
nlohmann::json to_json(const Condition& c, const CheckResult& r);
nlohmann::json to_json(const GenerationStats& s);

/// Size, uniformity, regularity, connectivity and loops; incidence girth
/// and self-duality for 3-regular, 3-uniform input (null otherwise).
nlohmann::json hypergraph_stats(const MmpHypergraph& h);

}  // namespace omlkit
