#pragma once

#include "foundry/foundation.hpp"
#include "foundry/represent.hpp"

#include <json.hpp>

#include <string>

namespace foundry {

using Json = nlohmann::json;

// "pasture/v1": generators, multiplicative relations, additive null terms
Json pasture_to_json(const Pasture& p);
Pasture pasture_from_json(const Json& j);

// "matroid/v1": n, rank, and exactly one of bases / circuits / nonbases
Json matroid_to_json(const Matroid& m);
Matroid matroid_from_json(const Json& j);

// "diagram/v1": nodes (pasture/v1) and edges with generator images
Diagram diagram_from_json(const Json& j);

Json report_to_json(const FoundationReport& rep);
Json table_to_json(const RepresentabilityTable& t);
Json element_to_json(const Pasture& p, const PastureElement& e);

std::string dump_json(const Json& j);

}  // namespace foundry
