#pragma once

#include <string>

#include "detstrata/determinantal.hpp"
#include "json.hpp"

namespace detstrata {

// {"n", "p", "b", "a", "seed", "allow_constants", "explicit_entries"}; only b
// and a are required when reading. Throws InvalidInput.
nlohmann::ordered_json spec_to_json(const DegreeMatrixSpec& spec);
DegreeMatrixSpec spec_from_json(const nlohmann::json& j);
DegreeMatrixSpec read_spec_file(const std::string& path);

// [{"i", "j", "beta"}, ...] in (i, j) order; a nonempty method is added to
// every entry.
nlohmann::ordered_json betti_to_json(const BettiTable& table, const std::string& method = {});
BettiTable betti_from_json(const nlohmann::json& j);

}  // namespace detstrata
