#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "detstrata/determinantal.hpp"
#include "detstrata/homext.hpp"
#include "json.hpp"

namespace detstrata {

struct RegistryInstance {
  std::string label;  // "m=5", "c=4", "base"
  DegreeMatrixSpec spec;
  // Ghost examples: the corner (1-based row, 0-based column) to generize.
  std::optional<std::pair<std::size_t, std::size_t>> corner;
};

struct RegistryEntry {
  std::string id;
  std::string summary;
  std::vector<RegistryInstance> instances;
  HomExtOptions bounds;  // truncation used for every instance
};

const std::vector<RegistryEntry>& registry();
// Throws InvalidInput for unknown ids.
const RegistryEntry& registry_entry(const std::string& id);

// Field names understood by compute_fields.
const std::vector<std::string>& registry_fields();

// Computes the named fields for one instance; values are plain JSON (numbers,
// lists, Betti tables as [{"i","j","beta"}]), null when a value was not
// decided within bounds. Throws InvalidInput for unknown fields.
nlohmann::ordered_json compute_fields(const RegistryEntry& entry, const RegistryInstance& instance,
                                      const std::vector<std::string>& fields);

// 0hom(B_{i-1}, R(a_{t+i-2})) for i = 3..c by degree-zero linear algebra,
// the definition behind the binomial K_i.
std::vector<std::int64_t> K_by_hom(const GradedMatrix& m);

// Hilbert function of R/I_t through its last nonzero degree; throws
// InvalidInput unless the quotient is artinian.
std::vector<std::size_t> h_vector(const GradedMatrix& m);

// DETSTRATA_DATA/golden when the variable is set, else the source tree copy.
std::string default_golden_dir();
nlohmann::json load_golden(const std::string& id, const std::string& dir = default_golden_dir());

inline constexpr std::uint32_t kRetryPrime = 32003;

struct FieldDiff {
  std::string field;
  std::string origin;  // "stated" or "derived"
  nlohmann::json expected;
  nlohmann::json actual;
};

struct InstanceOutcome {
  std::string label;
  std::uint32_t prime = kDefaultPrime;  // prime of the final comparison
  std::vector<FieldDiff> diffs;         // at that prime
  std::vector<FieldDiff> first_diffs;   // at the default prime when a retry happened
  nlohmann::ordered_json actual;
  double seconds = 0;
  std::string error;  // set when the computation threw

  bool ok() const { return diffs.empty() && error.empty(); }
  bool characteristic_sensitive() const { return !first_diffs.empty() && diffs.empty(); }
};

struct ReproduceResult {
  std::string id;
  std::vector<InstanceOutcome> instances;
  bool ok() const;
};

struct ReproduceOptions {
  std::string golden_dir = default_golden_dir();
  std::optional<std::uint64_t> seed;  // overrides every instance seed
  std::optional<std::uint32_t> prime;  // first prime; the retry uses kRetryPrime
};

// Recomputes every golden field, diffs, and on a mismatch recomputes once at
// kRetryPrime. Throws InvalidInput when the golden file is missing or names
// instances the registry does not have.
ReproduceResult reproduce(const std::string& id, const ReproduceOptions& options = {});

std::string to_text(const ReproduceResult& r);
std::string to_json(const ReproduceResult& r, int indent = 2);

}  // namespace detstrata
