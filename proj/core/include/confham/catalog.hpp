#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "confham/model.hpp"

namespace confham {
namespace catalog {

/// A named parameter specialization of the family, with the observables known
/// to be conserved there and, where classical mechanics fixes it, the expected
/// orbit-closure rational.
struct ReductionEntry {
    std::string name;
    ModelParams params;
    std::string coordinate_frame;  // "cartesian", "polar" or "uv"
    std::vector<std::string> known_integrals;
    std::optional<std::pair<long, long>> expected_closure;
    std::string notes;
};

/// Names accepted by instantiate_reduction.
const std::vector<std::string>& entry_names();

/// Binds a catalog entry. Bindings are a flat name -> value map; every entry
/// documents its keys in its notes. Unknown names or unknown/missing keys
/// throw std::invalid_argument naming the offender.
///
/// Common keys: "n"; per-entry keys include "k", "omega", "alpha", "beta",
/// "lambda" (effective Kepler-type coupling), "gamma". Per-axis overrides
/// "omega1".."omegaN" / "alpha1".."alphaN" apply where the entry allows them.
ReductionEntry instantiate_reduction(const std::string& name,
                                     const std::map<std::string, double>& bindings);

/// Independently coded textbook energy of the reduction at a state expressed
/// in the entry's coordinate frame. For "ttw" the value is routed through the
/// polar form and the full coordinate chain, not through the family formula.
double reference_energy(const ReductionEntry& entry, const PhaseState& state);

}  // namespace catalog
}  // namespace confham
