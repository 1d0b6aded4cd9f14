/**
 * The 12 video archetypes: duration statistics, viral potential, and the
 * quality-primitive baselines the generator samples around.
 */

#ifndef SVSIM_CONTENT_ARCHETYPE_HPP
#define SVSIM_CONTENT_ARCHETYPE_HPP

#include <string>
#include <vector>

namespace svsim::content {

struct Archetype {
    std::string name;
    double duration_mean;  // seconds
    double duration_sd;    // seconds
    double viral_potential; // [0,1]
    std::string signature;
    // Baselines the quality primitives are drawn around; derived from the
    // archetype signatures (hook-forward formats score higher hooks).
    double hook_base;
    double quality_base;
    // Caption-free keyword stems used for seeded embeddings and hashtags.
    std::string visual_keywords;
    std::string audio_keywords;
};

/// Fixed table of 12; order is the canonical archetype index order.
const std::vector<Archetype>& archetype_table();

const Archetype& archetype_by_name(const std::string& name); // throws LookupError
std::size_t archetype_index(const std::string& name);        // throws LookupError

/// Compact-vector one-hot group for dims 0-9. Twelve archetypes fold into
/// ten groups: NEWS joins EDUCATIONAL (informational), BEAUTY joins
/// LIFESTYLE (aesthetic), everything else keeps its own slot.
std::size_t archetype_group(const std::string& name);

constexpr std::size_t kArchetypeCount = 12;

} // namespace svsim::content

#endif // SVSIM_CONTENT_ARCHETYPE_HPP
