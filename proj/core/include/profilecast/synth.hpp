#pragma once

#include <cstdint>
#include <string>

#include "profilecast/activity.hpp"

// Deterministic reference dataset: 940 records of 33 users over 31 days in
// the full 15-column export schema. Users fall into four activity
// archetypes plus three mixed-profile users whose cluster membership is
// unstable across feature views.

namespace profilecast::synth {

inline constexpr std::uint64_t kReferenceSeed = 2016;

Dataset generate(std::uint64_t seed = kReferenceSeed);
std::string generate_csv(std::uint64_t seed = kReferenceSeed);

} // namespace profilecast::synth
