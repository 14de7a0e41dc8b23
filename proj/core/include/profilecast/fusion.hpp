#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "profilecast/features.hpp"
#include "profilecast/matrix.hpp"

// Phase 3: aggregate each user's record-level rows into one fixed-length
// profile vector of six statistics per feature.

namespace profilecast {

// Fixed statistic order; stat_names are "<feature>_<stat>".
inline constexpr std::array<const char*, 6> kFusionStats = {
    "max", "min", "range", "std", "mean", "median"};

struct UserProfileVector {
    std::int64_t user_id = 0;
    FeatureModuleId module = FeatureModuleId::Original;
    std::vector<double> values; // 6 * feature count
    std::vector<std::string> stat_names;
};

struct ProfileMatrix {
    FeatureModuleId module = FeatureModuleId::Original;
    std::vector<std::int64_t> user_ids;  // ascending; one row per user
    std::vector<std::string> stat_names; // 6 * feature count
    Matrix values;                       // raw fused statistics
    Matrix standardized_values;          // z-scored copy used for clustering and metrics
    std::vector<bool> constant_cols;
    std::vector<std::string> warnings;   // users with < 5 records

    std::size_t n_users() const { return user_ids.size(); }
    std::size_t n_stats() const { return stat_names.size(); }
};

// Statistics per user per feature over that user's rows: max, min, range,
// population std, mean, median (even count: mean of the two central values).
// The fused matrix is then z-scored unless standardize_profiles is off, in
// which case standardized_values aliases the raw values.
ProfileMatrix fuse_user_records(const FeatureMatrix& fm, bool standardize_profiles = true);

UserProfileVector user_profile(const ProfileMatrix& pm, std::size_t row);

} // namespace profilecast
