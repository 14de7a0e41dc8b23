#include "profilecast/fusion.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "profilecast/errors.hpp"
#include "profilecast/numeric.hpp"

namespace profilecast {

namespace {

struct SixStats {
    double max, min, range, stddev, mean, median;
};

SixStats six_stats(std::vector<double> v) {
    SixStats s{};
    const std::size_t n = v.size();
    std::sort(v.begin(), v.end());
    s.min = v.front();
    s.max = v.back();
    s.range = s.max - s.min;
    double sum = 0.0;
    for (double x : v) sum += x;
    s.mean = sum / static_cast<double>(n);
    double ss = 0.0;
    for (double x : v) {
        double d = x - s.mean;
        ss += d * d;
    }
    s.stddev = std::sqrt(ss / static_cast<double>(n)); // population denominator
    s.median = (n % 2 == 1) ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
    return s;
}

} // namespace

ProfileMatrix fuse_user_records(const FeatureMatrix& fm, bool standardize_profiles) {
    if (fm.values.rows == 0) {
        throw Error(ErrorKind::EmptyInput, "fuse_user_records: feature matrix has no rows");
    }

    // Group row indices by user; std::map gives ascending user order.
    std::map<std::int64_t, std::vector<std::size_t>> by_user;
    for (std::size_t r = 0; r < fm.row_keys.size(); ++r) {
        by_user[fm.row_keys[r].user_id].push_back(r);
    }

    const std::size_t n_features = fm.values.cols;
    ProfileMatrix pm;
    pm.module = fm.module;
    for (const auto& [user, rows] : by_user) {
        pm.user_ids.push_back(user);
        if (rows.size() < 5) {
            pm.warnings.push_back("user " + std::to_string(user) + " has only " +
                                  std::to_string(rows.size()) + " record(s)");
        }
    }
    for (std::size_t f = 0; f < n_features; ++f) {
        for (const char* stat : kFusionStats) {
            pm.stat_names.push_back(fm.values.col_names[f] + "_" + stat);
        }
    }

    pm.values = Matrix(pm.user_ids.size(), pm.stat_names.size());
    pm.values.col_names = pm.stat_names;
    std::size_t row = 0;
    for (const auto& [user, rows] : by_user) {
        for (std::size_t f = 0; f < n_features; ++f) {
            std::vector<double> vals;
            vals.reserve(rows.size());
            for (std::size_t r : rows) vals.push_back(fm.values.at(r, f));
            SixStats s = six_stats(std::move(vals));
            const std::size_t base = f * kFusionStats.size();
            pm.values.at(row, base + 0) = s.max;
            pm.values.at(row, base + 1) = s.min;
            pm.values.at(row, base + 2) = s.range;
            pm.values.at(row, base + 3) = s.stddev;
            pm.values.at(row, base + 4) = s.mean;
            pm.values.at(row, base + 5) = s.median;
        }
        ++row;
    }

    auto std_result = numeric::standardize(pm.values);
    pm.constant_cols = std_result.constant_cols;
    pm.standardized_values = standardize_profiles ? std::move(std_result.values) : pm.values;
    return pm;
}

UserProfileVector user_profile(const ProfileMatrix& pm, std::size_t row) {
    if (row >= pm.n_users()) {
        throw Error(ErrorKind::Shape, "user_profile: row out of range");
    }
    UserProfileVector up;
    up.user_id = pm.user_ids[row];
    up.module = pm.module;
    up.stat_names = pm.stat_names;
    auto r = pm.values.row(row);
    up.values.assign(r.begin(), r.end());
    return up;
}

} // namespace profilecast
