#pragma once

#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "oracles.hpp"
#include "profilecast/activity.hpp"
#include "profilecast/errors.hpp"
#include "profilecast/matrix.hpp"
#include "profilecast/rng.hpp"

// Shared fixtures and converters for the test suites. Algorithmic ground
// truth lives in oracles/, never here.

namespace testsupport {

// Committed reference CSV; PROFILECAST_REFERENCE_CSV points the suites at a
// different export when one is available.
inline std::string reference_csv_path() {
    if (const char* env = std::getenv("PROFILECAST_REFERENCE_CSV")) {
        return env;
    }
    return PROFILECAST_DATA_CSV;
}

// Parsed and cleaned reference dataset, shared across test cases.
inline const profilecast::Dataset& reference_dataset() {
    static const profilecast::Dataset ds =
        profilecast::drop_duplicate_features(profilecast::parse_csv(reference_csv_path()));
    return ds;
}

inline oracle::Points matrix_rows(const profilecast::Matrix& m) {
    oracle::Points rows(m.rows);
    for (std::size_t i = 0; i < m.rows; ++i) {
        rows[i].assign(m.row(i).begin(), m.row(i).end());
    }
    return rows;
}

inline profilecast::Matrix points_matrix(const oracle::Points& pts) {
    return profilecast::Matrix::from_rows(pts);
}

// In-memory dataset; each user's records are dated consecutively from
// 1/1/2020 so (user, date) stays unique.
inline profilecast::Dataset make_dataset(
    std::vector<std::string> feature_names,
    const std::vector<std::pair<std::int64_t, std::vector<double>>>& rows) {
    profilecast::Dataset ds;
    ds.feature_names = std::move(feature_names);
    std::vector<std::pair<std::int64_t, int>> next_day;
    for (const auto& [user, features] : rows) {
        int day = 1;
        for (auto& [seen_user, seen_day] : next_day) {
            if (seen_user == user) {
                day = ++seen_day;
                break;
            }
        }
        if (day == 1) next_day.emplace_back(user, 1);
        ds.records.push_back({user, profilecast::Date{2020, 1, day}, features});
    }
    return ds;
}

inline oracle::Points random_points(profilecast::SplitMix64& rng, std::size_t n,
                                    std::size_t d, double lo = -5.0, double hi = 5.0) {
    oracle::Points pts(n, oracle::Point(d, 0.0));
    for (auto& p : pts) {
        for (double& v : p) v = rng.next_range(lo, hi);
    }
    return pts;
}

inline bool contains(const std::string& text, const std::string& needle) {
    return text.find(needle) != std::string::npos;
}

// Runs fn, which must throw profilecast::Error, and hands the error back for
// kind and message assertions.
template <typename Fn>
inline profilecast::Error capture_error(Fn&& fn) {
    try {
        fn();
    } catch (const profilecast::Error& e) {
        return e;
    }
    throw std::runtime_error("expected profilecast::Error, none thrown");
}

// Every label in 0..k-1 appears at least once.
inline std::vector<int> random_partition_labels(profilecast::SplitMix64& rng,
                                                std::size_t n, std::size_t k) {
    std::vector<int> labels(n);
    for (std::size_t i = 0; i < n; ++i) {
        labels[i] = i < k ? static_cast<int>(i) : static_cast<int>(rng.next_index(k));
    }
    for (std::size_t i = n; i > 1; --i) {
        std::swap(labels[i - 1], labels[rng.next_index(i)]);
    }
    return labels;
}

} // namespace testsupport
