#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "profilecast/errors.hpp"
#include "profilecast/features.hpp"
#include "profilecast/fusion.hpp"
#include "profilecast/rng.hpp"
#include "support.hpp"

using namespace profilecast;
using testsupport::capture_error;

namespace {

ProfileMatrix fuse_rows(const std::vector<std::string>& features,
                        const std::vector<std::pair<std::int64_t, std::vector<double>>>& rows,
                        bool standardize = true) {
    return fuse_user_records(select_original(testsupport::make_dataset(features, rows)),
                             standardize);
}

} // namespace

TEST_CASE("reference fusion produces a 33x66 profile matrix") {
    ProfileMatrix pm = fuse_user_records(select_original(testsupport::reference_dataset()));
    CHECK(pm.n_users() == 33);
    CHECK(pm.n_stats() == 66);
    CHECK(pm.values.rows == 33);
    CHECK(pm.values.cols == 66);
    CHECK(pm.standardized_values.rows == 33);
    for (std::size_t i = 1; i < pm.user_ids.size(); ++i) {
        CHECK(pm.user_ids[i - 1] < pm.user_ids[i]);
    }
    CHECK(pm.stat_names[0] == "TotalSteps_max");
    CHECK(pm.stat_names[5] == "TotalSteps_median");

    // One user in the committed data has fewer than five records, which is
    // worth a warning but never an error.
    REQUIRE(pm.warnings.size() == 1);
    CHECK(pm.warnings[0] == "user 1455558070 has only 4 record(s)");
}

TEST_CASE("a single record collapses every statistic onto its value") {
    ProfileMatrix pm = fuse_rows({"f"}, {{1, {7.0}}}, false);
    CHECK(pm.values.at(0, 0) == 7.0); // max
    CHECK(pm.values.at(0, 1) == 7.0); // min
    CHECK(pm.values.at(0, 2) == 0.0); // range
    CHECK(pm.values.at(0, 3) == 0.0); // std
    CHECK(pm.values.at(0, 4) == 7.0); // mean
    CHECK(pm.values.at(0, 5) == 7.0); // median
}

TEST_CASE("two records produce the hand-computed statistics") {
    ProfileMatrix pm = fuse_rows({"f"}, {{1, {1.0}}, {1, {3.0}}}, false);
    CHECK(pm.values.at(0, 0) == 3.0);
    CHECK(pm.values.at(0, 1) == 1.0);
    CHECK(pm.values.at(0, 2) == 2.0);
    CHECK(pm.values.at(0, 3) == 1.0); // population std
    CHECK(pm.values.at(0, 4) == 2.0);
    CHECK(pm.values.at(0, 5) == 2.0); // even count: mean of the central pair
}

TEST_CASE("record order within a user does not matter") {
    std::vector<std::pair<std::int64_t, std::vector<double>>> rows = {
        {1, {5.0, 0.5}}, {1, {8.0, 0.1}}, {2, {2.0, 0.9}},
        {1, {3.0, 0.2}}, {2, {4.0, 0.4}}};
    std::vector<std::pair<std::int64_t, std::vector<double>>> permuted = {
        {2, {4.0, 0.4}}, {1, {3.0, 0.2}}, {1, {8.0, 0.1}},
        {2, {2.0, 0.9}}, {1, {5.0, 0.5}}};
    CHECK(fuse_rows({"a", "b"}, rows).values == fuse_rows({"a", "b"}, permuted).values);
}

TEST_CASE("one record per user leaves no spread anywhere") {
    ProfileMatrix pm = fuse_rows({"a", "b"},
                                 {{1, {1.0, 9.0}}, {2, {4.0, 2.0}}, {3, {6.0, 5.0}}},
                                 false);
    for (std::size_t u = 0; u < pm.n_users(); ++u) {
        for (std::size_t f = 0; f < 2; ++f) {
            CHECK(pm.values.at(u, f * 6 + 2) == 0.0); // range
            CHECK(pm.values.at(u, f * 6 + 3) == 0.0); // std
        }
    }
}

TEST_CASE("fused statistics match the sort-based reference on random instances") {
    SplitMix64 rng(21);
    for (int rep = 0; rep < 100; ++rep) {
        const std::size_t n_features = 1 + rng.next_index(4);
        const std::size_t n_users = 1 + rng.next_index(6);
        std::vector<std::string> features;
        for (std::size_t f = 0; f < n_features; ++f) {
            features.push_back("f" + std::to_string(f));
        }
        std::vector<std::pair<std::int64_t, std::vector<double>>> rows;
        for (std::size_t u = 0; u < n_users; ++u) {
            const std::size_t n_records = 1 + rng.next_index(9);
            for (std::size_t r = 0; r < n_records; ++r) {
                std::vector<double> vals;
                for (std::size_t f = 0; f < n_features; ++f) {
                    vals.push_back(rng.next_range(-100.0, 100.0));
                }
                rows.emplace_back(static_cast<std::int64_t>(u + 1), std::move(vals));
            }
        }

        ProfileMatrix pm = fuse_rows(features, rows, false);
        for (std::size_t u = 0; u < pm.n_users(); ++u) {
            for (std::size_t f = 0; f < n_features; ++f) {
                std::vector<double> vals;
                for (const auto& [user, rec] : rows) {
                    if (user == pm.user_ids[u]) vals.push_back(rec[f]);
                }
                oracle::SixStats s = oracle::six_stats(vals);
                const std::size_t base = f * 6;
                CHECK(std::abs(pm.values.at(u, base + 0) - s.max) < 1e-12);
                CHECK(std::abs(pm.values.at(u, base + 1) - s.min) < 1e-12);
                CHECK(std::abs(pm.values.at(u, base + 2) - s.range) < 1e-12);
                CHECK(std::abs(pm.values.at(u, base + 3) - s.std_dev) < 1e-12);
                CHECK(std::abs(pm.values.at(u, base + 4) - s.mean) < 1e-12);
                CHECK(std::abs(pm.values.at(u, base + 5) - s.median) < 1e-12);
            }
        }
    }
}

TEST_CASE("profile vectors respect the order statistics") {
    ProfileMatrix pm = fuse_user_records(select_original(testsupport::reference_dataset()));
    for (std::size_t u = 0; u < pm.n_users(); ++u) {
        for (std::size_t f = 0; f < 11; ++f) {
            const std::size_t base = f * 6;
            double max = pm.values.at(u, base + 0);
            double min = pm.values.at(u, base + 1);
            double range = pm.values.at(u, base + 2);
            double std_dev = pm.values.at(u, base + 3);
            double mean = pm.values.at(u, base + 4);
            double median = pm.values.at(u, base + 5);
            CHECK(max >= mean);
            CHECK(mean >= min);
            CHECK(max >= median);
            CHECK(median >= min);
            CHECK(std::abs(range - (max - min)) < 1e-12);
            CHECK(std_dev >= 0.0);
        }
    }
}

TEST_CASE("profiles are standardized for clustering unless disabled") {
    ProfileMatrix pm = fuse_user_records(select_original(testsupport::reference_dataset()));
    const std::size_t n = pm.n_users();
    for (std::size_t c = 0; c < pm.n_stats(); ++c) {
        if (pm.constant_cols[c]) continue;
        double mean = 0.0;
        for (std::size_t u = 0; u < n; ++u) mean += pm.standardized_values.at(u, c);
        mean /= static_cast<double>(n);
        CHECK(std::abs(mean) < 1e-12);
    }

    ProfileMatrix raw =
        fuse_user_records(select_original(testsupport::reference_dataset()), false);
    CHECK(raw.standardized_values == raw.values);
}

TEST_CASE("users with few records are flagged") {
    ProfileMatrix pm = fuse_rows({"f"}, {{1, {1.0}}, {2, {1.0}}, {2, {2.0}}});
    REQUIRE(pm.warnings.size() == 2);
    CHECK(testsupport::contains(pm.warnings[0], "user 1"));
    CHECK(testsupport::contains(pm.warnings[1], "user 2"));
}

TEST_CASE("empty feature matrix is rejected") {
    FeatureMatrix fm;
    auto err = capture_error([&] { fuse_user_records(fm); });
    CHECK(err.kind() == ErrorKind::EmptyInput);
}

TEST_CASE("per-user profile extraction") {
    ProfileMatrix pm = fuse_rows({"f"}, {{1, {1.0}}, {1, {3.0}}, {9, {5.0}}}, false);
    UserProfileVector up = user_profile(pm, 1);
    CHECK(up.user_id == 9);
    CHECK(up.values == std::vector<double>{5.0, 5.0, 0.0, 0.0, 5.0, 5.0});
    CHECK(up.stat_names == pm.stat_names);

    auto err = capture_error([&] { user_profile(pm, 2); });
    CHECK(err.kind() == ErrorKind::Shape);
}
