#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "profilecast/errors.hpp"
#include "profilecast/features.hpp"
#include "profilecast/numeric.hpp"
#include "support.hpp"

using namespace profilecast;
using testsupport::capture_error;

namespace {

// The selection rule re-executed on the reference correlation matrix:
// repeatedly take the highest-|r| offending pair and drop the member with
// the greater mean absolute correlation to the other survivors (tie: the
// later column). Mirrors the documented procedure, not the library code.
std::vector<std::string> greedy_elimination(const std::vector<std::vector<double>>& corr,
                                            const std::vector<std::string>& names,
                                            double threshold) {
    const std::size_t n = names.size();
    std::vector<bool> alive(n, true);
    std::vector<std::string> dropped;
    for (;;) {
        double best = -1.0;
        std::size_t bi = 0, bj = 0;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                if (!alive[i] || !alive[j]) continue;
                double a = std::abs(corr[i][j]);
                if (a >= threshold && a > best) {
                    best = a;
                    bi = i;
                    bj = j;
                }
            }
        }
        if (best < 0.0) break;

        auto mean_abs = [&](std::size_t col) {
            double sum = 0.0;
            std::size_t count = 0;
            for (std::size_t k = 0; k < n; ++k) {
                if (!alive[k] || k == col) continue;
                sum += std::abs(corr[col][k]);
                ++count;
            }
            return count ? sum / static_cast<double>(count) : 0.0;
        };
        std::size_t drop = mean_abs(bi) > mean_abs(bj) ? bi : bj;
        dropped.push_back(names[drop]);
        alive[drop] = false;
    }
    return dropped;
}

} // namespace

TEST_CASE("module names round-trip and reject unknowns") {
    for (FeatureModuleId id : kAllModules) {
        CHECK(module_from_name(module_name(id)) == id);
    }
    CHECK(module_from_name("pca") == FeatureModuleId::Pca);
    CHECK(module_from_name("ORIGINAL") == FeatureModuleId::Original);
    auto err = capture_error([] { module_from_name("kernelpca"); });
    CHECK(err.kind() == ErrorKind::Param);
}

TEST_CASE("original selection copies the cleaned dataset verbatim") {
    const Dataset& ds = testsupport::reference_dataset();
    FeatureMatrix fm = select_original(ds);
    CHECK(fm.module == FeatureModuleId::Original);
    CHECK(fm.values.rows == 940);
    CHECK(fm.values.cols == 11);
    CHECK(fm.feature_names() == ds.feature_names);
    REQUIRE(fm.row_keys.size() == ds.records.size());
    for (std::size_t i : {std::size_t{0}, std::size_t{517}, std::size_t{939}}) {
        CHECK(fm.row_keys[i].user_id == ds.records[i].user_id);
        CHECK(std::vector<double>(fm.values.row(i).begin(), fm.values.row(i).end()) ==
              ds.records[i].features);
    }
}

TEST_CASE("original selection of a single-record dataset is that record") {
    Dataset one = testsupport::reference_dataset();
    one.records.resize(1);
    FeatureMatrix fm = select_original(one);
    CHECK(fm.values.rows == 1);
    CHECK(fm.values.cols == 11);
    CHECK(std::vector<double>(fm.values.row(0).begin(), fm.values.row(0).end()) ==
          one.records[0].features);
}

TEST_CASE("pca projects the reference data onto three components") {
    PcaProjection p = project_pca(testsupport::reference_dataset());
    CHECK(p.matrix.module == FeatureModuleId::Pca);
    CHECK(p.matrix.values.rows == 940);
    CHECK(p.matrix.values.cols == 3);
    CHECK(p.matrix.feature_names() == std::vector<std::string>{"PC1", "PC2", "PC3"});
    REQUIRE(p.explained_variance.size() == 3);
    CHECK(p.explained_variance[0] >= p.explained_variance[1]);
    CHECK(p.explained_variance[1] >= p.explained_variance[2]);
    for (double ratio : p.explained_variance_ratio) {
        CHECK(ratio >= 0.0);
        CHECK(ratio <= 1.0);
    }

    // Component columns are pairwise uncorrelated.
    auto r = numeric::pearson_correlation_matrix(p.matrix.values);
    CHECK(std::abs(r.values.at(0, 1)) < 1e-8);
    CHECK(std::abs(r.values.at(0, 2)) < 1e-8);
    CHECK(std::abs(r.values.at(1, 2)) < 1e-8);
}

TEST_CASE("rank-1 data loads entirely on the first component") {
    Dataset line = testsupport::make_dataset(
        {"x", "y", "z"},
        {{1, {1.0, 1.0, 1.0}}, {1, {2.0, 2.0, 2.0}}, {2, {3.0, 3.0, 3.0}},
         {2, {4.0, 4.0, 4.0}}, {3, {5.0, 5.0, 5.0}}});
    PcaProjection p = project_pca(line, 2);
    CHECK(p.explained_variance_ratio[0] >= 1.0 - 1e-8);
}

TEST_CASE("the column-mean point projects to the origin") {
    Dataset ds = testsupport::make_dataset(
        {"a", "b", "c"},
        {{1, {1.0, 2.0, 3.0}}, {2, {4.0, 5.0, 6.0}}, {3, {2.5, 3.5, 4.5}}});
    PcaProjection p = project_pca(ds, 3);
    for (std::size_t c = 0; c < 3; ++c) {
        CHECK(std::abs(p.matrix.values.at(2, c)) < 1e-9);
    }
}

TEST_CASE("full-rank pca accounts for all the variance") {
    PcaProjection p = project_pca(testsupport::reference_dataset(), 11);
    double total = 0.0;
    for (double ratio : p.explained_variance_ratio) total += ratio;
    CHECK(std::abs(total - 1.0) < 1e-9);
}

TEST_CASE("pca parameter and input validation") {
    auto too_many = capture_error([] { project_pca(testsupport::reference_dataset(), 12); });
    CHECK(too_many.kind() == ErrorKind::Param);

    Dataset one = testsupport::reference_dataset();
    one.records.resize(1);
    auto short_input = capture_error([&] { project_pca(one); });
    CHECK(short_input.kind() == ErrorKind::InsufficientData);
}

TEST_CASE("duplicated columns lose exactly one member") {
    Dataset ds = testsupport::make_dataset(
        {"A", "B", "C"},
        {{1, {1.0, 1.0, 4.0}}, {1, {2.0, 2.0, 1.0}}, {2, {3.0, 3.0, 7.0}},
         {2, {5.0, 5.0, 2.0}}});
    CorrelationSelection sel = select_by_correlation(ds, 0.9);
    // A and B tie on mean absolute correlation; the later column goes.
    CHECK(sel.dropped == std::vector<std::string>{"B"});
    CHECK(sel.matrix.feature_names() == std::vector<std::string>{"A", "C"});
    REQUIRE(sel.trigger_pairs.size() == 1);
    CHECK(sel.trigger_pairs[0].dropped == "B");
    CHECK(sel.trigger_pairs[0].kept == "A");
    CHECK(sel.trigger_pairs[0].r == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("threshold one drops nothing without exact duplicates") {
    Dataset ds = testsupport::make_dataset(
        {"A", "B"},
        {{1, {1.0, 1.1}}, {1, {2.0, 1.9}}, {2, {3.0, 3.2}}, {2, {4.0, 4.4}}});
    CorrelationSelection sel = select_by_correlation(ds, 1.0);
    CHECK(sel.dropped.empty());
    CHECK(sel.matrix.feature_names() == std::vector<std::string>{"A", "B"});
}

TEST_CASE("correlation threshold must lie in (0, 1]") {
    const Dataset& ds = testsupport::reference_dataset();
    for (double bad : {0.0, -0.5, 1.5}) {
        auto err = capture_error([&] { select_by_correlation(ds, bad); });
        CHECK(err.kind() == ErrorKind::Param);
    }
}

TEST_CASE("reference elimination equals the rule re-executed on the oracle matrix") {
    const Dataset& ds = testsupport::reference_dataset();
    CorrelationSelection sel = select_by_correlation(ds, 0.9);

    auto corr = oracle::correlation(testsupport::matrix_rows(ds.feature_matrix()));
    CHECK(sel.dropped == greedy_elimination(corr, ds.feature_names, 0.9));

    // Pinned outcome on the committed reference data.
    CHECK(sel.dropped == std::vector<std::string>{"TotalDistance", "VeryActiveDistance"});
    CHECK(sel.matrix.values.cols == 9);
}

TEST_CASE("surviving features clear the threshold pairwise") {
    const Dataset& ds = testsupport::reference_dataset();
    CorrelationSelection sel = select_by_correlation(ds, 0.9);
    auto r = numeric::pearson_correlation_matrix(sel.matrix.values);
    for (std::size_t i = 0; i + 1 < r.values.cols; ++i) {
        for (std::size_t j = i + 1; j < r.values.cols; ++j) {
            CHECK(std::abs(r.values.at(i, j)) < 0.9);
        }
    }

    // Survivors are a subset of the original features, in input order.
    for (const std::string& name : sel.matrix.feature_names()) {
        CHECK(ds.feature_index(name).has_value());
    }
}

TEST_CASE("the three selections are deterministic") {
    const Dataset& ds = testsupport::reference_dataset();
    CHECK(select_original(ds).values == select_original(ds).values);
    CHECK(project_pca(ds).matrix.values == project_pca(ds).matrix.values);
    CHECK(select_by_correlation(ds).matrix.values ==
          select_by_correlation(ds).matrix.values);
}
