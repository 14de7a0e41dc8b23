#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "profilecast/matrix.hpp"

namespace profilecast {

struct Date {
    int year = 0;
    int month = 0;
    int day = 0;

    auto operator<=>(const Date&) const = default;

    // Tracker export style: M/D/YYYY without leading zeros.
    std::string to_string() const;

    // Accepts M/D/YYYY (primary) and YYYY-MM-DD (fallback).
    static std::optional<Date> parse(const std::string& text);
};

// One user-day of activity measurements. Feature values are aligned with
// the owning Dataset's feature_names; the date is record identity only and
// never a feature.
struct ActivityRecord {
    std::int64_t user_id = 0;
    Date activity_date;
    std::vector<double> features;

    bool operator==(const ActivityRecord&) const = default;
};

struct Dataset {
    std::vector<ActivityRecord> records;
    std::vector<std::string> feature_names;
    std::vector<std::string> dropped_columns;
    std::vector<std::string> warnings;

    std::size_t record_count() const { return records.size(); }
    std::size_t user_count() const;
    std::vector<std::int64_t> sorted_user_ids() const;

    std::optional<std::size_t> feature_index(const std::string& name) const;

    // records x feature_names, col_names set.
    Matrix feature_matrix() const;

    // Equality is record + feature identity; dropped_columns/warnings are
    // provenance and excluded.
    bool operator==(const Dataset& other) const {
        return records == other.records && feature_names == other.feature_names;
    }
};

// The full Fitbit daily-activity export schema.
extern const std::vector<std::string> kFullSchema;

struct ParseOptions {
    // Drop and log rows with missing/non-numeric cells or out-of-range
    // values instead of failing. Duplicate (user, date) rows always fail.
    bool drop_bad_rows = false;
};

// Column-name matching against `schema` is case-insensitive and
// whitespace-trimmed; LoggedActivityDistance and LoggedActivitiesDistance
// are the same column. Id and ActivityDate are identity columns and must be
// present; every other schema column is a numeric feature.
Dataset parse_csv(const std::string& path,
                  const std::vector<std::string>& schema = kFullSchema,
                  const ParseOptions& options = {});
Dataset parse_csv_text(const std::string& text,
                       const std::vector<std::string>& schema = kFullSchema,
                       const ParseOptions& options = {});

// Inverse of parse_csv_text for any valid Dataset:
// parse_csv_text(serialize_dataset(ds), Id+ActivityDate+ds.feature_names) == ds.
std::string serialize_dataset(const Dataset& ds);

// Removes the duplicate export columns (ActivityDate as a feature candidate,
// TrackerDistance, LoggedActivitiesDistance). Absent columns are skipped
// with a recorded warning. Drops columns, never rows.
Dataset drop_duplicate_features(const Dataset& ds);

struct FeatureSummary {
    std::string name;
    double min = 0.0;
    double max = 0.0;
    double mean = 0.0;

    bool operator==(const FeatureSummary&) const = default;
};

struct DatasetSummary {
    std::size_t record_count = 0;
    std::size_t user_count = 0;
    std::vector<FeatureSummary> features; // empty when there are no records

    bool operator==(const DatasetSummary&) const = default;
};

DatasetSummary dataset_summary(const Dataset& ds);

// Shortest round-trip formatting; parse(format(x)) == x for finite doubles.
std::string format_double(double value);

} // namespace profilecast
