#include "profilecast/activity.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

#include "profilecast/csv.hpp"
#include "profilecast/errors.hpp"

namespace profilecast {

const std::vector<std::string> kFullSchema = {
    "Id",
    "ActivityDate",
    "TotalSteps",
    "TotalDistance",
    "TrackerDistance",
    "LoggedActivitiesDistance",
    "VeryActiveDistance",
    "ModeratelyActiveDistance",
    "LightActiveDistance",
    "SedentaryActiveDistance",
    "VeryActiveMinutes",
    "FairlyActiveMinutes",
    "LightlyActiveMinutes",
    "SedentaryMinutes",
    "Calories",
};

namespace {

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::string to_lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

// Case-insensitive, trimmed, and alias-folding: "LoggedActivityDistance"
// and "LoggedActivitiesDistance" both appear in the wild and are the same
// column.
std::string canonical_name(const std::string& raw) {
    std::string name = to_lower(trim(raw));
    if (name == "loggedactivitydistance") name = "loggedactivitiesdistance";
    return name;
}

bool parse_int64(const std::string& text, std::int64_t& out) {
    std::string t = trim(text);
    if (t.empty()) return false;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
    return ec == std::errc() && ptr == t.data() + t.size();
}

bool parse_number(const std::string& text, double& out) {
    std::string t = trim(text);
    if (t.empty()) return false;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
    return ec == std::errc() && ptr == t.data() + t.size() && std::isfinite(out);
}

int days_in_month(int year, int month) {
    static const int kDays[12] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (month < 1 || month > 12) return 0;
    bool leap = (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
    if (month == 2 && leap) return 29;
    return kDays[month - 1];
}

bool valid_date(int y, int m, int d) {
    return y >= 1 && m >= 1 && m <= 12 && d >= 1 && d <= days_in_month(y, m);
}

const std::set<std::string> kMinuteColumns = {
    "veryactiveminutes", "fairlyactiveminutes", "lightlyactiveminutes", "sedentaryminutes"};

} // namespace

std::string Date::to_string() const {
    std::ostringstream out;
    out << month << '/' << day << '/' << year;
    return out.str();
}

std::optional<Date> Date::parse(const std::string& text) {
    std::string t = trim(text);
    auto split = [](const std::string& s, char sep) {
        std::vector<std::string> parts;
        std::string cur;
        for (char c : s) {
            if (c == sep) {
                parts.push_back(cur);
                cur.clear();
            } else {
                cur.push_back(c);
            }
        }
        parts.push_back(cur);
        return parts;
    };

    auto to_int = [](const std::string& s, int& out) {
        if (s.empty()) return false;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
        return ec == std::errc() && ptr == s.data() + s.size();
    };

    if (t.find('/') != std::string::npos) {
        auto parts = split(t, '/');
        int m, d, y;
        if (parts.size() == 3 && to_int(parts[0], m) && to_int(parts[1], d) &&
            to_int(parts[2], y) && valid_date(y, m, d)) {
            return Date{y, m, d};
        }
        return std::nullopt;
    }
    if (t.find('-') != std::string::npos) {
        auto parts = split(t, '-');
        int y, m, d;
        if (parts.size() == 3 && to_int(parts[0], y) && to_int(parts[1], m) &&
            to_int(parts[2], d) && valid_date(y, m, d)) {
            return Date{y, m, d};
        }
        return std::nullopt;
    }
    return std::nullopt;
}

std::size_t Dataset::user_count() const {
    std::set<std::int64_t> ids;
    for (const auto& r : records) ids.insert(r.user_id);
    return ids.size();
}

std::vector<std::int64_t> Dataset::sorted_user_ids() const {
    std::set<std::int64_t> ids;
    for (const auto& r : records) ids.insert(r.user_id);
    return {ids.begin(), ids.end()};
}

std::optional<std::size_t> Dataset::feature_index(const std::string& name) const {
    std::string canon = canonical_name(name);
    for (std::size_t i = 0; i < feature_names.size(); ++i) {
        if (canonical_name(feature_names[i]) == canon) return i;
    }
    return std::nullopt;
}

Matrix Dataset::feature_matrix() const {
    Matrix m(records.size(), feature_names.size());
    m.col_names = feature_names;
    for (std::size_t r = 0; r < records.size(); ++r) {
        for (std::size_t c = 0; c < feature_names.size(); ++c) {
            m.at(r, c) = records[r].features[c];
        }
    }
    return m;
}

Dataset parse_csv_text(const std::string& text,
                       const std::vector<std::string>& schema,
                       const ParseOptions& options) {
    csv::Table table = csv::parse(text);

    // Resolve schema columns against the header, order-insensitive.
    std::unordered_map<std::string, std::size_t> header_pos;
    for (std::size_t i = 0; i < table.header.size(); ++i) {
        header_pos.emplace(canonical_name(table.header[i]), i);
    }

    std::optional<std::size_t> id_col;
    std::optional<std::size_t> date_col;
    std::vector<std::string> feature_names;
    std::vector<std::size_t> feature_pos;
    std::set<std::size_t> used;
    for (const auto& col : schema) {
        std::string canon = canonical_name(col);
        auto it = header_pos.find(canon);
        if (it == header_pos.end()) {
            throw Error(ErrorKind::Schema, "missing required column: " + trim(col));
        }
        used.insert(it->second);
        if (canon == "id") {
            id_col = it->second;
        } else if (canon == "activitydate") {
            date_col = it->second;
        } else {
            feature_names.push_back(trim(col));
            feature_pos.push_back(it->second);
        }
    }
    if (!id_col) throw Error(ErrorKind::Schema, "missing required column: Id");
    if (!date_col) throw Error(ErrorKind::Schema, "missing required column: ActivityDate");

    Dataset ds;
    ds.feature_names = feature_names;
    for (std::size_t i = 0; i < table.header.size(); ++i) {
        if (!used.count(i)) {
            ds.warnings.push_back("ignored column not in schema: " + trim(table.header[i]));
        }
    }

    // Minute-field positions inside the feature list, for the range and
    // daily-budget checks.
    std::vector<std::size_t> minute_features;
    for (std::size_t i = 0; i < feature_names.size(); ++i) {
        if (kMinuteColumns.count(canonical_name(feature_names[i]))) {
            minute_features.push_back(i);
        }
    }

    std::vector<std::string> bad_rows;
    std::map<std::pair<std::int64_t, Date>, std::size_t> seen;

    for (std::size_t row = 0; row < table.rows.size(); ++row) {
        const auto& cells = table.rows[row];
        const std::size_t line = row + 2; // 1-based, after the header
        std::string defect;

        if (cells.size() != table.header.size()) {
            std::ostringstream msg;
            msg << "row " << line << ": expected " << table.header.size()
                << " fields, got " << cells.size();
            defect = msg.str();
        }

        ActivityRecord rec;
        if (defect.empty()) {
            if (!parse_int64(cells[*id_col], rec.user_id)) {
                defect = "row " + std::to_string(line) + ", column Id: non-numeric value \"" +
                         cells[*id_col] + "\"";
            }
        }
        if (defect.empty()) {
            auto date = Date::parse(cells[*date_col]);
            if (!date) {
                defect = "row " + std::to_string(line) +
                         ", column ActivityDate: unparseable date \"" + cells[*date_col] + "\"";
            } else {
                rec.activity_date = *date;
            }
        }
        if (defect.empty()) {
            rec.features.resize(feature_names.size());
            for (std::size_t f = 0; f < feature_names.size(); ++f) {
                double value;
                if (!parse_number(cells[feature_pos[f]], value)) {
                    defect = "row " + std::to_string(line) + ", column " + feature_names[f] +
                             ": non-numeric value \"" + cells[feature_pos[f]] + "\"";
                    break;
                }
                if (value < 0.0) {
                    defect = "row " + std::to_string(line) + ", column " + feature_names[f] +
                             ": negative value " + format_double(value);
                    break;
                }
                rec.features[f] = value;
            }
        }
        if (defect.empty() && !minute_features.empty()) {
            double total_minutes = 0.0;
            for (std::size_t f : minute_features) {
                if (rec.features[f] > 1440.0) {
                    defect = "row " + std::to_string(line) + ", column " + feature_names[f] +
                             ": minutes exceed 1440";
                    break;
                }
                total_minutes += rec.features[f];
            }
            if (defect.empty() && minute_features.size() == 4 && total_minutes > 1440.0) {
                defect = "row " + std::to_string(line) +
                         ": minute fields sum to more than one day (" +
                         format_double(total_minutes) + ")";
            }
        }

        if (!defect.empty()) {
            bad_rows.push_back(defect);
            continue;
        }

        auto key = std::make_pair(rec.user_id, rec.activity_date);
        auto [it, inserted] = seen.emplace(key, line);
        if (!inserted) {
            std::ostringstream msg;
            msg << "duplicate record for user " << rec.user_id << " on "
                << rec.activity_date.to_string() << " (rows " << it->second << " and "
                << line << ")";
            throw Error(ErrorKind::DuplicateRecord, msg.str());
        }
        ds.records.push_back(std::move(rec));
    }

    if (!bad_rows.empty()) {
        if (!options.drop_bad_rows) {
            std::ostringstream msg;
            msg << bad_rows.size() << " invalid row(s):";
            for (const auto& b : bad_rows) msg << "\n  " << b;
            throw Error(ErrorKind::Parse, msg.str());
        }
        for (const auto& b : bad_rows) ds.warnings.push_back("dropped " + b);
    }
    return ds;
}

Dataset parse_csv(const std::string& path,
                  const std::vector<std::string>& schema,
                  const ParseOptions& options) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorKind::Io, "cannot open file: " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_csv_text(buf.str(), schema, options);
}

std::string format_double(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, ptr);
}

std::string serialize_dataset(const Dataset& ds) {
    csv::Table table;
    table.header.push_back("Id");
    table.header.push_back("ActivityDate");
    for (const auto& name : ds.feature_names) table.header.push_back(name);
    for (const auto& rec : ds.records) {
        std::vector<std::string> row;
        row.push_back(std::to_string(rec.user_id));
        row.push_back(rec.activity_date.to_string());
        for (double v : rec.features) row.push_back(format_double(v));
        table.rows.push_back(std::move(row));
    }
    return csv::write(table);
}

Dataset drop_duplicate_features(const Dataset& ds) {
    Dataset out = ds;
    // ActivityDate is a feature candidate in the raw export; it survives only
    // as record identity.
    out.dropped_columns.push_back("ActivityDate");

    for (const std::string& target : {std::string("TrackerDistance"),
                                      std::string("LoggedActivitiesDistance")}) {
        auto idx = out.feature_index(target);
        if (!idx) {
            out.warnings.push_back("drop_duplicate_features: column " + target +
                                   " not present, skipped");
            continue;
        }
        out.dropped_columns.push_back(out.feature_names[*idx]);
        out.feature_names.erase(out.feature_names.begin() +
                                static_cast<std::ptrdiff_t>(*idx));
        for (auto& rec : out.records) {
            rec.features.erase(rec.features.begin() + static_cast<std::ptrdiff_t>(*idx));
        }
    }
    return out;
}

DatasetSummary dataset_summary(const Dataset& ds) {
    DatasetSummary s;
    s.record_count = ds.record_count();
    s.user_count = ds.user_count();
    if (ds.records.empty()) return s;

    for (std::size_t f = 0; f < ds.feature_names.size(); ++f) {
        FeatureSummary fs;
        fs.name = ds.feature_names[f];
        fs.min = ds.records.front().features[f];
        fs.max = fs.min;
        double sum = 0.0;
        for (const auto& rec : ds.records) {
            double v = rec.features[f];
            fs.min = std::min(fs.min, v);
            fs.max = std::max(fs.max, v);
            sum += v;
        }
        fs.mean = sum / static_cast<double>(ds.records.size());
        s.features.push_back(fs);
    }
    return s;
}

} // namespace profilecast
