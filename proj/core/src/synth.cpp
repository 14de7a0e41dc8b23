#include "profilecast/synth.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <set>

#include "profilecast/rng.hpp"

namespace profilecast::synth {

namespace {

// The four archetypes sit on the vertices of a regular simplex over three
// axes: distance-family level, minute-family level, and day-to-day
// variability. Equal pairwise separation keeps the inertia curve's knee at
// k = 4.
struct Archetype {
    double t_dist;     // 0 = low distance-family level, 1 = high
    double t_min;      // 0 = low minute-family level, 1 = high
    double noise_mult; // scales every feature's day-to-day noise
};

constexpr Archetype kArchetypes[4] = {
    {0.0, 0.0, 0.60}, // sedentary, consistent
    {1.0, 1.0, 0.60}, // heavy all-round, consistent
    {1.0, 0.0, 1.70}, // distance-heavy, erratic
    {0.0, 1.0, 1.70}, // minutes-heavy, erratic
};

// Mixed-profile users interpolate between two archetypes, one fraction per
// axis. Fractions near 0.5 leave them between clusters, and each carries two
// atypical base-feature ratios that push the fused profile away from all four
// archetypes. stride_mult and vad_mult scale the derived TotalDistance and
// VeryActiveDistance columns, so they only move the user in feature sets that
// keep those columns.
struct Quirk {
    std::size_t feature; // index into kBaseFeatures
    double mult;
};

struct Straddler {
    std::size_t user_index; // position in the sorted user list
    int a;
    int b;
    double tau_dist;
    double tau_min;
    double tau_var;
    Quirk quirks[5];
    double stride_mult;
    double vad_mult;
};

constexpr Straddler kStraddlers[3] = {
    {7, 0, 1, 0.47, 0.47, 0.50,
     {{4, 1.50}, {2, 0.20}, {6, 2.15}, {7, 0.34}, {0, 1.00}},
     1.23, 1.00}, // long stride
    {15, 2, 3, 0.50, 0.486, 0.45,
     {{1, 1.85}, {3, 0.02}, {6, 0.30}, {7, 1.45}, {5, 1.82}},
     1.00, 0.55}, // interval bursts
    {23, 0, 2, 0.53, 0.50, 0.58,
     {{4, 0.62}, {2, 1.95}, {6, 2.60}, {7, 0.38}, {0, 1.00}},
     0.56, 1.00}, // short brisk walks
};

// Base features drawn directly; the remaining export columns are derived.
struct FeatureGen {
    const char* name;
    int family;      // 0 = distance axis, 1 = minute axis
    double low;
    double high;
    double day_noise; // relative sd at noise_mult 1
    double user_dev;  // relative user-to-user offset sd
    int decimals;     // < 0 rounds to integer
};

constexpr FeatureGen kBaseFeatures[] = {
    {"TotalSteps", 0, 3800.0, 12200.0, 0.151, 0.025, -1},
    {"LightActiveDistance", 0, 1.70, 4.70, 0.162, 0.025, 2},
    {"ModeratelyActiveDistance", 0, 0.35, 1.15, 0.282, 0.034, 2},
    {"SedentaryActiveDistance", 0, 0.008, 0.045, 0.542, 0.052, 3},
    {"Calories", 0, 1750.0, 2950.0, 0.087, 0.021, -1},
    {"VeryActiveMinutes", 1, 7.0, 56.0, 0.303, 0.041, -1},
    {"FairlyActiveMinutes", 1, 9.0, 31.0, 0.282, 0.041, -1},
    {"LightlyActiveMinutes", 1, 145.0, 305.0, 0.130, 0.025, -1},
    {"SedentaryMinutes", 1, 1260.0, 840.0, 0.065, 0.016, -1},
};
constexpr std::size_t kBaseCount = std::size(kBaseFeatures);

// Per-user day counts; index is the position in the sorted user list.
// 24 users keep all 31 days, the rest sum the total to 940 records.
constexpr std::size_t kUserCount = 33;
constexpr std::size_t kDayCount = 31;
struct CountOverride {
    std::size_t user_index;
    std::size_t count;
};
constexpr CountOverride kCountOverrides[] = {
    {1, 4},   {3, 15},  {6, 18},  {11, 22}, {14, 24},
    {19, 26}, {22, 28}, {27, 29}, {30, 30},
};

double round_to(double value, int decimals) {
    if (decimals < 0) return std::round(value);
    double scale = std::pow(10.0, decimals);
    return std::round(value * scale) / scale;
}

Date nth_day(std::size_t i) {
    // 4/12/2016 through 5/12/2016.
    if (i < 19) return {2016, 4, static_cast<int>(12 + i)};
    return {2016, 5, static_cast<int>(i - 18)};
}

struct UserPlan {
    std::int64_t id = 0;
    double t_dist = 0.0;
    double t_min = 0.0;
    double noise_mult = 1.0;
    double quirk[kBaseCount] = {1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0};
    double stride_mult = 1.0;
    double vad_mult = 1.0;
};

double lerp(double a, double b, double t) { return a + (b - a) * t; }

} // namespace

Dataset generate(std::uint64_t seed) {
    // Distinct 10-digit ids from a dedicated stream, then sorted so user
    // index is stable.
    SplitMix64 id_rng(seed);
    std::set<std::int64_t> id_set;
    while (id_set.size() < kUserCount) {
        id_set.insert(1000000000 +
                      static_cast<std::int64_t>(id_rng.next() % 8999999999ULL));
    }
    std::vector<std::int64_t> ids(id_set.begin(), id_set.end());

    std::vector<UserPlan> plans(kUserCount);
    std::size_t core_position = 0;
    for (std::size_t i = 0; i < kUserCount; ++i) {
        plans[i].id = ids[i];
        const Straddler* straddler = nullptr;
        for (const Straddler& s : kStraddlers) {
            if (s.user_index == i) straddler = &s;
        }
        if (straddler) {
            const Archetype& a = kArchetypes[straddler->a];
            const Archetype& b = kArchetypes[straddler->b];
            plans[i].t_dist = lerp(a.t_dist, b.t_dist, straddler->tau_dist);
            plans[i].t_min = lerp(a.t_min, b.t_min, straddler->tau_min);
            plans[i].noise_mult = lerp(a.noise_mult, b.noise_mult, straddler->tau_var);
            for (const Quirk& q : straddler->quirks) plans[i].quirk[q.feature] = q.mult;
            plans[i].stride_mult = straddler->stride_mult;
            plans[i].vad_mult = straddler->vad_mult;
        } else {
            const Archetype& a = kArchetypes[core_position % 4];
            ++core_position;
            plans[i].t_dist = a.t_dist;
            plans[i].t_min = a.t_min;
            plans[i].noise_mult = a.noise_mult;
        }
    }

    std::vector<std::size_t> counts(kUserCount, kDayCount);
    for (const CountOverride& o : kCountOverrides) counts[o.user_index] = o.count;

    Dataset ds;
    ds.feature_names = {
        "TotalSteps",       "TotalDistance",            "TrackerDistance",
        "LoggedActivitiesDistance",                     "VeryActiveDistance",
        "ModeratelyActiveDistance",                     "LightActiveDistance",
        "SedentaryActiveDistance",                      "VeryActiveMinutes",
        "FairlyActiveMinutes",                          "LightlyActiveMinutes",
        "SedentaryMinutes", "Calories"};

    std::size_t row_counter = 0;
    for (std::size_t u = 0; u < kUserCount; ++u) {
        const UserPlan& plan = plans[u];
        SplitMix64 rng(seed * 1000003 + u);

        // User-level offsets, one per base feature.
        double user_offset[kBaseCount];
        for (std::size_t f = 0; f < kBaseCount; ++f) {
            user_offset[f] = 1.0 + kBaseFeatures[f].user_dev * rng.next_gaussian();
        }

        // Which days this user skipped.
        std::vector<std::size_t> days(kDayCount);
        for (std::size_t d = 0; d < kDayCount; ++d) days[d] = d;
        for (std::size_t d = kDayCount - 1; d > 0; --d) {
            std::size_t j = rng.next_index(d + 1);
            std::swap(days[d], days[j]);
        }
        days.resize(counts[u]);
        std::sort(days.begin(), days.end());

        for (std::size_t day : days) {
            double base[kBaseCount];
            for (std::size_t f = 0; f < kBaseCount; ++f) {
                const FeatureGen& g = kBaseFeatures[f];
                double t = g.family == 0 ? plan.t_dist : plan.t_min;
                double mean = lerp(g.low, g.high, t) * plan.quirk[f] * user_offset[f];
                double value =
                    mean * (1.0 + g.day_noise * plan.noise_mult * rng.next_gaussian());
                base[f] = std::max(0.0, round_to(value, g.decimals));
                if (g.family == 1) base[f] = std::min(base[f], 1440.0);
            }

            double total_distance = std::max(
                0.0, round_to(base[0] * 0.00069 * plan.stride_mult *
                                  (1.0 + 0.025 * rng.next_gaussian()),
                              2));
            double tracker = total_distance;
            if (row_counter % 63 == 5) {
                tracker = std::max(0.0, round_to(total_distance - 0.15, 2));
            }
            double very_active_distance = std::max(
                0.0, round_to(base[5] * 0.062 * plan.vad_mult *
                                  (1.0 + 0.05 * rng.next_gaussian()),
                              2));
            double logged = 0.0;
            double logged_draw = rng.next_gaussian();
            if (u % 11 == 3 && day % 9 == 4) {
                logged = std::max(0.0, round_to(2.4 + 0.6 * logged_draw, 2));
            }

            // Respect the device's minute budget after rounding.
            double minute_sum = base[5] + base[6] + base[7] + base[8];
            if (minute_sum > 1440.0) base[8] = std::max(0.0, base[8] - (minute_sum - 1440.0));

            ActivityRecord rec;
            rec.user_id = plan.id;
            rec.activity_date = nth_day(day);
            rec.features = {base[0],  total_distance, tracker, logged,
                            very_active_distance,    base[2], base[1],
                            base[3],  base[5],        base[6], base[7],
                            base[8],  base[4]};
            ds.records.push_back(std::move(rec));
            ++row_counter;
        }
    }
    return ds;
}

std::string generate_csv(std::uint64_t seed) { return serialize_dataset(generate(seed)); }

} // namespace profilecast::synth
