#include <benchmark/benchmark.h>

#include <cstdio>
#include <filesystem>
#include <string>

#include "profilecast/clustering.hpp"
#include "profilecast/config.hpp"
#include "profilecast/features.hpp"
#include "profilecast/fusion.hpp"
#include "profilecast/numeric.hpp"
#include "profilecast/report.hpp"
#include "profilecast/rng.hpp"
#include "profilecast/synth.hpp"
#include "profilecast/validity.hpp"

namespace {

using namespace profilecast;

Matrix random_symmetric(std::size_t n, std::uint64_t seed) {
    SplitMix64 rng(seed);
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double v = rng.next_range(-1.0, 1.0);
            m.at(i, j) = v;
            m.at(j, i) = v;
        }
    }
    return m;
}

ProfileMatrix reference_profiles() {
    Dataset ds = drop_duplicate_features(synth::generate());
    return fuse_user_records(select_original(ds));
}

void bm_eigh_66(benchmark::State& state) {
    Matrix m = random_symmetric(66, 9001);
    for (auto _ : state) {
        benchmark::DoNotOptimize(numeric::eigh_symmetric(m));
    }
}
BENCHMARK(bm_eigh_66);

void bm_kmeans_reference(benchmark::State& state) {
    ProfileMatrix pm = reference_profiles();
    for (auto _ : state) {
        benchmark::DoNotOptimize(kmeans_fit(pm, 4, 42));
    }
}
BENCHMARK(bm_kmeans_reference);

void bm_validity_indices(benchmark::State& state) {
    ProfileMatrix pm = reference_profiles();
    KMeansModel model = kmeans_fit(pm, 4, 42);
    for (auto _ : state) {
        benchmark::DoNotOptimize(score_partition(pm, model.labels));
    }
}
BENCHMARK(bm_validity_indices);

void bm_full_pipeline(benchmark::State& state) {
    std::filesystem::path csv =
        std::filesystem::temp_directory_path() / "profilecast_bench_reference.csv";
    {
        std::string text = synth::generate_csv();
        std::FILE* f = std::fopen(csv.string().c_str(), "wb");
        std::fwrite(text.data(), 1, text.size(), f);
        std::fclose(f);
    }
    PipelineConfig cfg;
    cfg.input_path = csv.string();
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_pipeline(cfg));
    }
    std::filesystem::remove(csv);
}
BENCHMARK(bm_full_pipeline);

} // namespace

BENCHMARK_MAIN();
