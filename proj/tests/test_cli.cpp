#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include "profilecast/report.hpp"
#include "support.hpp"

using namespace profilecast;
using testsupport::contains;

namespace {

const std::string kHeader =
    "Id,ActivityDate,TotalSteps,TotalDistance,TrackerDistance,"
    "LoggedActivitiesDistance,VeryActiveDistance,ModeratelyActiveDistance,"
    "LightActiveDistance,SedentaryActiveDistance,VeryActiveMinutes,"
    "FairlyActiveMinutes,LightlyActiveMinutes,SedentaryMinutes,Calories";

struct CliResult {
    int code = -1;
    std::string out;
};

// Runs the binary through the shell with PROFILECAST_SEED scrubbed unless
// the caller sets it; captures stdout, discards stderr by default.
CliResult run_cli(const std::string& args, const std::string& env = "",
                  const std::string& redirect = "2>/dev/null") {
    std::string cmd = "env -u PROFILECAST_SEED " + env + (env.empty() ? "" : " ") + "'" +
                      std::string(PROFILECAST_CLI) + "' " + args + " " + redirect;
    std::FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) throw std::runtime_error("popen failed: " + cmd);
    CliResult r;
    char buf[4096];
    std::size_t n = 0;
    while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) {
        r.out.append(buf, n);
    }
    int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string shquote(const std::string& path) { return "'" + path + "'"; }

std::string run_args() {
    return "run --input " + shquote(testsupport::reference_csv_path());
}

struct ScratchDir {
    std::filesystem::path path;

    explicit ScratchDir(const std::string& name)
        : path(std::filesystem::temp_directory_path() / name) {
        std::filesystem::remove_all(path);
        std::filesystem::create_directories(path);
    }
    ~ScratchDir() { std::filesystem::remove_all(path); }
};

void write_file(const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
}

std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

} // namespace

TEST_CASE("the default invocation emits a full json report") {
    CliResult r = run_cli(run_args());
    REQUIRE(r.code == 0);
    RunReport report = parse_report_json(r.out);
    CHECK(report.dataset.summary.record_count == 940);
    CHECK(report.dataset.summary.user_count == 33);
    CHECK(report.config.seed == 42);
    CHECK(report.per_module.size() == 3);
    REQUIRE(report.robust.has_value());
    CHECK(report.robust->member_lists.size() >= 4);
}

TEST_CASE("identical invocations produce byte-identical output") {
    CliResult a = run_cli(run_args());
    CliResult b = run_cli(run_args());
    REQUIRE(a.code == 0);
    REQUIRE(b.code == 0);
    CHECK(a.out == b.out);
    CHECK(!a.out.empty());
}

TEST_CASE("the seed comes from the environment unless a flag overrides it") {
    CliResult env_only = run_cli(run_args(), "PROFILECAST_SEED=7");
    REQUIRE(env_only.code == 0);
    CHECK(parse_report_json(env_only.out).config.seed == 7);

    CliResult flag_wins = run_cli(run_args() + " --seed 11", "PROFILECAST_SEED=7");
    REQUIRE(flag_wins.code == 0);
    CHECK(parse_report_json(flag_wins.out).config.seed == 11);

    CliResult bad_env = run_cli(run_args(), "PROFILECAST_SEED=abc");
    CHECK(bad_env.code == 3);
}

TEST_CASE("input problems exit with code 2") {
    CliResult missing = run_cli("run --input /nonexistent/activity.csv");
    CHECK(missing.code == 2);

    CliResult message =
        run_cli("run --input /nonexistent/activity.csv", "", "2>&1 1>/dev/null");
    CHECK(contains(message.out, "error (io)"));

    ScratchDir dir("profilecast_cli_bad_input");
    write_file(dir.path / "short.csv", "Id,TotalSteps\n1,100\n");
    CliResult schema = run_cli("run --input " + shquote((dir.path / "short.csv").string()));
    CHECK(schema.code == 2);
}

TEST_CASE("config problems exit with code 3") {
    ScratchDir dir("profilecast_cli_bad_config");
    write_file(dir.path / "bad.json", R"({"clusters": 4})");
    CliResult bad_key = run_cli(run_args() + " --config " +
                                shquote((dir.path / "bad.json").string()));
    CHECK(bad_key.code == 3);

    CliResult bad_k = run_cli(run_args() + " --k 0");
    CHECK(bad_k.code == 3);

    CliResult exclusive = run_cli(run_args() + " --k 3 --auto-k");
    CHECK(exclusive.code == 3);

    CliResult no_subcommand = run_cli("");
    CHECK(no_subcommand.code == 3);
}

TEST_CASE("degenerate numeric inputs exit with code 4") {
    ScratchDir dir("profilecast_cli_degenerate");
    std::string row = "1,4/12/2016,5000,3.5,3.5,0,0.5,0.6,2.4,0,20,15,200,1000,1900";
    write_file(dir.path / "one.csv", kHeader + "\n" + row + "\n");
    CliResult r = run_cli("run --k 1 --input " + shquote((dir.path / "one.csv").string()));
    CHECK(r.code == 4);
}

TEST_CASE("config files overlay before flags override them") {
    ScratchDir dir("profilecast_cli_config");
    write_file(dir.path / "run.toml", "seed = 5\nk = 3\n");
    CliResult r = run_cli(run_args() + " --config " +
                          shquote((dir.path / "run.toml").string()) + " --k 6");
    REQUIRE(r.code == 0);
    RunReport report = parse_report_json(r.out);
    CHECK(report.config.seed == 5);
    CHECK(report.config.k == 6);
    CHECK(report.per_module[0].chosen_k == 6);
}

TEST_CASE("alternate formats render markdown and csv") {
    CliResult md = run_cli(run_args() + " --format markdown");
    REQUIRE(md.code == 0);
    CHECK(md.out.rfind("# Activity profiling report", 0) == 0);

    CliResult csv = run_cli(run_args() + " --format csv");
    REQUIRE(csv.code == 0);
    CHECK(csv.out.rfind("metric,algorithm,module,value,error_kind,error", 0) == 0);
}

TEST_CASE("reports go to the output path instead of stdout when asked") {
    ScratchDir dir("profilecast_cli_output");
    std::string out_path = (dir.path / "report.json").string();
    CliResult r = run_cli(run_args() + " --output " + shquote(out_path));
    REQUIRE(r.code == 0);
    CHECK(r.out.empty());
    RunReport report = parse_report_json(read_file(out_path));
    CHECK(report.dataset.summary.record_count == 940);
}

TEST_CASE("dump flags write the intermediate artifacts") {
    ScratchDir dir("profilecast_cli_dumps");
    std::string features = (dir.path / "features").string();
    std::string profiles = (dir.path / "profiles").string();
    CliResult r = run_cli(run_args() + " --dump-features " + shquote(features) +
                          " --dump-profiles " + shquote(profiles));
    REQUIRE(r.code == 0);
    CHECK(std::filesystem::exists(dir.path / "features" / "features_original.csv"));
    CHECK(std::filesystem::exists(dir.path / "features" / "features_pca.csv"));
    CHECK(std::filesystem::exists(dir.path / "profiles" / "profiles_correlation.csv"));
    CHECK(std::filesystem::exists(dir.path / "profiles" / "robust_profile.json"));
}

TEST_CASE("a single-module run reports a null robust partition") {
    CliResult r = run_cli(run_args() + " --modules original");
    REQUIRE(r.code == 0);
    RunReport report = parse_report_json(r.out);
    CHECK(!report.robust.has_value());
    bool noticed = false;
    for (const std::string& n : report.notices) {
        if (contains(n, "robust clustering skipped")) noticed = true;
    }
    CHECK(noticed);
}

TEST_CASE("the synth subcommand regenerates the committed reference bytes") {
    ScratchDir dir("profilecast_cli_synth");
    std::string out_path = (dir.path / "ref.csv").string();
    CliResult r = run_cli("synth --output " + shquote(out_path));
    REQUIRE(r.code == 0);
    CHECK(read_file(out_path) == read_file(PROFILECAST_DATA_CSV));
}

TEST_CASE("the version flag prints and exits cleanly") {
    CliResult r = run_cli("--version");
    CHECK(r.code == 0);
    CHECK(contains(r.out, "0.1.0"));
}
