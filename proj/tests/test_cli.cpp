#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "sdsim/cli.hpp"

using namespace sdsim;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / ("sdsim-test-" + name)) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p, std::ios::binary) << text; }

}  // namespace

TEST_CASE("run writes histogram and summary") {
    TempDir dir("run");
    write(dir.path / "s.conf", "num_nodes = 20\nseed = 4\n");
    RunOptions opts;
    opts.config_path = dir.path / "s.conf";
    opts.out_dir = dir.path / "out";
    opts.trace = true;
    std::ostringstream out, err;
    REQUIRE(cmd_run(opts, out, err) == 0);
    CHECK(err.str().empty());
    CHECK(out.str().rfind("requests=", 0) == 0);

    const auto hist = slurp(opts.out_dir / "histogram.csv");
    const auto summary = slurp(opts.out_dir / "summary.csv");
    const auto trace = slurp(opts.out_dir / "trace.log");
    CHECK(hist.rfind("bucket_start_s,bucket_end_s,count\n", 0) == 0);
    CHECK(summary.rfind("total,completed,local_hits,unanswered\n", 0) == 0);
    CHECK_FALSE(trace.empty());

    std::ostringstream out2, err2;
    REQUIRE(cmd_run(opts, out2, err2) == 0);
    CHECK(slurp(opts.out_dir / "histogram.csv") == hist);
    CHECK(slurp(opts.out_dir / "summary.csv") == summary);
    CHECK(slurp(opts.out_dir / "trace.log") == trace);
}

TEST_CASE("missing or invalid config exits 1 with a diagnostic") {
    TempDir dir("bad");
    RunOptions opts;
    opts.config_path = dir.path / "absent.conf";
    opts.out_dir = dir.path / "out";
    std::ostringstream out, err;
    CHECK(cmd_run(opts, out, err) == 1);
    CHECK(err.str().find("absent.conf") != std::string::npos);
    CHECK_FALSE(fs::exists(opts.out_dir / "histogram.csv"));

    write(dir.path / "bad.conf", "store_probability = 1.5\n");
    opts.config_path = dir.path / "bad.conf";
    std::ostringstream err2;
    CHECK(cmd_run(opts, out, err2) == 1);
    CHECK(err2.str().find("store_probability") != std::string::npos);
}

TEST_CASE("seed precedence: file, then environment, then overrides") {
    TempDir dir("seed");
    write(dir.path / "s.conf", "seed = 5\n");
    const auto path = dir.path / "s.conf";
    CHECK(load_config(path, {}, std::nullopt).seed == 5);
    CHECK(load_config(path, {}, std::string("9")).seed == 9);
    CHECK(load_config(path, {"seed=11"}, std::string("9")).seed == 11);
    CHECK_THROWS_AS(load_config(path, {"seed"}, std::nullopt), ConfigError);
    CHECK_THROWS_AS(load_config(path, {}, std::string("nine")), ConfigError);
}

TEST_CASE("compare writes per-seed histograms and a summary") {
    TempDir dir("compare");
    write(dir.path / "s.conf", "num_nodes = 15\nsim_duration_s = 5\n");
    CompareOptions opts;
    opts.config_path = dir.path / "s.conf";
    opts.out_dir = dir.path;
    opts.seeds = 3;
    std::ostringstream out, err;
    REQUIRE(cmd_compare(opts, out, err) == 0);

    const auto csv = slurp(dir.path / "compare.csv");
    CHECK(csv.rfind("seed,arm,bucket_start_s,bucket_end_s,count\n", 0) == 0);
    CHECK(csv.find(",broadcast,") != std::string::npos);
    CHECK(csv.find(",no_broadcast,") != std::string::npos);
    const auto summary = slurp(dir.path / "compare_summary.csv");
    CHECK(summary.rfind("seeds,first_bucket_fraction_broadcast,", 0) == 0);
    CHECK(summary.find("\n3,") != std::string::npos);

    opts.seeds = 0;
    std::ostringstream err2;
    CHECK(cmd_compare(opts, out, err2) == 1);
}

TEST_CASE("print-config output parses back to the defaults") {
    std::ostringstream out;
    CHECK(cmd_print_config(out) == 0);
    CHECK(parse_config(out.str()) == ScenarioConfig{});
}
