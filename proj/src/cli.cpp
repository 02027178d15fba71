#include "sdsim/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <future>
#include <ostream>
#include <sstream>

#include "sdsim/simulator.hpp"

namespace sdsim {

namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read config file '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const fs::path& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << contents;
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
}

void prepare_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create output directory '" + dir.string() + "': " + ec.message());
}

std::optional<std::string> env_seed() {
    const char* v = std::getenv("SDSIM_SEED");
    if (v == nullptr) return std::nullopt;
    return std::string(v);
}

std::string fixed(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

std::string summary_line(const MetricsReport& r) {
    return "requests=" + std::to_string(r.total_requests) + " completed=" + std::to_string(r.completed) +
           " local_hits=" + std::to_string(r.local_hits) + " unanswered=" + std::to_string(r.unanswered) +
           " first_bucket=" + fixed(r.first_bucket_fraction(), 4);
}

}  // namespace

ScenarioConfig load_config(const fs::path& path, const std::vector<std::string>& overrides,
                           std::optional<std::string> seed_from_env) {
    ScenarioConfig cfg = parse_config(read_file(path));
    if (seed_from_env) apply_setting(cfg, "seed", *seed_from_env);
    for (const auto& kv : overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw ConfigError(ConfigError::Kind::Syntax, kv, 0, "override '" + kv + "' is not key=value");
        const auto trim = [](std::string s) {
            s.erase(0, s.find_first_not_of(" \t"));
            s.erase(s.find_last_not_of(" \t") + 1);
            return s;
        };
        apply_setting(cfg, trim(kv.substr(0, eq)), kv.substr(eq + 1));
    }
    validate(cfg);
    return cfg;
}

double Comparison::mean_with() const {
    double sum = 0;
    for (const auto& s : per_seed) sum += s.with_broadcast.first_bucket_fraction();
    return per_seed.empty() ? 0.0 : sum / static_cast<double>(per_seed.size());
}

double Comparison::mean_without() const {
    double sum = 0;
    for (const auto& s : per_seed) sum += s.without_broadcast.first_bucket_fraction();
    return per_seed.empty() ? 0.0 : sum / static_cast<double>(per_seed.size());
}

double Comparison::mean_difference() const {
    double sum = 0;
    for (const auto& s : per_seed) sum += s.difference();
    return per_seed.empty() ? 0.0 : sum / static_cast<double>(per_seed.size());
}

double Comparison::non_negative_share() const {
    std::size_t n = 0;
    for (const auto& s : per_seed) n += s.difference() >= 0.0 ? 1 : 0;
    return per_seed.empty() ? 0.0 : static_cast<double>(n) / static_cast<double>(per_seed.size());
}

Comparison compare_scenario(const ScenarioConfig& base, std::size_t seed_count) {
    std::vector<std::future<MetricsReport>> with, without;
    for (std::size_t i = 0; i < seed_count; ++i) {
        ScenarioConfig cfg = base;
        cfg.seed = base.seed + i;
        cfg.broadcast_enabled = true;
        with.push_back(std::async(std::launch::async, [cfg] { return run(cfg); }));
        cfg.broadcast_enabled = false;
        without.push_back(std::async(std::launch::async, [cfg] { return run(cfg); }));
    }
    Comparison cmp;
    for (std::size_t i = 0; i < seed_count; ++i)
        cmp.per_seed.push_back({base.seed + i, with[i].get(), without[i].get()});
    return cmp;
}

std::string compare_csv(const Comparison& cmp) {
    std::string out = "seed,arm,bucket_start_s,bucket_end_s,count\n";
    for (const auto& s : cmp.per_seed) {
        for (const auto& [arm, report] : {std::pair<const char*, const MetricsReport*>{"broadcast", &s.with_broadcast},
                                          {"no_broadcast", &s.without_broadcast}}) {
            for (const auto& b : report->histogram)
                out += std::to_string(s.seed) + "," + arm + "," + fixed(b.start_s, 3) + "," + fixed(b.end_s, 3) +
                       "," + std::to_string(b.count) + "\n";
        }
    }
    return out;
}

std::string compare_summary_csv(const Comparison& cmp) {
    return "seeds,first_bucket_fraction_broadcast,first_bucket_fraction_no_broadcast,mean_paired_difference,"
           "non_negative_share\n" +
           std::to_string(cmp.per_seed.size()) + "," + fixed(cmp.mean_with(), 6) + "," +
           fixed(cmp.mean_without(), 6) + "," + fixed(cmp.mean_difference(), 6) + "," +
           fixed(cmp.non_negative_share(), 6) + "\n";
}

int cmd_run(const RunOptions& opts, std::ostream& out, std::ostream& err) {
    try {
        const ScenarioConfig cfg = load_config(opts.config_path, opts.overrides, env_seed());
        prepare_dir(opts.out_dir);

        std::ostringstream trace;
        const MetricsReport report = run(cfg, opts.trace ? &trace : nullptr);

        write_file(opts.out_dir / "histogram.csv", histogram_csv(report.histogram));
        write_file(opts.out_dir / "summary.csv", summary_csv(report));
        if (opts.trace) write_file(opts.out_dir / "trace.log", trace.str());
        out << summary_line(report) << "\n";
        return 0;
    } catch (const std::exception& e) {
        err << "sdsim run: " << e.what() << "\n";
        return 1;
    }
}

int cmd_compare(const CompareOptions& opts, std::ostream& out, std::ostream& err) {
    try {
        if (opts.seeds < 1) throw std::runtime_error("--seeds must be at least 1");
        const ScenarioConfig cfg = load_config(opts.config_path, opts.overrides, env_seed());
        prepare_dir(opts.out_dir);

        const Comparison cmp = compare_scenario(cfg, opts.seeds);
        write_file(opts.out_dir / "compare.csv", compare_csv(cmp));
        write_file(opts.out_dir / "compare_summary.csv", compare_summary_csv(cmp));
        out << "seeds=" << cmp.per_seed.size() << " broadcast=" << fixed(cmp.mean_with(), 4)
            << " no_broadcast=" << fixed(cmp.mean_without(), 4)
            << " mean_difference=" << fixed(cmp.mean_difference(), 4)
            << " non_negative_share=" << fixed(cmp.non_negative_share(), 2) << "\n";
        return 0;
    } catch (const std::exception& e) {
        err << "sdsim compare: " << e.what() << "\n";
        return 1;
    }
}

int cmd_print_config(std::ostream& out) {
    out << serialize_config(ScenarioConfig{});
    return 0;
}

}  // namespace sdsim
