#include "hfb/errors.hpp"
#include "hfb/harness.hpp"
#include "hfb/selftest.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

namespace fs = std::filesystem;
using namespace hfb;

namespace {

struct Options {
    std::string config;
    std::string out = ".";
    int jobs = 0;
    std::uint64_t seed = 0;
    bool seed_set = false;
};

ScenarioConfig load(const Options& o) {
    if (o.config.empty()) throw validation_error("--config: required for this subcommand");
    ScenarioConfig c = load_config(o.config);
    if (o.seed_set) c.seed = o.seed;
    return c;
}

int jobs_of(const Options& o) {
    if (o.jobs > 0) return o.jobs;
    return std::max(1u, std::thread::hardware_concurrency());
}

std::string out_path(const Options& o, const std::string& name) {
    fs::create_directories(o.out);
    return (fs::path(o.out) / name).string();
}

void write_text(const std::string& path, const std::function<void(std::ostream&)>& fn) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
    fn(f);
    if (!f) throw std::runtime_error("write to '" + path + "' failed");
}

void log_runs(const ScenarioResult& r) {
    for (const auto& run : r.runs)
        std::fprintf(stderr, "N=%g  %.1fs  drift_trace=%.3e  drift_energy=%.3e\n", run.n, run.seconds,
                     run.max_drift_trace, run.max_drift_energy);
}

int simulate(const Options& o) {
    ScenarioConfig c = load(o);
    ScenarioResult r = run_scenario(c, jobs_of(o));
    log_runs(r);
    auto rows = report_rows(r);
    emit_report(rows, ReportFormat::csv, out_path(o, c.output.csv));
    emit_report(rows, ReportFormat::json, out_path(o, c.output.json));
    return 0;
}

int sweep(const Options& o) {
    ScenarioConfig c = load(o);
    SweepResult r = sweep_n(c, jobs_of(o));
    log_runs(r.scenario);
    auto rows = report_rows(r.scenario);
    emit_report(rows, ReportFormat::csv, out_path(o, c.output.csv));
    emit_report(rows, ReportFormat::json, out_path(o, c.output.json));
    write_text(out_path(o, c.output.summary), [&](std::ostream& f) { emit_summary(r.summary, c.scenario_id, f); });
    for (const auto& e : r.summary.entries) std::printf("%-16s max/min = %.6f\n", e.name.c_str(), e.max_over_min);
    return 0;
}

int linear(const Options& o) {
    ScenarioConfig c = load(o);
    LinearResult r = validate_linear(c, jobs_of(o));
    for (const auto& run : r.runs) std::fprintf(stderr, "N=%g  %.1fs\n", run.n, run.seconds);
    auto rows = report_rows(r);
    emit_report(rows, ReportFormat::csv, out_path(o, c.output.csv));
    emit_report(rows, ReportFormat::json, out_path(o, c.output.json));
    write_text(out_path(o, c.output.summary), [&](std::ostream& f) { emit_linear_summary(r, f); });
    for (const auto& [name, s] : linear_spread(r)) std::printf("%-28s max/min = %.6f\n", name.c_str(), s);
    return 0;
}

int selftest() {
    auto cases = run_selftest(std::cout);
    for (const auto& c : cases)
        if (!c.passed) return 3;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"HFB spectral simulator and verification harness"};
    app.require_subcommand(1);
    Options o;
    auto common = [&](CLI::App* s) {
        s->add_option("--config", o.config, "scenario TOML file");
        s->add_option("--out", o.out, "output directory");
        s->add_option("--jobs", o.jobs, "worker threads (default: hardware concurrency)")->check(CLI::NonNegativeNumber);
        s->add_option("--seed", o.seed, "override the configured seed");
    };
    auto* sim = app.add_subcommand("simulate", "run every N of a scenario and write norms");
    auto* swp = app.add_subcommand("sweep-n", "run an N sweep and write the growth summary");
    auto* lin = app.add_subcommand("validate-linear", "evaluate the linear estimates on manufactured data");
    auto* st = app.add_subcommand("selftest", "run the brute-force oracle suites");
    for (auto* s : {sim, swp, lin, st}) common(s);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }
    for (auto* s : {sim, swp, lin, st})
        if (s->get_option("--seed")->count() > 0) o.seed_set = true;

    try {
        if (*sim) return simulate(o);
        if (*swp) return sweep(o);
        if (*lin) return linear(o);
        return selftest();
    } catch (const validation_error& e) {
        std::fprintf(stderr, "validation error: %s\n", e.what());
        return 2;
    } catch (const numerical_error& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
