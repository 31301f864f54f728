#pragma once

#include "hfb/config.hpp"
#include "hfb/linear.hpp"
#include "hfb/norms.hpp"

#include <functional>
#include <ostream>
#include <string>
#include <vector>

namespace hfb {

struct RunResult {
    double n = 0.0;
    NormReport norms;
    EnergyReport final_energy;
    double max_drift_trace = 0.0;
    double max_drift_energy = 0.0;
    double seconds = 0.0;  // wall time, not written to reports
};

struct ScenarioResult {
    ScenarioConfig config;
    std::vector<RunResult> runs;  // in N_list order
};

struct SweepResult {
    ScenarioResult scenario;
    GrowthSummary summary;
};

struct LinearRun {
    double n = 0.0;
    std::vector<InequalityRecord> records;
    double seconds = 0.0;
};

struct LinearResult {
    ScenarioConfig config;
    std::vector<LinearRun> runs;
};

struct ReportRow {
    std::string scenario_id;
    double n = 0.0;
    double epsilon = 0.0;
    double t_final = 0.0;
    std::string norm_name;
    double value = 0.0;
    double drift_trace = 0.0;
    double drift_energy = 0.0;
};

// runs fn(0..count-1) on up to `jobs` threads; results are placed by index
// and the exception of the lowest failing index is rethrown
void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& fn);

RunResult run_single(const ScenarioConfig& cfg, double n);
ScenarioResult run_scenario(const ScenarioConfig& cfg, int jobs = 1);
SweepResult sweep_n(const ScenarioConfig& cfg, int jobs = 1);

// the linear problem for one N with the configured manufactured data
LinearProblem linear_problem(const ScenarioConfig& cfg, double n);
LinearResult validate_linear(const ScenarioConfig& cfg, int jobs = 1);
// max/min of each record's ratio across N (NaN when any is degenerate)
std::vector<std::pair<std::string, double>> linear_spread(const LinearResult& r);

std::vector<ReportRow> report_rows(const ScenarioResult& r);
std::vector<ReportRow> report_rows(const LinearResult& r);

enum class ReportFormat { csv, json };

void emit_report(const std::vector<ReportRow>& rows, ReportFormat fmt, std::ostream& out);
void emit_report(const std::vector<ReportRow>& rows, ReportFormat fmt, const std::string& path);
void emit_summary(const GrowthSummary& s, const std::string& scenario_id, std::ostream& out);
void emit_linear_summary(const LinearResult& r, std::ostream& out);

}  // namespace hfb
