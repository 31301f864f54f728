#include "hfb/harness.hpp"
#include "hfb/errors.hpp"

#include <json.hpp>

#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <set>
#include <thread>

namespace hfb {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

PotentialSpec potential_for(const ScenarioConfig& cfg, const GridSpec& g, double n) {
    PotentialSpec base = cfg.epsilon > 0.0 ? build_base_potential(g, cfg.epsilon) : zero_potential(g);
    return scale_potential(base, n, cfg.beta);
}

std::string json_real(double v) { return std::isfinite(v) ? format_real(v) : "null"; }

std::string json_string(const std::string& s) { return nlohmann::json(s).dump(); }

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

}  // namespace

void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& fn) {
    const std::size_t workers = std::min<std::size_t>(count, std::max(1, jobs));
    std::vector<std::exception_ptr> errors(count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) {
            try {
                fn(i);
            } catch (...) {
                errors[i] = std::current_exception();
                break;
            }
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (std::size_t i; (i = next.fetch_add(1)) < count;) {
                    try {
                        fn(i);
                    } catch (...) {
                        errors[i] = std::current_exception();
                    }
                }
            });
        for (auto& t : pool) t.join();
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

RunResult run_single(const ScenarioConfig& cfg, double n) {
    const auto t0 = std::chrono::steady_clock::now();
    const GridSpec g = config_grid(cfg);
    const Dynamics dyn = make_dynamics(potential_for(cfg, g, n));
    InitOptions io;
    io.shadows = cfg.shadows;
    InitResult init = init_state(gaussian_field(g, cfg.phi), rank_one_kernel(g, cfg.k0), dyn, io);
    Trajectory tr = evolve(init.state, cfg.t_final, cfg.dt, cfg.sample_every, dyn);
    tr.meta.epsilon = cfg.epsilon;
    tr.meta.beta = cfg.beta;
    NormOptions opt;
    opt.names = config_norms(cfg);
    RunResult r;
    r.n = n;
    r.norms = compute_norms(tr, opt, cfg.scenario_id);
    r.final_energy = tr.energies.back();
    r.max_drift_trace = tr.max_drift_trace;
    r.max_drift_energy = tr.max_drift_energy;
    r.seconds = seconds_since(t0);
    return r;
}

ScenarioResult run_scenario(const ScenarioConfig& cfg, int jobs) {
    validate_config(cfg);
    ScenarioResult out;
    out.config = cfg;
    out.runs.resize(cfg.n_list.size());
    parallel_for(cfg.n_list.size(), jobs, [&](std::size_t i) { out.runs[i] = run_single(cfg, cfg.n_list[i]); });
    return out;
}

SweepResult sweep_n(const ScenarioConfig& cfg, int jobs) {
    std::set<double> distinct(cfg.n_list.begin(), cfg.n_list.end());
    if (distinct.size() < 2) throw validation_error("N_list: need >= 2 values for a sweep");
    SweepResult out;
    out.scenario = run_scenario(cfg, jobs);
    std::vector<std::pair<double, NormReport>> runs;
    for (const auto& r : out.scenario.runs) runs.emplace_back(r.n, r.norms);
    out.summary = uniform_in_N_report(runs);
    return out;
}

LinearProblem linear_problem(const ScenarioConfig& cfg, double n) {
    const GridSpec g = config_grid(cfg);
    const LinearConfig& lc = cfg.linear;
    ManufacturedData d = manufacture_data(cfg.seed, g, lc.band, lc.amplitude, lc.t_final, lc.dt);
    LinearProblem p;
    p.grid = g;
    p.pot = potential_for(cfg, g, n);
    p.lambda0 = std::move(d.lambda0);
    p.g = std::move(d.g);
    p.h = std::move(d.h);
    p.t_final = lc.t_final;
    p.dt = lc.dt;
    return p;
}

LinearResult validate_linear(const ScenarioConfig& cfg, int jobs) {
    validate_config(cfg);
    LinearResult out;
    out.config = cfg;
    out.runs.resize(cfg.n_list.size());
    const auto names = cfg.linear.inequalities.empty() ? inequality_names() : cfg.linear.inequalities;
    parallel_for(cfg.n_list.size(), jobs, [&](std::size_t i) {
        const auto t0 = std::chrono::steady_clock::now();
        LinearProblem p = linear_problem(cfg, cfg.n_list[i]);
        KernelSeries sol = solve_linear(p);
        out.runs[i].n = cfg.n_list[i];
        out.runs[i].records = evaluate_inequalities(sol, p, names);
        out.runs[i].seconds = seconds_since(t0);
    });
    return out;
}

std::vector<std::pair<std::string, double>> linear_spread(const LinearResult& r) {
    std::vector<std::pair<std::string, double>> out;
    if (r.runs.empty()) return out;
    for (std::size_t k = 0; k < r.runs.front().records.size(); ++k) {
        double mx = -std::numeric_limits<double>::infinity(), mn = std::numeric_limits<double>::infinity();
        bool degenerate = false;
        for (const auto& run : r.runs) {
            const auto& rec = run.records[k];
            degenerate = degenerate || rec.degenerate;
            mx = std::max(mx, rec.ratio);
            mn = std::min(mn, rec.ratio);
        }
        double spread = degenerate ? std::numeric_limits<double>::quiet_NaN() : (mx == mn ? 1.0 : mx / mn);
        out.emplace_back(r.runs.front().records[k].name, spread);
    }
    return out;
}

std::vector<ReportRow> report_rows(const ScenarioResult& r) {
    std::vector<ReportRow> rows;
    const auto names = config_norms(r.config);
    for (const auto& run : r.runs)
        for (const auto& name : names) {
            auto it = run.norms.entries.find(name);
            if (it == run.norms.entries.end()) continue;
            rows.push_back({r.config.scenario_id, run.n, r.config.epsilon, r.config.t_final, name, it->second,
                            run.max_drift_trace, run.max_drift_energy});
        }
    return rows;
}

std::vector<ReportRow> report_rows(const LinearResult& r) {
    std::vector<ReportRow> rows;
    const auto& c = r.config;
    for (const auto& run : r.runs)
        for (const auto& rec : run.records) {
            auto add = [&](const std::string& name, double v) {
                rows.push_back({c.scenario_id, run.n, c.epsilon, c.linear.t_final, name, v, 0.0, 0.0});
            };
            add(rec.name + ".lhs", rec.lhs);
            add(rec.name + ".rhs", rec.rhs);
            add(rec.name + ".ratio", rec.ratio);
            for (const auto& t : rec.lhs_terms) add(rec.name + ".lhs." + t.first, t.second);
            for (const auto& t : rec.rhs_terms) add(rec.name + ".rhs." + t.first, t.second);
        }
    return rows;
}

void emit_report(const std::vector<ReportRow>& rows, ReportFormat fmt, std::ostream& out) {
    if (fmt == ReportFormat::csv) {
        out << "scenario_id,N,epsilon,t_final,norm_name,value,drift_trace,drift_energy\n";
        for (const auto& r : rows)
            out << csv_field(r.scenario_id) << ',' << format_real(r.n) << ',' << format_real(r.epsilon) << ','
                << format_real(r.t_final) << ',' << csv_field(r.norm_name) << ',' << format_real(r.value) << ','
                << format_real(r.drift_trace) << ',' << format_real(r.drift_energy) << '\n';
        return;
    }
    out << "[";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        out << (i ? ",\n " : "\n ") << "{\"scenario_id\": " << json_string(r.scenario_id)
            << ", \"N\": " << json_real(r.n) << ", \"epsilon\": " << json_real(r.epsilon)
            << ", \"t_final\": " << json_real(r.t_final) << ", \"norm_name\": " << json_string(r.norm_name)
            << ", \"value\": " << json_real(r.value) << ", \"drift_trace\": " << json_real(r.drift_trace)
            << ", \"drift_energy\": " << json_real(r.drift_energy) << "}";
    }
    out << (rows.empty() ? "]\n" : "\n]\n");
}

void emit_report(const std::vector<ReportRow>& rows, ReportFormat fmt, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    emit_report(rows, fmt, out);
    if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

void emit_summary(const GrowthSummary& s, const std::string& scenario_id, std::ostream& out) {
    out << "{\n  \"scenario_id\": " << json_string(scenario_id) << ",\n  \"N\": [";
    for (std::size_t i = 0; i < s.n_values.size(); ++i) out << (i ? ", " : "") << json_real(s.n_values[i]);
    out << "],\n  \"norms\": [";
    for (std::size_t k = 0; k < s.entries.size(); ++k) {
        const auto& e = s.entries[k];
        out << (k ? ",\n    " : "\n    ") << "{\"name\": " << json_string(e.name) << ", \"values\": [";
        for (std::size_t i = 0; i < e.values.size(); ++i) out << (i ? ", " : "") << json_real(e.values[i]);
        out << "], \"max_over_min\": " << json_real(e.max_over_min)
            << ", \"monotone_growth\": " << (e.monotone_growth ? "true" : "false") << "}";
    }
    out << (s.entries.empty() ? "]\n}\n" : "\n  ]\n}\n");
}

void emit_linear_summary(const LinearResult& r, std::ostream& out) {
    out << "{\n  \"scenario_id\": " << json_string(r.config.scenario_id) << ",\n  \"N\": [";
    for (std::size_t i = 0; i < r.runs.size(); ++i) out << (i ? ", " : "") << json_real(r.runs[i].n);
    out << "],\n  \"inequalities\": [";
    const auto spread = linear_spread(r);
    for (std::size_t k = 0; k < spread.size(); ++k) {
        out << (k ? ",\n    " : "\n    ") << "{\"name\": " << json_string(spread[k].first) << ", \"ratios\": [";
        for (std::size_t i = 0; i < r.runs.size(); ++i) out << (i ? ", " : "") << json_real(r.runs[i].records[k].ratio);
        out << "], \"max_over_min\": " << json_real(spread[k].second) << "}";
    }
    out << (spread.empty() ? "]\n}\n" : "\n  ]\n}\n");
}

}  // namespace hfb
