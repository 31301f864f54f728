#pragma once

#include "hfb/evolution.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace hfb {

struct LinearConfig {
    double t_final = 0.5;
    double dt = 2e-3;
    double band = 4.0;
    double amplitude = 1.0;
    std::vector<std::string> inequalities;  // empty: all
};

struct OutputConfig {
    std::string csv = "norms.csv";
    std::string json = "norms.json";
    std::string summary = "summary.json";
};

struct ScenarioConfig {
    std::string scenario_id = "standard";
    int dim = 1;
    int points = 128;
    double length = 16.0;
    std::vector<double> n_list{8.0};
    double beta = 1.0;
    double epsilon = 0.05;
    double t_final = 1.0;
    double dt = 1e-3;
    int sample_every = 10;
    std::vector<std::string> norms;  // empty: full vocabulary
    std::uint64_t seed = 1;
    bool shadows = false;
    PhiProfile phi;
    PairProfile k0;
    OutputConfig output;
    LinearConfig linear;
};

// throws validation_error with a field path prefix, e.g. "N_list[2]: ..."
ScenarioConfig parse_config(const std::string& text);
ScenarioConfig load_config(const std::string& path);
std::string serialize_config(const ScenarioConfig& cfg);
void validate_config(const ScenarioConfig& cfg);

GridSpec config_grid(const ScenarioConfig& cfg);
std::vector<std::string> config_norms(const ScenarioConfig& cfg);

// %.17g; nan / inf spelled as such
std::string format_real(double v);

}  // namespace hfb
