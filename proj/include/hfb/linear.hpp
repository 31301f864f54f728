#pragma once

#include "hfb/norms.hpp"
#include "hfb/potential.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace hfb {

// (1/i) d_t L - (Delta_x + Delta_y) L = W L + G + W H,  W(x, y) = V_N(x - y) / N
// G and H are sampled at every step: frame n at t = n dt.
struct LinearProblem {
    GridSpec grid;
    PotentialSpec pot;
    PairKernel lambda0;
    KernelSeries g;
    KernelSeries h;
    double t_final = 0.0;
    double dt = 0.0;
};

struct ManufacturedData {
    PairKernel lambda0;
    KernelSeries g;
    KernelSeries h;
};

// random band-limited symmetric kernels, |xi|, |eta| <= band, smooth time envelopes on [0, t_final]
ManufacturedData manufacture_data(std::uint64_t seed, const GridSpec& g, double band, double amplitude,
                                  double t_final, double dt);

KernelSeries zero_series(const GridSpec& g, double dt, std::size_t frames);

// W as a pointwise weight on pair kernels
MatrixXd pair_weight(const PotentialSpec& pot);

// e^{i t (Delta_x + Delta_y)} applied to a kernel
MatrixXcd free_pair_propagate(const MatrixXcd& k, const GridSpec& g, double t);

// Strang: half kinetic step, exact phase e^{iW dt} with integrating-factor Simpson forcing, half kinetic step.
// Returns every step (sample spacing dt).
KernelSeries solve_linear(const LinearProblem& prob);

struct InequalityRecord {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;  // NaN when degenerate
    double n = 0.0;
    bool degenerate = false;
    std::vector<std::pair<std::string, double>> lhs_terms;
    std::vector<std::pair<std::string, double>> rhs_terms;
};

const std::vector<std::string>& inequality_names();

InequalityRecord make_record(std::string name, double n, std::vector<std::pair<std::string, double>> lhs,
                             std::vector<std::pair<std::string, double>> rhs);

struct InequalityOptions {
    int admissible_count = 6;
    double low_collapse_factor = 20.0;
};

std::vector<InequalityRecord> evaluate_inequalities(const KernelSeries& sol, const LinearProblem& prob,
                                                    const std::vector<std::string>& which,
                                                    const InequalityOptions& opt = {});

}  // namespace hfb
