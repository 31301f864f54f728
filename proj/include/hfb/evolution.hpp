#pragma once

#include "hfb/kernels.hpp"
#include "hfb/potential.hpp"

#include <array>
#include <vector>

namespace hfb {

struct PhiProfile {
    double width = 1.0;
    Vec3 offset{0.0, 0.0, 0.0};  // relative to the box centre
    Vec3 momentum{0.0, 0.0, 0.0};
};

struct PairProfile {
    double amplitude = 0.1;
    double width = 1.0;
    Vec3 offset{0.0, 0.0, 0.0};
};

// exp(-|x-c|^2 / (2 width^2)) exp(i p.x), c = L/2 + offset, not normalised
Field gaussian_field(const GridSpec& g, const PhiProfile& p);
// amplitude * e (x) e with e a real Gaussian of unit discrete L2 norm
PairKernel rank_one_kernel(const GridSpec& g, const PairProfile& p);

struct HFBState {
    double t = 0.0;
    Field phi;
    PairKernel lambda_p;  // symmetric
    PairKernel gamma_p;   // hermitian
    // condensate parts evolved by their own equations, consistency check only
    bool has_shadow = false;
    PairKernel lambda_c_shadow;
    PairKernel gamma_c_shadow;
};

PairKernel lambda_c(const HFBState& s);  // phi (x) phi
PairKernel gamma_c(const HFBState& s);   // conj(phi) (x) phi
Field density(const HFBState& s);        // Gamma(x,x)

// everything the right-hand side needs that does not change in time
struct Dynamics {
    GridSpec grid;
    double n = 1.0;
    Field v;       // V_N
    MatrixXd vmat; // V_N(x - z)
    MatrixXcd wmat; // h^d V_N(x - z)
    double v_sup = 0.0;
    VectorXd k2;   // |xi|^2 per flat index
};

Dynamics make_dynamics(const PotentialSpec& pot);

struct EnergyReport {
    double trace_gamma = 0.0;
    double energy = 0.0;
    double kinetic = 0.0;
    // 1/2 int V|Lambda|^2, 1/2 int V|Gamma|^2, 1/2 int V rho rho, -int V|phi|^2|phi|^2
    std::array<double, 4> potential_terms{0.0, 0.0, 0.0, 0.0};
    double drift_trace = 0.0;
    double drift_energy = 0.0;
};

// trace(grad_x . grad_y G) as sum_xi |xi|^2 G_hat(xi, xi)
double kinetic_trace(const MatrixXcd& gamma, const GridSpec& g);
EnergyReport energy_report(const HFBState& s, const Dynamics& dyn);
// fills drift fields relative to a reference report
EnergyReport with_drift(EnergyReport r, const EnergyReport& ref);

struct InitOptions {
    bool rescale_pairs = true;  // when phi is zero, rescale k0 to reach trace 1
    bool shadows = false;
};

struct InitResult {
    HFBState state;
    BogoliubovPair pair;
    PairKernel k0;  // after any rescaling
    double energy0 = 0.0;
    double c0 = 1.0;  // max(1, E(0))
};

InitResult init_state(const Field& phi_shape, const PairKernel& k0, const Dynamics& dyn,
                      const InitOptions& opt = {});

HFBState step(const HFBState& s, double dt, const Dynamics& dyn);

struct RunMeta {
    double n = 1.0;
    double epsilon = 0.0;
    double beta = 1.0;
    double t_final = 0.0;
    double dt = 0.0;
    int sample_every = 1;
};

struct Trajectory {
    GridSpec grid;
    double sample_dt = 0.0;
    std::vector<HFBState> states;
    std::vector<EnergyReport> energies;  // one per sample, drifts relative to the first
    std::vector<double> shadow_defect;   // sup |shadow - product| per sample (when tracked)
    RunMeta meta;
    double max_drift_trace = 0.0;
    double max_drift_energy = 0.0;
    double max_symmetry_defect = 0.0;
};

Trajectory evolve(const HFBState& s0, double t_final, double dt, int sample_every, const Dynamics& dyn);

}  // namespace hfb
