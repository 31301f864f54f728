#pragma once

#include "hfb/grid.hpp"

namespace hfb {

struct PotentialSpec {
    double epsilon = 0.05;
    double n = 1.0;
    double beta = 1.0;
    double amplitude = 1.0;  // normalisation applied to the continuum v_hat
    Field base;              // v on the grid
    VectorXcd base_hat;      // lattice coefficients of v (FFT order), continuum convention
    Field scaled;            // V_N
    double monotonicity_defect = 0.0;  // max radial increase of v relative to v(0)
    bool monotone = true;
    double clamp = 0.0;  // magnitude of negative values removed from V_N
};

// profile of w_hat: b(s) = exp(1 - 1/(1 - s^2)) on |s| < 1
double w_bump(double s);
// continuum (2 pi)^{-d} (w_hat * w_hat)(xi) at |xi| = r, before normalisation; cached
double vhat_unit(int dim, double r);

PotentialSpec build_base_potential(const GridSpec& g, double epsilon);
// epsilon = 0: V identically zero (free flow)
PotentialSpec zero_potential(const GridSpec& g);
PotentialSpec scale_potential(const PotentialSpec& base, double n, double beta);

// periodic convolution h^d sum_y V(x-y) rho(y); both real
Field convolve_density(const Field& v, const Field& rho);

double sup_norm(const Field& f);
double lp_norm(const Field& f, double p);

}  // namespace hfb
