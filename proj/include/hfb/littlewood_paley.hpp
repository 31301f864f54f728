#pragma once

#include "hfb/multiplier.hpp"

namespace hfb {

// radial bump: 1 on r <= 1, 0 on r >= 2, smooth in between
double lp_bump(double r);

enum class BandKind { ball, annulus, high };
// strict: cutoff above the lattice range is an error; saturate: allowed
// (the projector then acts as the identity on the resolved modes)
enum class CutoffPolicy { strict, saturate };

struct Band {
    BandKind kind = BandKind::ball;
    double scale = 1.0;  // radius for ball/high, 2^k for annulus k
    Axes axes = Axes::x;
    CutoffPolicy policy = CutoffPolicy::strict;

    static Band ball(double radius, Axes a = Axes::x, CutoffPolicy p = CutoffPolicy::strict);
    static Band high(double radius, Axes a = Axes::x, CutoffPolicy p = CutoffPolicy::strict);
    static Band dyadic_ball(int k, Axes a = Axes::x);
    static Band annulus(int k, Axes a = Axes::x);  // k >= 1
};

// largest |zeta| the axis block reaches on the lattice
double lattice_reach(const GridSpec& g, Axes a);

FourierMultiplier band_multiplier(const GridSpec& g, const Band& b);
Field lp_project(const Field& f, const Band& b);
PairKernel lp_project(const PairKernel& k, const Band& b);

// discrete L1 norm of the convolution kernel of a one-variable band
// (Young constant of the projector)
double projector_l1_norm(const GridSpec& g, const Band& b);

// ||f||_q / (2^{kd(1/p - 1/q)} ||f||_p), f assumed to live on annulus k
double bernstein_ratio(const Field& f, int k, double p, double q);
// sup of bernstein_ratio over the seeded calibration set (d=1, M=256, L=32,
// annuli 1..3, (p,q) in {(2,inf),(1,inf),(1,2),(2,4)}), frozen
inline constexpr double bernstein_constant = 0.4548;

}  // namespace hfb
