#include "hfb/littlewood_paley.hpp"
#include "hfb/errors.hpp"
#include "hfb/fft.hpp"

#include <cmath>
#include <string>

namespace hfb {

namespace {

double smooth_step(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }

}  // namespace

double lp_bump(double r) {
    if (r <= 1.0) return 1.0;
    if (r >= 2.0) return 0.0;
    double a = smooth_step(2.0 - r), b = smooth_step(r - 1.0);
    return a / (a + b);
}

Band Band::ball(double radius, Axes a, CutoffPolicy p) { return Band{BandKind::ball, radius, a, p}; }
Band Band::high(double radius, Axes a, CutoffPolicy p) { return Band{BandKind::high, radius, a, p}; }
Band Band::dyadic_ball(int k, Axes a) { return ball(std::ldexp(1.0, k), a); }
Band Band::annulus(int k, Axes a) {
    if (k < 1) throw validation_error("annulus index must be >= 1");
    return Band{BandKind::annulus, std::ldexp(1.0, k), a, CutoffPolicy::strict};
}

double lattice_reach(const GridSpec& g, Axes a) {
    return (a == Axes::x_minus_y || a == Axes::x_plus_y) ? 2.0 * g.nyquist() : g.nyquist();
}

FourierMultiplier band_multiplier(const GridSpec& g, const Band& b) {
    if (b.axes == Axes::both) throw validation_error("band needs a single axis block");
    if (!(b.scale > 0.0)) throw validation_error("band scale must be positive");
    double cutoff = b.kind == BandKind::annulus ? 0.5 * b.scale : b.scale;
    if (b.policy == CutoffPolicy::strict && cutoff > lattice_reach(g, b.axes))
        throw validation_error("band cutoff " + std::to_string(cutoff) + " above Nyquist " +
                               std::to_string(lattice_reach(g, b.axes)));
    const double s = b.scale;
    switch (b.kind) {
        case BandKind::ball:
            return on_axes(b.axes, [s](const Vec3& z) { return cplx(lp_bump(norm3(z) / s), 0.0); });
        case BandKind::high:
            return on_axes(b.axes,
                           [s](const Vec3& z) { return cplx(1.0 - lp_bump(norm3(z) / s), 0.0); });
        case BandKind::annulus:
            return on_axes(b.axes, [s](const Vec3& z) {
                double r = norm3(z);
                return cplx(lp_bump(r / s) - lp_bump(2.0 * r / s), 0.0);
            });
    }
    throw validation_error("unknown band kind");
}

Field lp_project(const Field& f, const Band& b) {
    return apply_multiplier(f, band_multiplier(f.grid, b));
}

PairKernel lp_project(const PairKernel& k, const Band& b) {
    return apply_multiplier(k, band_multiplier(k.grid, b));
}

double projector_l1_norm(const GridSpec& g, const Band& b) {
    Band one = b;
    one.axes = Axes::x;
    one.policy = CutoffPolicy::saturate;
    VectorXcd t = symbol_table(g, band_multiplier(g, one));
    VectorXcd kern = ifft(t, g) / g.cell();
    return g.cell() * kern.cwiseAbs().sum();
}

double bernstein_ratio(const Field& f, int k, double p, double q) {
    auto norm = [&](double r) {
        if (std::isinf(r)) return f.values.cwiseAbs().maxCoeff();
        return std::pow(f.grid.cell() * f.values.cwiseAbs().array().pow(r).sum(), 1.0 / r);
    };
    const double inv_q = std::isinf(q) ? 0.0 : 1.0 / q;
    const double scale = std::pow(2.0, k * f.grid.dim * (1.0 / p - inv_q));
    return norm(q) / (scale * norm(p));
}

}  // namespace hfb
