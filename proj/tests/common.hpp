#pragma once

#include "hfb/fft.hpp"
#include "hfb/grid.hpp"
#include "hfb/kernels.hpp"
#include "hfb/norms.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

namespace hfbtest {

using namespace hfb;
using namespace std::complex_literals;

inline constexpr double pi = std::numbers::pi;

inline MatrixXcd random_matrix(std::mt19937_64& rng, Index n, Index m) {
    std::normal_distribution<double> nd;
    MatrixXcd a(n, m);
    for (Index j = 0; j < m; ++j)
        for (Index i = 0; i < n; ++i) a(i, j) = cplx(nd(rng), nd(rng));
    return a;
}

inline Field random_field(const GridSpec& g, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    return Field{g, random_matrix(rng, g.size(), 1)};
}

inline PairKernel random_kernel(const GridSpec& g, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    return PairKernel{g, random_matrix(rng, g.size(), g.size())};
}

// symmetric, discrete L2 norm `norm`
inline PairKernel random_symmetric(const GridSpec& g, std::uint64_t seed, double norm) {
    PairKernel k = random_kernel(g, seed);
    k.values = 0.5 * (k.values + k.values.transpose()).eval();
    k.values *= norm / l2_norm(k);
    k.symmetry = Symmetry::symmetric;
    return k;
}

// random coefficients on |xi| <= band (inclusive)
inline Field band_limited_field(const GridSpec& g, std::uint64_t seed, double band) {
    std::mt19937_64 rng(seed);
    VectorXcd c = random_matrix(rng, g.size(), 1);
    for (Index i = 0; i < g.size(); ++i)
        if (std::sqrt(g.freq_sq(i)) > band) c[i] = 0.0;
    return Field{g, ifft(c, g)};
}

// free evolution of exp(-x^2/(2 s0)) under d_t u = i u_xx on the line,
// periodised over `images` copies each side; x measured from the box centre
inline cplx free_gaussian_1d(double x, double width, double t, double length, int images = 4) {
    const double s0 = width * width;
    const cplx s = s0 + 2.0i * t;
    const cplx amp = std::sqrt(s0 / s);
    cplx acc = 0.0;
    for (int m = -images; m <= images; ++m) {
        const double y = x + m * length;
        acc += amp * std::exp(-y * y / (2.0 * s));
    }
    return acc;
}

inline double max_abs(const MatrixXcd& a) { return a.size() ? a.cwiseAbs().maxCoeff() : 0.0; }

inline KernelSeries random_series(const GridSpec& g, std::uint64_t seed, std::size_t frames, double dt) {
    std::mt19937_64 rng(seed);
    KernelSeries s{g, dt, {}};
    for (std::size_t n = 0; n < frames; ++n) s.frames.push_back(random_matrix(rng, g.size(), g.size()));
    return s;
}

inline KernelSeries constant_series(const GridSpec& g, double dt, std::size_t frames, const MatrixXcd& m) {
    KernelSeries s{g, dt, {}};
    s.frames.assign(frames, m);
    return s;
}

// ch o ch - sh o conj(sh) - delta; ch is the top-left block sum (K conj K)^n / (2n)!
inline double symplectic_residual(const BogoliubovPair& p) {
    const GridSpec& g = p.ch.grid;
    PairKernel r = compose(p.ch, p.ch);
    r.values -= compose(p.sh, conj(p.sh)).values;
    r.values -= delta_kernel(g).values;
    return l2_norm(r);
}

// real k: ch is real and the conjugate drops out
inline double symplectic_residual_real(const BogoliubovPair& p) {
    PairKernel r = compose(p.ch, conj(p.ch));
    r.values -= compose(p.sh, conj(p.sh)).values;
    r.values -= delta_kernel(p.ch.grid).values;
    return l2_norm(r);
}

inline double pair_distance(const BogoliubovPair& a, const BogoliubovPair& b) {
    PairKernel ds = a.sh, dc = a.ch;
    ds.values -= b.sh.values;
    dc.values -= b.ch.values;
    return l2_norm(ds) + l2_norm(dc);
}

// plain matrix Frobenius distance, no quadrature weights
inline double pair_distance_frobenius(const BogoliubovPair& a, const BogoliubovPair& b) {
    return (a.sh.values - b.sh.values).norm() + (a.ch.values - b.ch.values).norm();
}

}  // namespace hfbtest
