#include "hfb/selftest.hpp"
#include "hfb/fft.hpp"
#include "hfb/kernels.hpp"
#include "hfb/potential.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

namespace hfb {

namespace {

MatrixXcd random_matrix(std::mt19937_64& rng, Index n, Index m) {
    std::normal_distribution<double> nd;
    MatrixXcd a(n, m);
    for (Index j = 0; j < m; ++j)
        for (Index i = 0; i < n; ++i) a(i, j) = cplx(nd(rng), nd(rng));
    return a;
}

double compose_error(const GridSpec& g, std::mt19937_64& rng) {
    const Index n = g.size();
    PairKernel a{g, random_matrix(rng, n, n)}, b{g, random_matrix(rng, n, n)};
    MatrixXcd ref = MatrixXcd::Zero(n, n);
    for (Index x = 0; x < n; ++x)
        for (Index y = 0; y < n; ++y) {
            cplx acc = 0.0;
            for (Index z = 0; z < n; ++z) acc += a.values(x, z) * b.values(z, y);
            ref(x, y) = g.cell() * acc;
        }
    return (compose(a, b).values - ref).norm() / ref.norm();
}

double convolution_error(const GridSpec& g, std::mt19937_64& rng) {
    const Index n = g.size();
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Field v = zero_field(g), rho = zero_field(g);
    for (Index i = 0; i < n; ++i) {
        v.values[i] = u(rng);
        rho.values[i] = u(rng);
    }
    VectorXd ref = VectorXd::Zero(n);
    for (Index x = 0; x < n; ++x)
        for (Index y = 0; y < n; ++y) ref[x] += g.cell() * v.values[g.difference(x, y)].real() * rho.values[y].real();
    return (convolve_density(v, rho).values.real() - ref).norm() / ref.norm();
}

double fft_error(const GridSpec& g, std::mt19937_64& rng) {
    const Index n = g.size();
    VectorXcd f = random_matrix(rng, n, 1);
    VectorXcd ref = VectorXcd::Zero(n);
    for (Index k = 0; k < n; ++k) {
        auto xi = g.unflatten(k);
        for (Index x = 0; x < n; ++x) {
            auto p = g.unflatten(x);
            double ph = 0.0;
            for (int a = 0; a < g.dim; ++a) ph += double(xi[a]) * double(p[a]) / g.points;
            ref[k] += f[x] * std::exp(cplx(0.0, -2.0 * std::numbers::pi * ph));
        }
    }
    return (fft(f, g) - ref).norm() / ref.norm();
}

double block_exp_error(const GridSpec& g, std::mt19937_64& rng) {
    const Index n = g.size();
    MatrixXcd a = random_matrix(rng, n, n);
    MatrixXcd k = 0.5 * (a + a.transpose());
    k *= 0.8 / (g.cell() * k.norm());
    PairKernel kk{g, k, Symmetry::symmetric};
    BogoliubovPair s = sh_ch_from_k(kk);
    BogoliubovPair o = block_exp_oracle(kk);
    double e = (s.sh.values - o.sh.values).norm() + (s.ch.values - o.ch.values).norm();
    return g.cell() * e;
}

// v_hat(0) for d = 3 against a 1-d radial Simpson rule
double quadrature_error() {
    const int n = 20000;
    const double h = 0.5 / n;
    double acc = 0.0;
    for (int i = 0; i <= n; ++i) {
        double r = i * h;
        double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        double b = w_bump(2.0 * r);
        acc += w * r * r * b * b;
    }
    const double two_pi = 2.0 * std::numbers::pi;
    double ref = 4.0 * std::numbers::pi * acc * h / 3.0 / (two_pi * two_pi * two_pi);
    return std::abs(vhat_unit(3, 0.0) - ref) / ref;
}

// v_hat(r) for d = 1 against Simpson on the overlap interval
double quadrature_error_1d(double r) {
    const int n = 20000;
    const double lo = r - 0.5, hi = 0.5;
    const double h = (hi - lo) / n;
    double acc = 0.0;
    for (int i = 0; i <= n; ++i) {
        double eta = lo + i * h;
        double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        acc += w * w_bump(2.0 * eta) * w_bump(2.0 * (r - eta));
    }
    double ref = acc * h / 3.0 / (2.0 * std::numbers::pi);
    return std::abs(vhat_unit(1, r) - ref) / ref;
}

}  // namespace

std::vector<SelftestCase> run_selftest(std::ostream& log) {
    std::mt19937_64 rng(20240611);
    std::vector<SelftestCase> out;
    auto add = [&](const std::string& name, double err, double tol) {
        SelftestCase c{name, err <= tol, err, tol};
        char buf[160];
        std::snprintf(buf, sizeof buf, "%s %-28s err=%.3e tol=%.1e\n", c.passed ? "PASS" : "FAIL", name.c_str(),
                      err, tol);
        log << buf;
        out.push_back(c);
    };
    add("compose_1d", compose_error(make_grid(1, 16, 6.0), rng), 1e-13);
    add("compose_2d", compose_error(make_grid(2, 8, 6.0), rng), 1e-13);
    add("convolution_1d", convolution_error(make_grid(1, 32, 8.0), rng), 1e-13);
    add("convolution_2d", convolution_error(make_grid(2, 8, 8.0), rng), 1e-13);
    add("fft_1d", fft_error(make_grid(1, 32, 1.0), rng), 1e-13);
    add("fft_3d", fft_error(make_grid(3, 8, 1.0), rng), 1e-13);
    add("block_exponential_1d", block_exp_error(make_grid(1, 16, 4.0), rng), 1e-10);
    add("block_exponential_2d", block_exp_error(make_grid(2, 8, 4.0), rng), 1e-10);
    add("quadrature_vhat_3d", quadrature_error(), 1e-6);
    add("quadrature_vhat_1d", quadrature_error_1d(0.3), 1e-9);
    return out;
}

}  // namespace hfb
