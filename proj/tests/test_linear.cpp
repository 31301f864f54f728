#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "common.hpp"
#include "hfb/errors.hpp"
#include "hfb/linear.hpp"

#include <algorithm>
#include <numeric>

using namespace hfbtest;

namespace {

PotentialSpec potential(const GridSpec& g, double eps, double n) {
    return scale_potential(eps > 0.0 ? build_base_potential(g, eps) : zero_potential(g), n, 1.0);
}

LinearProblem make_problem(const GridSpec& g, const PotentialSpec& pot, const ManufacturedData& d, double t_final,
                           double dt) {
    LinearProblem p;
    p.grid = g;
    p.pot = pot;
    p.lambda0 = d.lambda0;
    p.g = d.g;
    p.h = d.h;
    p.t_final = t_final;
    p.dt = dt;
    return p;
}

double series_diff(const KernelSeries& a, const KernelSeries& b) {
    double e = 0.0;
    for (std::size_t n = 0; n < a.frames.size(); ++n) e = std::max(e, max_abs(a.frames[n] - b.frames[n]));
    return e;
}

double series_max(const KernelSeries& a) {
    double e = 0.0;
    for (const auto& f : a.frames) e = std::max(e, max_abs(f));
    return e;
}

// Delta_x + Delta_y applied spectrally
MatrixXcd laplacian_xy(const MatrixXcd& k, const GridSpec& g) {
    MatrixXcd f = fft_xy(k, g);
    for (Index j = 0; j < g.size(); ++j)
        for (Index i = 0; i < g.size(); ++i) f(i, j) *= -(g.freq_sq(i) + g.freq_sq(j));
    return fft_xy(f, g, true);
}

// Lambda*(t) = cos(t) A + sin(2t) B
struct Manufactured {
    MatrixXcd a, b;
    MatrixXcd at(double t) const { return std::cos(t) * a + std::sin(2 * t) * b; }
    MatrixXcd dt(double t) const { return -std::sin(t) * a + 2 * std::cos(2 * t) * b; }
};

// G = (1/i) d_t L* - (Delta_x + Delta_y) L* - W L*
LinearProblem mms_problem(const GridSpec& g, const PotentialSpec& pot, const Manufactured& m, double t_final,
                          double dt) {
    const MatrixXcd w = pair_weight(pot).cast<cplx>();
    const long steps = std::lround(t_final / dt);
    LinearProblem p;
    p.grid = g;
    p.pot = pot;
    p.lambda0 = PairKernel{g, m.at(0.0), Symmetry::symmetric};
    p.g = KernelSeries{g, dt, {}};
    for (long n = 0; n <= steps; ++n) {
        const double t = n * dt;
        const MatrixXcd l = m.at(t);
        p.g.frames.push_back(-1i * m.dt(t) - laplacian_xy(l, g) - w.cwiseProduct(l));
    }
    p.h = zero_series(g, dt, steps + 1);
    p.t_final = t_final;
    p.dt = dt;
    return p;
}

const InequalityRecord& find(const std::vector<InequalityRecord>& r, const std::string& name) {
    auto it = std::find_if(r.begin(), r.end(), [&](const InequalityRecord& x) { return x.name == name; });
    REQUIRE(it != r.end());
    return *it;
}

}  // namespace

TEST_CASE("manufactured data") {
    GridSpec g = make_grid(1, 32, 8.0);
    ManufacturedData a = manufacture_data(7, g, 3.0, 1.0, 0.2, 0.01);
    ManufacturedData b = manufacture_data(7, g, 3.0, 1.0, 0.2, 0.01);
    CHECK(a.lambda0.values == b.lambda0.values);
    REQUIRE(a.g.frames.size() == 21);
    REQUIRE(a.h.frames.size() == 21);
    for (std::size_t n = 0; n < a.g.frames.size(); ++n) {
        CHECK(a.g.frames[n] == b.g.frames[n]);
        CHECK(a.h.frames[n] == b.h.frames[n]);
    }
    CHECK(max_abs(a.lambda0.values - a.lambda0.values.transpose()) == 0.0);
    CHECK(max_abs(a.g.frames[5] - a.g.frames[5].transpose()) == 0.0);

    ManufacturedData c = manufacture_data(8, g, 3.0, 1.0, 0.2, 0.01);
    CHECK(max_abs(c.lambda0.values - a.lambda0.values) > 0.0);

    ManufacturedData z = manufacture_data(7, g, 3.0, 0.0, 0.2, 0.01);
    CHECK(max_abs(z.lambda0.values) == 0.0);
    CHECK(series_max(z.g) == 0.0);
    CHECK(series_max(z.h) == 0.0);

    MatrixXcd spec = fft_xy(a.lambda0.values, g);
    double outside = 0.0;
    for (Index j = 0; j < g.size(); ++j)
        for (Index i = 0; i < g.size(); ++i)
            if (g.freq_sq(i) > 9.0 || g.freq_sq(j) > 9.0) outside = std::max(outside, std::abs(spec(i, j)));
    CHECK(outside < 1e-12 * max_abs(spec));

    const FourierMultiplier bxy = bracket(0.5, Axes::x) * bracket(0.5, Axes::y);
    const double dual = strichartz_norm(apply(a.g, bxy), StrichartzKind::dual_restricted);
    CHECK(std::isfinite(dual));
    CHECK(dual > 0.0);

    CHECK_THROWS_AS(manufacture_data(7, g, 2.0 * g.nyquist(), 1.0, 0.2, 0.01), validation_error);
    CHECK_THROWS_AS(manufacture_data(7, g, 3.0, 1.0, 0.2, 0.03), validation_error);
}

TEST_CASE("free Gaussian pair") {
    GridSpec g = make_grid(1, 64, 16.0);
    const double dt = 0.01;
    const long steps = 100;
    VectorXcd g0(g.size());
    for (Index i = 0; i < g.size(); ++i) g0[i] = free_gaussian_1d(g.position(i)[0] - 0.5 * g.length, 1.0, 0.0, g.length);
    ManufacturedData d{PairKernel{g, g0 * g0.transpose(), Symmetry::symmetric}, zero_series(g, dt, steps + 1),
                       zero_series(g, dt, steps + 1)};
    LinearProblem p = make_problem(g, zero_potential(g), d, steps * dt, dt);
    KernelSeries sol = solve_linear(p);
    REQUIRE(sol.frames.size() == steps + 1);
    double err = 0.0;
    for (long n : {10L, 50L, 100L}) {
        VectorXcd e(g.size());
        for (Index i = 0; i < g.size(); ++i)
            e[i] = free_gaussian_1d(g.position(i)[0] - 0.5 * g.length, 1.0, n * dt, g.length);
        err = std::max(err, max_abs(sol.frames[n] - e * e.transpose()));
    }
    CHECK(err < 1e-8);
    CHECK(max_abs(free_pair_propagate(d.lambda0.values, g, 1.0) - sol.frames[100]) < 1e-12);
}

TEST_CASE("zero problem stays zero") {
    GridSpec g = make_grid(1, 32, 8.0);
    ManufacturedData d = manufacture_data(3, g, 3.0, 0.0, 0.1, 0.01);
    KernelSeries sol = solve_linear(make_problem(g, potential(g, 0.5, 2.0), d, 0.1, 0.01));
    CHECK(series_max(sol) == 0.0);
}

TEST_CASE("solver guards") {
    GridSpec g = make_grid(1, 32, 8.0);
    ManufacturedData d = manufacture_data(3, g, 3.0, 1.0, 0.1, 0.01);
    LinearProblem p = make_problem(g, potential(g, 0.5, 2.0), d, 0.1, 0.01);
    LinearProblem bad = p;
    bad.g.frames.pop_back();
    CHECK_THROWS_AS(solve_linear(bad), validation_error);
    bad = p;
    bad.t_final = 0.105;
    CHECK_THROWS_AS(solve_linear(bad), validation_error);
    bad = p;
    bad.dt = 2.0 / pair_weight(p.pot).cwiseAbs().maxCoeff();
    bad.t_final = 10.0 * bad.dt;
    bad.g = zero_series(g, bad.dt, 11);
    bad.h = zero_series(g, bad.dt, 11);
    CHECK_THROWS_AS(solve_linear(bad), validation_error);
    bad = p;
    bad.lambda0 = PairKernel{make_grid(1, 32, 4.0), p.lambda0.values};
    CHECK_THROWS_AS(solve_linear(bad), validation_error);
}

TEST_CASE("manufactured solution order") {
    GridSpec g = make_grid(1, 32, 8.0);
    PotentialSpec pot = potential(g, 1.0, 2.0);
    ManufacturedData d1 = manufacture_data(11, g, 3.0, 1.0, 0.1, 0.1);
    ManufacturedData d2 = manufacture_data(12, g, 3.0, 1.0, 0.1, 0.1);
    Manufactured m{d1.lambda0.values, d2.lambda0.values};
    const double t_final = 1.0;
    std::vector<double> err;
    for (double dt : {0.1, 0.05, 0.025}) {
        KernelSeries sol = solve_linear(mms_problem(g, pot, m, t_final, dt));
        err.push_back(max_abs(sol.frames.back() - m.at(t_final)));
    }
    const double o1 = std::log2(err[0] / err[1]), o2 = std::log2(err[1] / err[2]);
    MESSAGE("errors " << err[0] << " " << err[1] << " " << err[2] << "  orders " << o1 << " " << o2);
    CHECK(o2 >= 1.8);
    CHECK(o2 <= 2.2);
    CHECK(err[2] < 1e-2 * max_abs(m.at(t_final)));
}

TEST_CASE("linearity and superposition") {
    GridSpec g = make_grid(1, 32, 8.0);
    PotentialSpec pot = potential(g, 0.5, 4.0);
    const double t_final = 0.2, dt = 0.01;
    ManufacturedData a = manufacture_data(21, g, 3.0, 1.0, t_final, dt);
    ManufacturedData b = manufacture_data(22, g, 3.0, 1.0, t_final, dt);
    const cplx ca(0.7, -0.3), cb(-1.2, 0.4);
    ManufacturedData c{PairKernel{g, ca * a.lambda0.values + cb * b.lambda0.values, Symmetry::symmetric},
                       combine(a.g, ca, b.g, cb), combine(a.h, ca, b.h, cb)};
    KernelSeries sa = solve_linear(make_problem(g, pot, a, t_final, dt));
    KernelSeries sb = solve_linear(make_problem(g, pot, b, t_final, dt));
    KernelSeries sc = solve_linear(make_problem(g, pot, c, t_final, dt));
    CHECK(series_diff(sc, combine(sa, ca, sb, cb)) < 1e-10 * series_max(sc));

    const std::size_t frames = a.g.frames.size();
    ManufacturedData hom{a.lambda0, zero_series(g, dt, frames), zero_series(g, dt, frames)};
    ManufacturedData forced{PairKernel{g, MatrixXcd::Zero(g.size(), g.size()), Symmetry::symmetric}, a.g, a.h};
    KernelSeries sh = solve_linear(make_problem(g, pot, hom, t_final, dt));
    KernelSeries sf = solve_linear(make_problem(g, pot, forced, t_final, dt));
    CHECK(series_diff(sa, combine(sh, 1.0, sf, 1.0)) < 1e-10 * series_max(sa));
}

TEST_CASE("inequality records") {
    CHECK(inequality_names().size() == 10);
    InequalityRecord r = make_record("x", 2.0, {{"a", 1.0}, {"b", 2.0}}, {{"c", 4.0}, {"d", 2.0}});
    CHECK(r.lhs == 3.0);
    CHECK(r.rhs == 6.0);
    CHECK(r.ratio == 0.5);
    CHECK_FALSE(r.degenerate);
    InequalityRecord z = make_record("z", 2.0, {{"a", 0.0}}, {{"c", 1e-15}});
    CHECK(z.degenerate);
    CHECK(std::isnan(z.ratio));
}

TEST_CASE("zero problem gives degenerate records") {
    GridSpec g = make_grid(1, 32, 8.0);
    const double t_final = 0.2, dt = 0.01;
    ManufacturedData d = manufacture_data(3, g, 3.0, 0.0, t_final, dt);
    LinearProblem p = make_problem(g, potential(g, 0.5, 2.0), d, t_final, dt);
    auto recs = evaluate_inequalities(solve_linear(p), p, inequality_names());
    REQUIRE(recs.size() == inequality_names().size());
    for (const auto& r : recs) {
        CHECK(r.degenerate);
        CHECK(std::isnan(r.ratio));
        CHECK(r.lhs == 0.0);
    }
}

TEST_CASE("free Gaussian gives a finite ratio") {
    GridSpec g = make_grid(1, 32, 8.0);
    const double t_final = 0.2, dt = 0.01;
    const std::size_t frames = 21;
    VectorXcd g0(g.size());
    for (Index i = 0; i < g.size(); ++i) g0[i] = free_gaussian_1d(g.position(i)[0] - 4.0, 1.0, 0.0, g.length);
    ManufacturedData d{PairKernel{g, g0 * g0.transpose(), Symmetry::symmetric}, zero_series(g, dt, frames),
                       zero_series(g, dt, frames)};
    LinearProblem p = make_problem(g, zero_potential(g), d, t_final, dt);
    auto recs = evaluate_inequalities(solve_linear(p), p, {"critical_main", "strichartz_full"});
    REQUIRE(recs.size() == 2);
    for (const auto& r : recs) {
        CHECK_FALSE(r.degenerate);
        CHECK(std::isfinite(r.ratio));
        CHECK(r.ratio > 0.0);
    }
    const auto& main = recs[0];
    CHECK(main.lhs_terms.size() == 3);
    CHECK(main.rhs_terms.size() == 7);
    int h_terms = 0;
    for (const auto& t : main.rhs_terms)
        if (t.first.rfind("H_", 0) == 0) {
            ++h_terms;
            CHECK(t.second == 0.0);
        }
    CHECK(h_terms == 5);
    CHECK_THROWS_AS(evaluate_inequalities(solve_linear(p), p, {"no_such"}), validation_error);
}

TEST_CASE("N sweep on fixed manufactured data") {
    GridSpec g = make_grid(1, 64, 16.0);
    const double t_final = 0.1, dt = 0.005;
    ManufacturedData d = manufacture_data(5, g, 3.0, 1.0, t_final, dt);
    std::vector<double> ratios, ratios_f2;
    for (double n : {2.0, 4.0, 8.0}) {
        LinearProblem p = make_problem(g, potential(g, 1.0, n), d, t_final, dt);
        auto recs = evaluate_inequalities(solve_linear(p), p, {"critical_main", "full_collapsing_no_h"});
        const auto& main = find(recs, "critical_main");
        const auto& f2 = find(recs, "full_collapsing_no_h");
        REQUIRE_FALSE(main.degenerate);
        REQUIRE_FALSE(f2.degenerate);
        CHECK(main.n == n);
        ratios.push_back(main.ratio);
        ratios_f2.push_back(f2.ratio);
        const double cproj = projector_l1_norm(g, Band::ball(20.0 * n, Axes::x, CutoffPolicy::saturate));
        MESSAGE("N=" << n << " main " << main.ratio << " f2 " << f2.ratio << " C_proj " << cproj);
        CHECK(f2.ratio <= cproj * main.ratio);
    }
    const auto [mn, mx] = std::minmax_element(ratios.begin(), ratios.end());
    MESSAGE("critical_main max/min = " << *mx / *mn);
    CHECK(std::isfinite(*mx / *mn));
}
