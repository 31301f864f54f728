#include "hfb/linear.hpp"
#include "hfb/errors.hpp"
#include "hfb/fft.hpp"
#include "hfb/kernels.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <random>

namespace hfb {

namespace {

double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

MatrixXcd random_band_kernel(std::mt19937_64& rng, const GridSpec& g, double band) {
    const Index n = g.size();
    MatrixXcd c = MatrixXcd::Zero(n, n);
    for (Index j = 0; j < n; ++j) {
        const bool in_j = g.freq_sq(j) <= band * band;
        for (Index i = 0; i < n; ++i) {
            double re = unit(rng) - 0.5, im = unit(rng) - 0.5;
            if (in_j && g.freq_sq(i) <= band * band) c(i, j) = cplx(re, im);
        }
    }
    MatrixXcd k = fft_xy(c, g, true);
    MatrixXcd s = 0.5 * (k + k.transpose());
    double nrm = g.cell() * s.norm();
    if (nrm > 0.0) s /= nrm;
    return s;
}

void check_series(const KernelSeries& s, const GridSpec& g, std::size_t frames, const char* what) {
    require_same_grid(s.grid, g, what);
    if (s.frames.size() != frames)
        throw validation_error(std::string(what) + ": forcing must be sampled on the solver lattice (" +
                               std::to_string(frames) + " frames expected, got " +
                               std::to_string(s.frames.size()) + ")");
}

MatrixXcd kinetic(const MatrixXcd& k, const GridSpec& g, const MatrixXcd& phase) {
    MatrixXcd f = fft_xy(k, g, false);
    f.array() *= phase.array();
    return fft_xy(f, g, true);
}

MatrixXcd kinetic_phase(const GridSpec& g, double t) {
    const Index n = g.size();
    VectorXcd p(n);
    for (Index i = 0; i < n; ++i) p[i] = std::exp(cplx(0.0, -g.freq_sq(i) * t));
    return p * p.transpose();
}

FourierMultiplier sum_of(const FourierMultiplier& a, const FourierMultiplier& b) {
    return FourierMultiplier{Axes::both, [a, b](const Vec3& xi, const Vec3& eta) {
                                 return a.symbol(xi, eta) + b.symbol(xi, eta);
                             }};
}

KernelSeries source_series(const KernelSeries& sol, const LinearProblem& prob, const MatrixXd& w) {
    KernelSeries out{sol.grid, sol.dt, {}};
    out.frames.reserve(sol.frames.size());
    for (std::size_t n = 0; n < sol.frames.size(); ++n)
        out.frames.push_back(prob.g.frames[n] + w.cast<cplx>().cwiseProduct(sol.frames[n] + prob.h.frames[n]));
    return out;
}

}  // namespace

KernelSeries zero_series(const GridSpec& g, double dt, std::size_t frames) {
    return KernelSeries{g, dt, std::vector<MatrixXcd>(frames, MatrixXcd::Zero(g.size(), g.size()))};
}

ManufacturedData manufacture_data(std::uint64_t seed, const GridSpec& g, double band, double amplitude,
                                  double t_final, double dt) {
    if (!(band > 0.0) || band > g.nyquist())
        throw validation_error("manufacture_data: band " + std::to_string(band) + " exceeds Nyquist " +
                               std::to_string(g.nyquist()));
    if (!(dt > 0.0) || !(t_final > 0.0)) throw validation_error("manufacture_data: t_final and dt must be positive");
    const double steps_real = t_final / dt;
    const long steps = std::lround(steps_real);
    if (std::abs(steps_real - steps) > 1e-9 * steps_real)
        throw validation_error("manufacture_data: t_final must be a multiple of dt");
    std::mt19937_64 rng(seed);
    ManufacturedData d;
    d.lambda0 = PairKernel{g, amplitude * random_band_kernel(rng, g, band), Symmetry::symmetric};
    MatrixXcd g1 = random_band_kernel(rng, g, band), g2 = random_band_kernel(rng, g, band);
    MatrixXcd h1 = random_band_kernel(rng, g, band), h2 = random_band_kernel(rng, g, band);
    double w[4], ph[4];
    for (int i = 0; i < 4; ++i) {
        w[i] = 1.0 + 2.0 * unit(rng);
        ph[i] = 2.0 * std::numbers::pi * unit(rng);
    }
    d.g = KernelSeries{g, dt, {}};
    d.h = KernelSeries{g, dt, {}};
    for (long n = 0; n <= steps; ++n) {
        const double t = n * dt;
        d.g.frames.push_back(amplitude * (std::cos(w[0] * t + ph[0]) * g1 + std::sin(w[1] * t + ph[1]) * g2));
        d.h.frames.push_back(amplitude * (std::cos(w[2] * t + ph[2]) * h1 + std::sin(w[3] * t + ph[3]) * h2));
    }
    return d;
}

MatrixXd pair_weight(const PotentialSpec& pot) { return difference_matrix(pot.scaled) / pot.n; }

MatrixXcd free_pair_propagate(const MatrixXcd& k, const GridSpec& g, double t) {
    return kinetic(k, g, kinetic_phase(g, t));
}

KernelSeries solve_linear(const LinearProblem& prob) {
    const GridSpec& g = prob.grid;
    require_same_grid(prob.lambda0.grid, g, "solve_linear");
    require_same_grid(prob.pot.scaled.grid, g, "solve_linear");
    if (!(prob.dt > 0.0) || !(prob.t_final > 0.0)) throw validation_error("solve_linear: T and dt must be positive");
    const double steps_real = prob.t_final / prob.dt;
    const long steps = std::lround(steps_real);
    if (std::abs(steps_real - steps) > 1e-9 * steps_real)
        throw validation_error("solve_linear: T must be a multiple of dt");
    check_series(prob.g, g, steps + 1, "solve_linear G");
    check_series(prob.h, g, steps + 1, "solve_linear H");

    const MatrixXd w = pair_weight(prob.pot);
    const double wsup = w.cwiseAbs().maxCoeff();
    if (prob.dt * wsup > 1.0)
        throw validation_error("stability bound violated: dt * sup W = " + std::to_string(prob.dt * wsup) + " > 1");
    const double dt = prob.dt;
    const MatrixXcd half = kinetic_phase(g, 0.5 * dt);
    const MatrixXcd wc = w.cast<cplx>();
    const MatrixXcd e_full = (cplx(0.0, dt) * wc).array().exp().matrix();
    const MatrixXcd e_half = (cplx(0.0, 0.5 * dt) * wc).array().exp().matrix();
    const cplx i1(0.0, 1.0);

    KernelSeries out{g, dt, {}};
    out.frames.reserve(steps + 1);
    MatrixXcd lam = prob.lambda0.values;
    out.frames.push_back(lam);
    for (long n = 0; n < steps; ++n) {
        lam = kinetic(lam, g, half);
        MatrixXcd f0 = prob.g.frames[n] + wc.cwiseProduct(prob.h.frames[n]);
        MatrixXcd f1 = prob.g.frames[n + 1] + wc.cwiseProduct(prob.h.frames[n + 1]);
        MatrixXcd fm = 0.5 * (f0 + f1);
        lam = e_full.cwiseProduct(lam) +
              (i1 * dt / 6.0) * (e_full.cwiseProduct(f0) + 4.0 * e_half.cwiseProduct(fm) + f1);
        lam = kinetic(lam, g, half);
        if (!all_finite(lam)) throw numerical_error("linear solve produced non-finite values at step " + std::to_string(n + 1));
        out.frames.push_back(lam);
    }
    return out;
}

const std::vector<std::string>& inequality_names() {
    static const std::vector<std::string> names{
        "critical_main",        "full_collapsing_no_h",       "strichartz_full",
        "sxy_from_collapsing_source", "diff_derivative_sxy", "time_derivative_l2l6",
        "collapsing_min",       "collapsing_xy_sum",          "collapsing_sum_derivative",
        "collapsing_time_derivative"};
    return names;
}

InequalityRecord make_record(std::string name, double n, std::vector<std::pair<std::string, double>> lhs,
                             std::vector<std::pair<std::string, double>> rhs) {
    InequalityRecord r;
    r.name = std::move(name);
    r.n = n;
    for (const auto& t : lhs) r.lhs += t.second;
    for (const auto& t : rhs) r.rhs += t.second;
    r.lhs_terms = std::move(lhs);
    r.rhs_terms = std::move(rhs);
    r.degenerate = !(r.rhs > 1e-14);
    r.ratio = r.degenerate ? std::numeric_limits<double>::quiet_NaN() : r.lhs / r.rhs;
    return r;
}

std::vector<InequalityRecord> evaluate_inequalities(const KernelSeries& sol, const LinearProblem& prob,
                                                    const std::vector<std::string>& which,
                                                    const InequalityOptions& opt) {
    const GridSpec& g = prob.grid;
    require_same_grid(sol.grid, g, "evaluate_inequalities");
    if (sol.frames.size() != prob.g.frames.size() || sol.frames.size() != prob.h.frames.size() ||
        std::abs(sol.dt - prob.dt) > 1e-15 * prob.dt)
        throw validation_error("evaluate_inequalities: solution and problem lattices differ");
    for (const auto& name : which) {
        bool known = false;
        for (const auto& k : inequality_names()) known = known || k == name;
        if (!known) throw validation_error("unknown inequality '" + name + "'");
    }

    const double n = prob.pot.n, eps = prob.pot.epsilon;
    const int cnt = opt.admissible_count;
    const double lcf = opt.low_collapse_factor;
    const FourierMultiplier bx = bracket(0.5, Axes::x), by = bracket(0.5, Axes::y);
    const FourierMultiplier bxy = bx * by;
    const FourierMultiplier bsum = bracket(0.5, Axes::x_plus_y), bdiff = bracket(0.5, Axes::x_minus_y);
    const FourierMultiplier bds = sum_of(bdiff, bsum);
    const MatrixXd w = pair_weight(prob.pot);

    auto l2 = [&](const FourierMultiplier& m) { return l2_norm(apply_multiplier(prob.lambda0, m)); };
    auto dual = [&](const KernelSeries& s, const FourierMultiplier& m) {
        return strichartz_norm(apply(s, m), StrichartzKind::dual_restricted, cnt);
    };
    auto l2l65l2 = [](const KernelSeries& s) { return mixed_norm(s, 2.0, 1.2, 2.0, Ordering::diff_then_sum); };

    std::optional<KernelSeries> src, u;
    auto source = [&]() -> const KernelSeries& {
        if (!src) src = source_series(sol, prob, w);
        return *src;
    };
    auto homog_removed = [&]() -> const KernelSeries& {
        if (!u) {
            KernelSeries s{g, sol.dt, {}};
            for (std::size_t k = 0; k < sol.frames.size(); ++k)
                s.frames.push_back(sol.frames[k] - free_pair_propagate(prob.lambda0.values, g, k * sol.dt));
            u = std::move(s);
        }
        return *u;
    };

    std::vector<InequalityRecord> out;
    for (const auto& name : which) {
        if (name == "critical_main") {
            out.push_back(make_record(
                name, n,
                {{"S_xy", strichartz_norm(apply(sol, bxy), StrichartzKind::xy, cnt)},
                 {"low_collapsing_sum", low_collapsing_norm(apply(sol, bsum), n, lcf)},
                 {"low_collapsing_dt", low_collapsing_norm(time_frac_deriv(sol), n, lcf)}},
                {{"G_dual", dual(prob.g, bxy)},
                 {"H_l2l6l2", eps * mixed_norm(apply(prob.h, bxy), 2.0, 6.0, 2.0, Ordering::diff_then_sum)},
                 {"H_coll_sum", eps * collapsing_norm(apply(prob.h, bsum))},
                 {"H_coll_dt", eps * collapsing_norm(time_frac_deriv(prob.h))},
                 {"H_coll_x", eps * collapsing_norm(apply(prob.h, bx))},
                 {"H_coll_y", eps * collapsing_norm(apply(prob.h, by))},
                 {"lambda0", l2(bxy)}}));
        } else if (name == "full_collapsing_no_h") {
            LinearProblem p0 = prob;
            p0.h = zero_series(g, prob.dt, prob.h.frames.size());
            KernelSeries s0 = solve_linear(p0);
            out.push_back(make_record(name, n,
                                      {{"coll_sum", collapsing_norm(apply(s0, bsum))},
                                       {"coll_dt", collapsing_norm(time_frac_deriv(s0))}},
                                      {{"G_dual", dual(prob.g, bxy)}, {"lambda0", l2(bxy)}}));
        } else if (name == "strichartz_full") {
            KernelSeries f{g, sol.dt, {}};
            for (std::size_t k = 0; k < sol.frames.size(); ++k)
                f.frames.push_back(w.cast<cplx>().cwiseProduct(sol.frames[k] + prob.h.frames[k]));
            out.push_back(make_record(name, n, {{"S_full", strichartz_norm(sol, StrichartzKind::full, cnt)}},
                                      {{"f_l2l65l2", l2l65l2(f)},
                                       {"G_dual", strichartz_norm(prob.g, StrichartzKind::dual_restricted, cnt)},
                                       {"lambda0", l2_norm(prob.lambda0)}}));
        } else if (name == "sxy_from_collapsing_source") {
            const KernelSeries& f = source();
            out.push_back(make_record(name, n, {{"S_xy", strichartz_norm(homog_removed(), StrichartzKind::xy, cnt)}},
                                      {{"f_sum", time_inner_norm(apply(f, bsum), 1.0, 2.0, 2.0)},
                                       {"f_dt", time_inner_norm(time_frac_deriv(f), 1.0, 2.0, 2.0)}}));
        } else if (name == "diff_derivative_sxy") {
            const KernelSeries& f = source();
            out.push_back(make_record(
                name, n, {{"S_xy_diff", strichartz_norm(apply(homog_removed(), bdiff), StrichartzKind::xy, cnt)}},
                {{"f_sum", l2l65l2(apply(f, bsum))}, {"f_dt", l2l65l2(time_frac_deriv(f))}}));
        } else if (name == "time_derivative_l2l6") {
            const KernelSeries& f = source();
            const double a = l2l65l2(time_frac_deriv(f));
            const KernelSeries fd = apply(f, bds);
            const double b = l2l65l2(fd);
            const double c = strichartz_norm(fd, StrichartzKind::dual_restricted, cnt);
            out.push_back(make_record(
                name, n, {{"dt_l2l6l2", mixed_norm(time_frac_deriv(sol), 2.0, 6.0, 2.0, Ordering::diff_then_sum)}},
                {{"f_min", std::min({a, b, c})}, {"lambda0", l2(bds)}}));
        } else if (name == "collapsing_min") {
            const KernelSeries& f = source();
            const double rx = dual(f, bx) + l2(bx), ry = dual(f, by) + l2(by);
            out.push_back(make_record(name, n, {{"coll", collapsing_norm(sol)}}, {{"min_xy", std::min(rx, ry)}}));
        } else {
            const KernelSeries& f = source();
            std::vector<std::pair<std::string, double>> rhs{{"f_dual", dual(f, bxy)}, {"lambda0", l2(bxy)}};
            if (name == "collapsing_xy_sum")
                out.push_back(make_record(
                    name, n, {{"coll_x", collapsing_norm(apply(sol, bx))}, {"coll_y", collapsing_norm(apply(sol, by))}},
                    rhs));
            else if (name == "collapsing_sum_derivative")
                out.push_back(make_record(name, n, {{"coll_sum", collapsing_norm(apply(sol, bsum))}}, rhs));
            else
                out.push_back(make_record(name, n, {{"coll_dt", collapsing_norm(time_frac_deriv(sol))}}, rhs));
        }
    }
    return out;
}

}  // namespace hfb
