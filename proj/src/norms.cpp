#include "hfb/norms.hpp"
#include "hfb/errors.hpp"
#include "hfb/fft.hpp"
#include "hfb/rotation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <set>

namespace hfb {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

void require_frames(const KernelSeries& s) {
    if (s.frames.empty()) throw validation_error("empty series");
    if (!(s.dt > 0.0)) throw validation_error("non-uniform or degenerate time sampling");
}

// inner L^r norm along the inner variable for every outer index
VectorXd inner_norms(const MatrixXcd& a, const GridSpec& g, Ordering ord, double r) {
    const double w = ord == Ordering::diff_then_sum ? rotated_w_weight(g) : g.cell();
    MatrixXcd rot;
    const MatrixXcd* m = &a;
    if (ord == Ordering::diff_then_sum) {
        rot = rotate_pair_coords(a, g, RotationDirection::forward);
        m = &rot;
    }
    // rows are the outer variable for x_then_y and diff_then_sum
    const bool rows_outer = ord != Ordering::y_then_x;
    MatrixXd ab = m->cwiseAbs();
    if (std::isinf(r)) return rows_outer ? VectorXd(ab.rowwise().maxCoeff()) : VectorXd(ab.colwise().maxCoeff().transpose());
    VectorXd sums;
    if (r == 2.0) {
        MatrixXd sq = ab.cwiseAbs2();
        sums = rows_outer ? VectorXd(sq.rowwise().sum()) : VectorXd(sq.colwise().sum().transpose());
    } else {
        MatrixXd pw = ab.array().pow(r).matrix();
        sums = rows_outer ? VectorXd(pw.rowwise().sum()) : VectorXd(pw.colwise().sum().transpose());
    }
    return (w * sums).array().pow(1.0 / r).matrix();
}

double outer_norm(const VectorXd& v, double q, double w) {
    if (std::isinf(q)) return v.size() ? v.maxCoeff() : 0.0;
    return std::pow(w * v.array().pow(q).sum(), 1.0 / q);
}

// left rectangle rule on samples 0..n-2; L^inf is the max over all samples
double time_norm(const std::vector<double>& f, double p, double dt) {
    if (std::isinf(p)) return f.empty() ? 0.0 : *std::max_element(f.begin(), f.end());
    double acc = 0.0;
    for (std::size_t n = 0; n + 1 < f.size(); ++n) acc += dt * std::pow(f[n], p);
    return std::pow(acc, 1.0 / p);
}

std::vector<VectorXd> all_inner(const KernelSeries& s, Ordering ord, double r) {
    std::vector<VectorXd> out;
    out.reserve(s.frames.size());
    for (const auto& f : s.frames) out.push_back(inner_norms(f, s.grid, ord, r));
    return out;
}

double norm_from_inner(const std::vector<VectorXd>& inner, double p, double q, double w, double dt) {
    std::vector<double> f;
    f.reserve(inner.size());
    for (const auto& v : inner) f.push_back(outer_norm(v, q, w));
    return time_norm(f, p, dt);
}

std::vector<double> dual_p_list(int dim) {
    const double lo = std::max(2.2, admissible_p_min(dim)), hi = 64.0;
    std::vector<double> ps;
    for (int j = 0; j < 6; ++j) ps.push_back(lo * std::pow(hi / lo, j / 5.0));
    return ps;
}

}  // namespace

Selector selector_from_name(const std::string& name) {
    static const std::map<std::string, Selector> table{
        {"phi", Selector::phi},         {"lambda", Selector::lambda},   {"lambda_p", Selector::lambda_p},
        {"lambda_c", Selector::lambda_c}, {"gamma", Selector::gamma},   {"gamma_p", Selector::gamma_p},
        {"gamma_c", Selector::gamma_c}, {"sh2k", Selector::sh2k},       {"p2", Selector::p2}};
    auto it = table.find(name);
    if (it == table.end()) throw validation_error("unknown selector '" + name + "'");
    return it->second;
}

KernelSeries select_kernels(const Trajectory& tr, Selector sel) {
    if (sel == Selector::phi) throw validation_error("selector 'phi' is a one-body field");
    KernelSeries out{tr.grid, tr.sample_dt, {}};
    out.frames.reserve(tr.states.size());
    const double n = tr.meta.n;
    for (const auto& st : tr.states) {
        const VectorXcd& p = st.phi.values;
        switch (sel) {
            case Selector::lambda: out.frames.push_back(st.lambda_p.values + p * p.transpose()); break;
            case Selector::lambda_p: out.frames.push_back(st.lambda_p.values); break;
            case Selector::lambda_c: out.frames.push_back(p * p.transpose()); break;
            case Selector::gamma: out.frames.push_back(st.gamma_p.values + p.conjugate() * p.transpose()); break;
            case Selector::gamma_p: out.frames.push_back(st.gamma_p.values); break;
            case Selector::gamma_c: out.frames.push_back(p.conjugate() * p.transpose()); break;
            case Selector::sh2k: out.frames.push_back(2.0 * n * st.lambda_p.values); break;
            case Selector::p2: out.frames.push_back(n * st.gamma_p.values); break;
            case Selector::phi: break;
        }
    }
    return out;
}

FieldSeries select_phi(const Trajectory& tr) {
    FieldSeries out{tr.grid, tr.sample_dt, {}};
    for (const auto& st : tr.states) out.frames.push_back(st.phi.values);
    return out;
}

KernelSeries apply(const KernelSeries& s, const FourierMultiplier& m) {
    KernelSeries out{s.grid, s.dt, {}};
    out.frames.reserve(s.frames.size());
    for (const auto& f : s.frames) out.frames.push_back(apply_multiplier(f, s.grid, m));
    return out;
}

FieldSeries apply(const FieldSeries& s, const FourierMultiplier& m) {
    FieldSeries out{s.grid, s.dt, {}};
    for (const auto& f : s.frames) out.frames.push_back(apply_multiplier(Field{s.grid, f}, m).values);
    return out;
}

KernelSeries project(const KernelSeries& s, const Band& b) { return apply(s, band_multiplier(s.grid, b)); }

KernelSeries scaled(const KernelSeries& s, cplx c) {
    KernelSeries out = s;
    for (auto& f : out.frames) f *= c;
    return out;
}

KernelSeries combine(const KernelSeries& a, cplx ca, const KernelSeries& b, cplx cb) {
    if (a.frames.size() != b.frames.size()) throw validation_error("series length mismatch");
    require_same_grid(a.grid, b.grid, "combine");
    KernelSeries out{a.grid, a.dt, {}};
    for (std::size_t n = 0; n < a.frames.size(); ++n) out.frames.push_back(ca * a.frames[n] + cb * b.frames[n]);
    return out;
}

double admissible_q(int dim, double p) {
    if (std::isinf(p)) return 2.0;
    double den = 0.5 * dim - 2.0 / p;
    if (den <= 0.0) return inf;
    return dim / den;
}

double admissible_p_min(int dim) {
    switch (dim) {
        case 1: return 4.0;
        case 2: return 2.2;
        case 3: return 2.0;
    }
    throw validation_error("dimension out of range");
}

std::vector<AdmissiblePair> admissible_pairs(int dim, int count) {
    if (dim < 1 || dim > 3) throw validation_error("dimension out of range");
    if (count < 2) throw validation_error("need at least two admissible pairs");
    const double pmin = admissible_p_min(dim);
    std::vector<AdmissiblePair> out{{inf, 2.0}, {pmin, admissible_q(dim, pmin)}};
    for (int j = 1; j <= count - 2; ++j) {
        double p = pmin * std::pow(4.0, double(j) / (count - 1));
        out.push_back({p, admissible_q(dim, p)});
    }
    return out;
}

double conjugate_exponent(double p) {
    if (std::isinf(p)) return 1.0;
    if (p == 1.0) return inf;
    return p / (p - 1.0);
}

double mixed_norm(const KernelSeries& s, double p_t, double q_outer, double r_inner, Ordering ord) {
    require_frames(s);
    if (p_t < 1.0 || q_outer < 1.0 || r_inner < 1.0) throw validation_error("exponents must be >= 1");
    const double w = s.grid.cell();
    return norm_from_inner(all_inner(s, ord, r_inner), p_t, q_outer, w, s.dt);
}

double mixed_norm(const FieldSeries& s, double p_t, double q) {
    if (s.frames.empty() || !(s.dt > 0.0)) throw validation_error("empty or degenerate field series");
    std::vector<double> f;
    for (const auto& v : s.frames) f.push_back(outer_norm(v.cwiseAbs(), q, s.grid.cell()));
    return time_norm(f, p_t, s.dt);
}

double time_inner_norm(const KernelSeries& s, double q_outer, double p_t, double r_inner) {
    require_frames(s);
    auto inner = all_inner(s, Ordering::diff_then_sum, r_inner);
    const Index nu = s.grid.size();
    VectorXd per_u(nu);
    std::vector<double> f(inner.size());
    for (Index u = 0; u < nu; ++u) {
        for (std::size_t n = 0; n < inner.size(); ++n) f[n] = inner[n][u];
        per_u[u] = time_norm(f, p_t, s.dt);
    }
    return outer_norm(per_u, q_outer, s.grid.cell());
}

double strichartz_norm(const KernelSeries& s, StrichartzKind kind, int count) {
    require_frames(s);
    const double w = s.grid.cell();
    std::vector<Ordering> ords{Ordering::x_then_y, Ordering::y_then_x};
    if (kind == StrichartzKind::full) ords.push_back(Ordering::diff_then_sum);
    if (kind == StrichartzKind::dual_restricted) {
        auto ix = all_inner(s, Ordering::x_then_y, 2.0);
        auto iy = all_inner(s, Ordering::y_then_x, 2.0);
        double best = inf;
        for (double p : dual_p_list(s.grid.dim)) {
            double pp = conjugate_exponent(p), qq = conjugate_exponent(admissible_q(s.grid.dim, p));
            best = std::min({best, norm_from_inner(ix, pp, qq, w, s.dt), norm_from_inner(iy, pp, qq, w, s.dt)});
        }
        return best;
    }
    auto pairs = admissible_pairs(s.grid.dim, count);
    double total = 0.0;
    for (Ordering o : ords) {
        auto inner = all_inner(s, o, 2.0);
        double sup = 0.0;
        for (const auto& pq : pairs) sup = std::max(sup, norm_from_inner(inner, pq.p, pq.q, w, s.dt));
        total += sup;
    }
    return total;
}

double strichartz_norm(const KernelSeries& s, const std::vector<FourierMultiplier>& pre, StrichartzKind kind,
                       int count) {
    if (pre.empty()) return strichartz_norm(s, kind, count);
    FourierMultiplier m = pre.front();
    for (std::size_t i = 1; i < pre.size(); ++i) m = m * pre[i];
    return strichartz_norm(apply(s, m), kind, count);
}

double strichartz_norm(const FieldSeries& s, int count) {
    double sup = 0.0;
    for (const auto& pq : admissible_pairs(s.grid.dim, count)) sup = std::max(sup, mixed_norm(s, pq.p, pq.q));
    return sup;
}

double collapsing_norm(const KernelSeries& s) {
    require_frames(s);
    const GridSpec& g = s.grid;
    const double w = rotated_w_weight(g);
    VectorXd acc = VectorXd::Zero(g.size());
    for (std::size_t n = 0; n + 1 < s.frames.size(); ++n) {
        MatrixXcd r = rotate_pair_coords(s.frames[n], g, RotationDirection::forward);
        acc += s.dt * w * r.cwiseAbs2().rowwise().sum();
    }
    return std::sqrt(acc.maxCoeff());
}

double low_collapsing_norm(const KernelSeries& s, double n, double factor) {
    if (!(n > 0.0) || n > s.grid.nyquist())
        throw validation_error("low collapsing norm: N = " + std::to_string(n) + " beyond the grid Nyquist " +
                               std::to_string(s.grid.nyquist()));
    const double c = factor * n;
    const auto sat = CutoffPolicy::saturate;
    return collapsing_norm(project(s, Band::ball(c, Axes::x_minus_y, sat))) +
           collapsing_norm(project(s, Band::ball(c, Axes::x, sat))) +
           collapsing_norm(project(s, Band::ball(c, Axes::y, sat)));
}

KernelSeries time_frac_deriv(const KernelSeries& s, double order, bool taper) {
    const Index nt = static_cast<Index>(s.frames.size());
    if (nt < 16) throw validation_error("time_frac_deriv needs at least 16 samples");
    require_frames(s);
    const Index p = s.frames.front().size();
    VectorXd window = VectorXd::Ones(nt);
    if (taper)
        for (Index n = 0; n < nt; ++n) window[n] = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * n / (nt - 1)));
    VectorXd mult(nt);
    for (Index k = 0; k < nt; ++k) {
        Index m = k < (nt + 1) / 2 ? k : k - nt;
        double tau = 2.0 * std::numbers::pi * m / (nt * s.dt);
        mult[k] = std::pow(std::abs(tau), order);
    }
    KernelSeries out{s.grid, s.dt, std::vector<MatrixXcd>(nt, MatrixXcd(s.frames.front().rows(), s.frames.front().cols()))};
    const Index chunk = 2048;
    MatrixXcd buf;
    for (Index start = 0; start < p; start += chunk) {
        const Index len = std::min(chunk, p - start);
        buf.resize(nt, len);
        for (Index n = 0; n < nt; ++n)
            buf.row(n) = window[n] * Eigen::Map<const Eigen::RowVectorXcd>(s.frames[n].data() + start, len);
        dft_columns(buf, false);
        buf = mult.asDiagonal() * buf;
        dft_columns(buf, true);
        for (Index n = 0; n < nt; ++n)
            Eigen::Map<Eigen::RowVectorXcd>(out.frames[n].data() + start, len) = buf.row(n);
    }
    return out;
}

double square_function_ratio(const KernelSeries& s, int kmax, int count) {
    double whole = strichartz_norm(s, StrichartzKind::xy, count);
    if (whole == 0.0) return 0.0;
    double acc = 0.0;
    for (int k = 0; k <= kmax; ++k) {
        Band b = k == 0 ? Band::ball(1.0, Axes::x_minus_y) : Band::annulus(k, Axes::x_minus_y);
        double v = strichartz_norm(project(s, b), StrichartzKind::xy, count);
        acc += v * v;
    }
    return acc / (whole * whole);
}

NormReport compute_norms(const Trajectory& tr, const NormOptions& opt, const std::string& scenario_id) {
    NormReport rep;
    rep.scenario_id = scenario_id;
    rep.grid = tr.grid;
    rep.n = tr.meta.n;
    const double n = tr.meta.n;
    const int cnt = opt.admissible_count;
    const auto sat = CutoffPolicy::saturate;

    std::optional<KernelSeries> lam, lam_p, lam_c;
    auto get = [&](std::optional<KernelSeries>& slot, Selector sel) -> const KernelSeries& {
        if (!slot) slot = select_kernels(tr, sel);
        return *slot;
    };
    const FourierMultiplier bxy = bracket(0.5, Axes::x) * bracket(0.5, Axes::y);
    const FourierMultiplier bx = bracket(0.5, Axes::x), by = bracket(0.5, Axes::y);
    const FourierMultiplier bsum = bracket(0.5, Axes::x_plus_y), bdiff = bracket(0.5, Axes::x_minus_y);
    auto l2l6l2 = [](const KernelSeries& s) { return mixed_norm(s, 2.0, 6.0, 2.0, Ordering::diff_then_sum); };

    for (const auto& name : opt.names) {
        double v = 0.0;
        if (name == "S_xy") {
            v = strichartz_norm(apply(get(lam, Selector::lambda), bxy), StrichartzKind::xy, cnt);
        } else if (name == "S_full") {
            v = strichartz_norm(apply(get(lam, Selector::lambda), bxy), StrichartzKind::full, cnt);
        } else if (name == "S_dual_r") {
            v = strichartz_norm(apply(get(lam, Selector::lambda), bxy), StrichartzKind::dual_restricted, cnt);
        } else if (name == "collapsing") {
            v = collapsing_norm(apply(get(lam, Selector::lambda), bsum));
        } else if (name == "low_collapsing") {
            v = low_collapsing_norm(apply(get(lam_p, Selector::lambda_p), bsum), n, opt.low_collapse_factor);
        } else if (name == "N1_lambda_p") {
            const KernelSeries& s = get(lam_p, Selector::lambda_p);
            const double hi = opt.high_factor * n, lo = n / opt.low_divisor;
            FourierMultiplier far = band_multiplier(tr.grid, Band::high(hi, Axes::x, sat)) *
                                    band_multiplier(tr.grid, Band::high(hi, Axes::y, sat)) *
                                    band_multiplier(tr.grid, Band::high(lo, Axes::x_plus_y, sat));
            FourierMultiplier diag = band_multiplier(tr.grid, Band::high(hi, Axes::x_minus_y, sat)) *
                                     band_multiplier(tr.grid, Band::ball(lo, Axes::x_plus_y, sat));
            v = strichartz_norm(apply(s, bxy), StrichartzKind::xy, cnt) +
                low_collapsing_norm(apply(s, bsum), n, opt.low_collapse_factor) +
                low_collapsing_norm(time_frac_deriv(s), n, opt.low_collapse_factor) + l2l6l2(apply(s, bxy * far)) +
                l2l6l2(apply(s, bsum * bdiff * diag)) + l2l6l2(time_frac_deriv(apply(s, bdiff * diag)));
        } else if (name == "N2_lambda_c") {
            const KernelSeries& s = get(lam_c, Selector::lambda_c);
            v = strichartz_norm(apply(s, bxy), StrichartzKind::xy, cnt) + collapsing_norm(apply(s, bsum)) +
                collapsing_norm(time_frac_deriv(s)) + collapsing_norm(apply(s, bx)) + collapsing_norm(apply(s, by)) +
                l2l6l2(apply(s, bxy));
        } else if (name == "phi_S") {
            v = strichartz_norm(apply(select_phi(tr), bracket(0.5, Axes::x)), cnt);
        } else if (name == "sh2k_S_xy") {
            v = strichartz_norm(select_kernels(tr, Selector::sh2k), StrichartzKind::xy, cnt);
        } else if (name == "p2_S_xy") {
            v = strichartz_norm(select_kernels(tr, Selector::p2), StrichartzKind::xy, cnt);
        } else if (name == "apriori_gamma") {
            KernelSeries g = apply(select_kernels(tr, Selector::gamma), bracket(opt.apriori_alpha, Axes::x_plus_y));
            v = mixed_norm(g, 8.0, inf, 4.0 / 3.0, Ordering::diff_then_sum);
        } else {
            throw validation_error("unknown norm name '" + name + "'");
        }
        if (!std::isfinite(v) || v < 0.0) throw numerical_error("norm '" + name + "' is not finite");
        rep.entries[name] = v;
    }
    return rep;
}

GrowthSummary uniform_in_N_report(const std::vector<std::pair<double, NormReport>>& runs) {
    std::set<double> distinct;
    for (const auto& r : runs) distinct.insert(r.first);
    if (distinct.size() < 2) throw validation_error("need >= 2 values of N");
    const auto& first = runs.front().second;
    for (const auto& r : runs) {
        if (r.second.scenario_id != first.scenario_id || !(r.second.grid == first.grid))
            throw validation_error("inconsistent scenario metadata across N");
        if (r.second.entries.size() != first.entries.size())
            throw validation_error("inconsistent norm lists across N");
        for (const auto& kv : first.entries)
            if (!r.second.entries.count(kv.first)) throw validation_error("inconsistent norm lists across N");
    }
    auto sorted = runs;
    std::stable_sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    GrowthSummary out;
    for (const auto& r : sorted) out.n_values.push_back(r.first);
    for (const auto& kv : first.entries) {
        GrowthEntry e;
        e.name = kv.first;
        for (const auto& r : sorted) e.values.push_back(r.second.entries.at(kv.first));
        double mx = *std::max_element(e.values.begin(), e.values.end());
        double mn = *std::min_element(e.values.begin(), e.values.end());
        e.max_over_min = mx == mn ? 1.0 : (mn > 0.0 ? mx / mn : inf);
        e.monotone_growth = true;
        for (std::size_t i = 1; i < e.values.size(); ++i)
            if (!(e.values[i] > e.values[i - 1])) e.monotone_growth = false;
        out.entries.push_back(e);
    }
    return out;
}

}  // namespace hfb
