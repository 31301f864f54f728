#include "hfb/evolution.hpp"
#include "hfb/errors.hpp"
#include "hfb/fft.hpp"

#include <cmath>
#include <string>

namespace hfb {

using namespace std::complex_literals;

Field gaussian_field(const GridSpec& g, const PhiProfile& p) {
    if (!(p.width > 0.0)) throw validation_error("phi width must be positive");
    Field f = zero_field(g);
    for (Index i = 0; i < g.size(); ++i) {
        auto x = g.position(i);
        double r2 = 0.0, phase = 0.0;
        for (int a = 0; a < g.dim; ++a) {
            double d = x[a] - (0.5 * g.length + p.offset[a]);
            r2 += d * d;
            phase += p.momentum[a] * x[a];
        }
        f.values[i] = std::exp(-r2 / (2.0 * p.width * p.width)) * std::exp(1i * phase);
    }
    return f;
}

PairKernel rank_one_kernel(const GridSpec& g, const PairProfile& p) {
    Field e = gaussian_field(g, PhiProfile{p.width, p.offset, {0.0, 0.0, 0.0}});
    e.values /= l2_norm(e);
    PairKernel k = outer(e, e, Symmetry::symmetric);
    k.values *= p.amplitude;
    return k;
}

PairKernel lambda_c(const HFBState& s) {
    return PairKernel{s.phi.grid, s.phi.values * s.phi.values.transpose(), Symmetry::symmetric};
}

PairKernel gamma_c(const HFBState& s) {
    return PairKernel{s.phi.grid, s.phi.values.conjugate() * s.phi.values.transpose(), Symmetry::hermitian};
}

Field density(const HFBState& s) {
    VectorXd r = s.gamma_p.values.diagonal().real() + s.phi.values.cwiseAbs2();
    return Field{s.phi.grid, r.cast<cplx>()};
}

Dynamics make_dynamics(const PotentialSpec& pot) {
    Dynamics d;
    d.grid = pot.scaled.grid;
    d.n = pot.n;
    d.v = pot.scaled;
    d.vmat = difference_matrix(pot.scaled);
    d.wmat = (d.grid.cell() * d.vmat).cast<cplx>();
    d.v_sup = sup_norm(pot.scaled);
    d.k2.resize(d.grid.size());
    for (Index i = 0; i < d.grid.size(); ++i) d.k2[i] = d.grid.freq_sq(i);
    return d;
}

double kinetic_trace(const MatrixXcd& gamma, const GridSpec& g) {
    const double m = static_cast<double>(g.size());
    MatrixXcd b = fft_x(fft_y(gamma, g), g, true) * m;
    double acc = 0.0;
    for (Index i = 0; i < g.size(); ++i) acc += g.freq_sq(i) * b(i, i).real();
    return g.cell() / m * acc;
}

EnergyReport energy_report(const HFBState& s, const Dynamics& dyn) {
    const GridSpec& g = dyn.grid;
    const double cell = g.cell();
    MatrixXcd lam = s.lambda_p.values + s.phi.values * s.phi.values.transpose();
    MatrixXcd gam = s.gamma_p.values + s.phi.values.conjugate() * s.phi.values.transpose();
    Field rho{g, gam.diagonal().real().cast<cplx>()};
    Field phi2{g, s.phi.values.cwiseAbs2().cast<cplx>()};

    EnergyReport r;
    r.trace_gamma = trace(gam, cell).real();
    r.kinetic = kinetic_trace(gam, g);
    const double c2 = cell * cell;
    r.potential_terms[0] = 0.5 * c2 * (dyn.vmat.array() * lam.cwiseAbs2().array()).sum();
    r.potential_terms[1] = 0.5 * c2 * (dyn.vmat.array() * gam.cwiseAbs2().array()).sum();
    Field vr = convolve_density(dyn.v, rho);
    r.potential_terms[2] = 0.5 * cell * rho.values.real().dot(vr.values.real());
    Field vp = convolve_density(dyn.v, phi2);
    r.potential_terms[3] = -cell * phi2.values.real().dot(vp.values.real());
    r.energy = r.kinetic + r.potential_terms[0] + r.potential_terms[1] + r.potential_terms[2] +
               r.potential_terms[3];
    return r;
}

EnergyReport with_drift(EnergyReport r, const EnergyReport& ref) {
    r.drift_trace = std::abs(r.trace_gamma - ref.trace_gamma);
    r.drift_energy = std::abs(r.energy - ref.energy) / std::max(1.0, std::abs(ref.energy));
    return r;
}

InitResult init_state(const Field& phi_shape, const PairKernel& k0, const Dynamics& dyn, const InitOptions& opt) {
    const GridSpec& g = dyn.grid;
    require_same_grid(phi_shape.grid, g, "init_state");
    require_same_grid(k0.grid, g, "init_state");
    double phi_norm = l2_norm(phi_shape);
    bool k_zero = k0.values.cwiseAbs().maxCoeff() == 0.0;
    if (phi_norm == 0.0 && k_zero) throw validation_error("init_state: phi profile and k0 are both zero");

    auto pair_of = [&](const PairKernel& k) {
        try {
            return sh_ch_from_k(k);
        } catch (const numerical_error&) {
            if (g.size() > 64) throw;
            return block_exp_oracle(k);
        }
    };
    auto pair_mass = [&](const BogoliubovPair& p) {
        double s = l2_norm(p.sh);
        return s * s / dyn.n;
    };

    InitResult out;
    out.k0 = k0;
    out.pair = pair_of(k0);
    double mass = pair_mass(out.pair);
    Field phi = zero_field(g);
    if (phi_norm == 0.0) {
        if (!opt.rescale_pairs) {
            if (std::abs(mass - 1.0) > 1e-12)
                throw validation_error("init_state: phi is zero and trace of the pair part is not 1");
        } else {
            auto f = [&](double s) {
                PairKernel k = k0;
                k.values *= s;
                return pair_mass(pair_of(k)) - 1.0;
            };
            double lo = 0.0, hi = 1.0;
            while (f(hi) < 0.0) {
                hi *= 2.0;
                if (hi > 1e3) throw numerical_error("init_state: cannot reach unit trace by rescaling k0");
            }
            for (int it = 0; it < 200 && hi - lo > 1e-16 * hi; ++it) {
                double mid = 0.5 * (lo + hi);
                (f(mid) < 0.0 ? lo : hi) = mid;
            }
            out.k0.values *= 0.5 * (lo + hi);
            out.pair = pair_of(out.k0);
        }
    } else {
        if (mass >= 1.0) throw validation_error("init_state: pair part alone reaches trace >= 1");
        phi.values = phi_shape.values * (std::sqrt(1.0 - mass) / phi_norm);
    }

    Densities d = assemble_densities(phi, out.pair, dyn.n);
    HFBState& s = out.state;
    s.t = 0.0;
    s.phi = phi;
    s.lambda_p = d.lambda_p;
    s.gamma_p = d.gamma_p;
    s.has_shadow = opt.shadows;
    if (opt.shadows) {
        s.lambda_c_shadow = d.lambda_c;
        s.gamma_c_shadow = d.gamma_c;
    }
    out.energy0 = energy_report(s, dyn).energy;
    out.c0 = std::max(1.0, out.energy0);
    return out;
}

namespace {

struct Vars {
    VectorXcd phi;
    MatrixXcd lp, gp, lc, gc;  // lc/gc empty without shadows
};

void axpy(Vars& out, const Vars& a, double c, const Vars& k) {
    out.phi = a.phi + c * k.phi;
    out.lp = a.lp + c * k.lp;
    out.gp = a.gp + c * k.gp;
    if (a.lc.size()) {
        out.lc = a.lc + c * k.lc;
        out.gc = a.gc + c * k.gc;
    }
}

// nonlinear part of the right-hand side, d/dt = -i (...)
Vars nonlinear_rhs(const Vars& s, const Dynamics& dyn) {
    const GridSpec& g = dyn.grid;
    const MatrixXcd& w = dyn.wmat;

    MatrixXcd lam = s.lp, gam = s.gp;
    lam.noalias() += s.phi * s.phi.transpose();
    gam.noalias() += s.phi.conjugate() * s.phi.transpose();
    Field rho{g, gam.diagonal().real().cast<cplx>()};
    VectorXcd uc = convolve_density(dyn.v, rho).values.real().cast<cplx>();

    Vars d;
    const MatrixXcd gpt = s.gp.transpose();
    VectorXcd x = w.cwiseProduct(gpt) * s.phi;
    VectorXcd y = w.cwiseProduct(s.lp) * s.phi.conjugate();
    d.phi = -1i * (uc.cwiseProduct(s.phi) + x + y);

    // w is real, so w o conj(m) = conj(w o m)
    const MatrixXcd wg = w.cwiseProduct(gam.conjugate());
    const MatrixXcd wl = w.cwiseProduct(lam);
    MatrixXcd a, b;
    a.noalias() = wg * s.lp;
    a.noalias() += wl * s.gp;
    b.noalias() = wg.conjugate() * s.gp;
    b.noalias() += wl.conjugate() * s.lp;

    MatrixXcd rl = uc.asDiagonal() * s.lp;
    rl.noalias() += s.lp * uc.asDiagonal();
    rl += wl / (g.cell() * dyn.n) + a + a.transpose();
    d.lp = -1i * rl;

    MatrixXcd rg = s.gp * uc.asDiagonal();
    rg.noalias() -= uc.asDiagonal() * s.gp;
    rg -= b - b.adjoint();
    d.gp = -1i * rg;

    if (s.lc.size()) {
        MatrixXcd c, e;
        c.noalias() = w.cwiseProduct(s.gp.conjugate()) * s.lc;
        c.noalias() += w.cwiseProduct(s.lp) * s.gc;
        MatrixXcd rlc = uc.asDiagonal() * s.lc + s.lc * uc.asDiagonal() + c + c.transpose();
        d.lc = -1i * rlc;
        e.noalias() = w.cwiseProduct(s.gp) * s.gc;
        e.noalias() += w.cwiseProduct(s.lp.conjugate()) * s.lc;
        MatrixXcd rgc = s.gc * uc.asDiagonal() - uc.asDiagonal() * s.gc;
        rgc -= e - e.adjoint();
        d.gc = -1i * rgc;
    }
    return d;
}

// exact free flow over tau: phi_hat e^{-i|xi|^2 tau}, Lambda-type
// e^{-i(|xi|^2+|eta|^2) tau}, Gamma-type e^{i(|xi|^2-|eta|^2) tau}
void kinetic(Vars& s, double tau, const Dynamics& dyn) {
    const GridSpec& g = dyn.grid;
    VectorXcd p(g.size());
    for (Index i = 0; i < g.size(); ++i) p[i] = std::exp(-1i * (dyn.k2[i] * tau));
    VectorXcd pc = p.conjugate();
    s.phi = ifft(fft(s.phi, g).cwiseProduct(p), g);
    // x transform, transpose, y transform; phases applied in the transposed layout
    auto pair_flow = [&](MatrixXcd& m, const VectorXcd& left) {
        fft_x_inplace(m, g);
        MatrixXcd t = m.transpose();
        fft_x_inplace(t, g);
        t = p.asDiagonal() * t * left.asDiagonal();
        fft_x_inplace(t, g, true);
        m = t.transpose();
        fft_x_inplace(m, g, true);
    };
    auto lam_type = [&](MatrixXcd& m) { pair_flow(m, p); };
    auto gam_type = [&](MatrixXcd& m) { pair_flow(m, pc); };
    lam_type(s.lp);
    gam_type(s.gp);
    if (s.lc.size()) {
        lam_type(s.lc);
        gam_type(s.gc);
    }
}

void rk4(Vars& s, double dt, const Dynamics& dyn) {
    if (dyn.v_sup == 0.0) return;  // every nonlinear term carries a factor of V
    Vars k1 = nonlinear_rhs(s, dyn), tmp;
    axpy(tmp, s, 0.5 * dt, k1);
    Vars k2 = nonlinear_rhs(tmp, dyn);
    axpy(tmp, s, 0.5 * dt, k2);
    Vars k3 = nonlinear_rhs(tmp, dyn);
    axpy(tmp, s, dt, k3);
    Vars k4 = nonlinear_rhs(tmp, dyn);
    const double w = dt / 6.0;
    s.phi += w * (k1.phi + 2.0 * k2.phi + 2.0 * k3.phi + k4.phi);
    s.lp += w * (k1.lp + 2.0 * k2.lp + 2.0 * k3.lp + k4.lp);
    s.gp += w * (k1.gp + 2.0 * k2.gp + 2.0 * k3.gp + k4.gp);
    if (s.lc.size()) {
        s.lc += w * (k1.lc + 2.0 * k2.lc + 2.0 * k3.lc + k4.lc);
        s.gc += w * (k1.gc + 2.0 * k2.gc + 2.0 * k3.gc + k4.gc);
    }
}

void require_stable(double dt, const Dynamics& dyn) {
    if (!(dt > 0.0)) throw validation_error("time step must be positive");
    if (dt * dyn.v_sup > 1.0)
        throw validation_error("stability bound violated: dt * ||V_N||_inf = " + std::to_string(dt * dyn.v_sup) +
                               " > 1");
}

void require_finite(const Vars& s, double t) {
    if (!s.phi.allFinite() || !s.lp.allFinite() || !s.gp.allFinite())
        throw numerical_error("non-finite values after step at t = " + std::to_string(t));
}

Vars to_vars(const HFBState& st) {
    Vars s{st.phi.values, st.lambda_p.values, st.gamma_p.values, {}, {}};
    if (st.has_shadow) {
        s.lc = st.lambda_c_shadow.values;
        s.gc = st.gamma_c_shadow.values;
    }
    return s;
}

HFBState to_state(const Vars& s, double t, bool shadow, const GridSpec& g) {
    HFBState out;
    out.t = t;
    out.phi = Field{g, s.phi};
    out.lambda_p = PairKernel{g, s.lp, Symmetry::symmetric};
    out.gamma_p = PairKernel{g, s.gp, Symmetry::hermitian};
    out.has_shadow = shadow;
    if (shadow) {
        out.lambda_c_shadow = PairKernel{g, s.lc, Symmetry::symmetric};
        out.gamma_c_shadow = PairKernel{g, s.gc, Symmetry::hermitian};
    }
    return out;
}

}  // namespace

HFBState step(const HFBState& st, double dt, const Dynamics& dyn) {
    require_stable(dt, dyn);
    Vars s = to_vars(st);
    kinetic(s, 0.5 * dt, dyn);
    rk4(s, dt, dyn);
    kinetic(s, 0.5 * dt, dyn);
    require_finite(s, st.t + dt);
    return to_state(s, st.t + dt, st.has_shadow, dyn.grid);
}

Trajectory evolve(const HFBState& s0, double t_final, double dt, int sample_every, const Dynamics& dyn) {
    if (!(t_final >= 0.0)) throw validation_error("T must be nonnegative");
    if (!(dt > 0.0)) throw validation_error("dt must be positive");
    if (sample_every < 1) throw validation_error("sample_every must be >= 1");
    const long long nsteps = std::llround(t_final / dt);
    if (std::abs(nsteps * dt - t_final) > 1e-9 * std::max(1.0, t_final))
        throw validation_error("T must be an integer multiple of dt");
    if (nsteps % sample_every != 0)
        throw validation_error("number of steps must be a multiple of sample_every");

    Trajectory tr;
    tr.grid = dyn.grid;
    tr.sample_dt = dt * sample_every;
    tr.meta.n = dyn.n;
    tr.meta.t_final = t_final;
    tr.meta.dt = dt;
    tr.meta.sample_every = sample_every;

    EnergyReport ref = energy_report(s0, dyn);
    auto record = [&](const HFBState& s) {
        EnergyReport e = with_drift(energy_report(s, dyn), ref);
        tr.max_drift_trace = std::max(tr.max_drift_trace, e.drift_trace);
        tr.max_drift_energy = std::max(tr.max_drift_energy, e.drift_energy);
        tr.max_symmetry_defect = std::max({tr.max_symmetry_defect,
                                           symmetry_defect(s.lambda_p.values, Symmetry::symmetric),
                                           symmetry_defect(s.gamma_p.values, Symmetry::hermitian)});
        tr.energies.push_back(e);
        if (s.has_shadow) {
            double dl = (s.lambda_c_shadow.values - s.phi.values * s.phi.values.transpose()).cwiseAbs().maxCoeff();
            double dg = (s.gamma_c_shadow.values - s.phi.values.conjugate() * s.phi.values.transpose())
                            .cwiseAbs()
                            .maxCoeff();
            tr.shadow_defect.push_back(std::max(dl, dg));
        }
        tr.states.push_back(s);
    };
    record(s0);
    if (nsteps == 0) return tr;
    require_stable(dt, dyn);
    // consecutive kinetic half steps are fused between samples
    Vars cur = to_vars(s0);
    kinetic(cur, 0.5 * dt, dyn);
    for (long long k = 1; k <= nsteps; ++k) {
        rk4(cur, dt, dyn);
        const double t = s0.t + k * dt;
        if (k % sample_every == 0) {
            kinetic(cur, 0.5 * dt, dyn);
            require_finite(cur, t);
            record(to_state(cur, t, s0.has_shadow, dyn.grid));
            if (k < nsteps) kinetic(cur, 0.5 * dt, dyn);
        } else {
            kinetic(cur, dt, dyn);
        }
    }
    return tr;
}

}  // namespace hfb
