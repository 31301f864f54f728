#include "hfb/potential.hpp"
#include "hfb/errors.hpp"
#include "hfb/fft.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <string>

namespace hfb {

double w_bump(double s) {
    double a = std::abs(s);
    if (a >= 1.0) return 0.0;
    return std::exp(1.0 - 1.0 / (1.0 - a * a));
}

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

double w_hat(double r) { return w_bump(2.0 * r); }

double autocorrelation(int dim, double r) {
    if (r >= 1.0) return 0.0;
    if (dim == 1) {
        const int n = 4096;
        const double d = 1.0 / n;
        double acc = 0.0;
        for (int i = 0; i <= n; ++i) {
            double eta = -0.5 + i * d;
            acc += w_hat(std::abs(eta)) * w_hat(std::abs(r - eta));
        }
        return acc * d / two_pi;
    }
    const int n = dim == 2 ? 400 : 80;
    const double d = 1.0 / n;
    double acc = 0.0;
    if (dim == 2) {
        for (int i = 0; i <= n; ++i) {
            double a = -0.5 + i * d;
            for (int j = 0; j <= n; ++j) {
                double b = -0.5 + j * d;
                double r1 = std::hypot(a, b);
                if (r1 >= 0.5) continue;
                double r2 = std::hypot(r - a, b);
                if (r2 >= 0.5) continue;
                acc += w_hat(r1) * w_hat(r2);
            }
        }
        return acc * d * d / (two_pi * two_pi);
    }
    for (int i = 0; i <= n; ++i) {
        double a = -0.5 + i * d;
        for (int j = 0; j <= n; ++j) {
            double b = -0.5 + j * d;
            for (int k = 0; k <= n; ++k) {
                double c = -0.5 + k * d;
                double r1 = std::sqrt(a * a + b * b + c * c);
                if (r1 >= 0.5) continue;
                double r2 = std::sqrt((r - a) * (r - a) + b * b + c * c);
                if (r2 >= 0.5) continue;
                acc += w_hat(r1) * w_hat(r2);
            }
        }
    }
    return acc * d * d * d / (two_pi * two_pi * two_pi);
}

// v on the grid from lattice coefficients (continuum convention)
VectorXcd synthesize(const GridSpec& g, const VectorXcd& hat) {
    VectorXcd v = ifft(hat, g) / g.cell();
    return v.real().cast<cplx>();
}

double clamp_negative(VectorXcd& v) {
    double worst = 0.0;
    for (Index i = 0; i < v.size(); ++i)
        if (v[i].real() < 0.0) {
            worst = std::max(worst, -v[i].real());
            v[i] = 0.0;
        }
    return worst;
}

}  // namespace

double vhat_unit(int dim, double r) {
    static std::mutex mu;
    static std::map<std::pair<int, long long>, double> cache;
    auto key = std::make_pair(dim, std::llround(r * 1e12));
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    double val = autocorrelation(dim, r);
    std::lock_guard<std::mutex> lock(mu);
    cache.emplace(key, val);
    return val;
}

double sup_norm(const Field& f) { return f.values.cwiseAbs().maxCoeff(); }

double lp_norm(const Field& f, double p) {
    if (std::isinf(p)) return sup_norm(f);
    return std::pow(f.grid.cell() * f.values.cwiseAbs().array().pow(p).sum(), 1.0 / p);
}

PotentialSpec build_base_potential(const GridSpec& g, double epsilon) {
    if (!(epsilon > 0.0)) throw validation_error("epsilon must be positive");
    if (!(g.nyquist() > 1.0)) throw validation_error("grid Nyquist must exceed 1 to resolve supp v_hat");
    const Index n = g.size();
    VectorXcd hat(n);
    for (Index i = 0; i < n; ++i) hat[i] = vhat_unit(g.dim, std::sqrt(g.freq_sq(i)));
    VectorXcd v = synthesize(g, hat);
    double l1 = g.cell() * v.cwiseAbs().sum();
    double linf = v.cwiseAbs().maxCoeff();
    double c = epsilon * (1.0 - 1e-6) / std::max(l1, linf);

    PotentialSpec p;
    p.epsilon = epsilon;
    p.amplitude = c;
    p.base_hat = hat * c;
    VectorXcd vals = v * c;
    p.clamp = clamp_negative(vals);
    p.base = Field{g, vals};

    double defect = 0.0;
    for (int j = 0; j < g.points / 2; ++j)
        defect = std::max(defect, vals[j + 1].real() - vals[j].real());
    p.monotonicity_defect = defect / vals[0].real();
    p.monotone = p.monotonicity_defect <= 1e-12;
    p.scaled = p.base;
    return p;
}

PotentialSpec zero_potential(const GridSpec& g) {
    PotentialSpec p;
    p.epsilon = 0.0;
    p.amplitude = 0.0;
    p.base = zero_field(g);
    p.base_hat = VectorXcd::Zero(g.size());
    p.scaled = p.base;
    return p;
}

PotentialSpec scale_potential(const PotentialSpec& base, double n, double beta) {
    const GridSpec& g = base.base.grid;
    if (!(n >= 1.0)) throw validation_error("N must be >= 1");
    if (!(beta > 0.0 && beta <= 1.0)) throw validation_error("beta must lie in (0, 1]");
    double dil = std::pow(n, beta);
    if (dil > g.nyquist())
        throw validation_error("N^beta = " + std::to_string(dil) + " exceeds Nyquist " +
                               std::to_string(g.nyquist()) + " of grid (dim=" + std::to_string(g.dim) +
                               ", points=" + std::to_string(g.points) +
                               ", length=" + std::to_string(g.length) + ")");
    PotentialSpec p = base;
    p.n = n;
    p.beta = beta;
    if (n == 1.0) {
        p.scaled = base.base;
        return p;
    }
    VectorXcd hat(g.size());
    for (Index i = 0; i < g.size(); ++i)
        hat[i] = base.amplitude * vhat_unit(g.dim, std::sqrt(g.freq_sq(i)) / dil);
    VectorXcd vals = synthesize(g, hat);
    p.clamp = clamp_negative(vals);
    p.scaled = Field{g, vals};
    return p;
}

Field convolve_density(const Field& v, const Field& rho) {
    require_same_grid(v.grid, rho.grid, "convolve_density");
    auto real_check = [](const VectorXcd& a, const char* what) {
        double s = a.cwiseAbs().maxCoeff();
        if (a.imag().cwiseAbs().maxCoeff() > 1e-12 * std::max(s, 1e-300))
            throw validation_error(std::string("convolve_density: ") + what + " must be real");
    };
    real_check(v.values, "V");
    real_check(rho.values, "rho");
    const GridSpec& g = v.grid;
    VectorXcd out = ifft(fft(v.values, g).cwiseProduct(fft(rho.values, g)), g) * g.cell();
    return Field{g, out.real().cast<cplx>()};
}

}  // namespace hfb
