#include "hfb/grid.hpp"
#include "hfb/errors.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace hfb {

double GridSpec::cell() const { return std::pow(spacing(), dim); }

Index GridSpec::size() const {
    Index n = 1;
    for (int a = 0; a < dim; ++a) n *= points;
    return n;
}

double GridSpec::nyquist() const { return std::numbers::pi * points / length; }

double GridSpec::wavenumber(int i) const { return 2.0 * std::numbers::pi * mode(i) / length; }

std::array<int, 3> GridSpec::unflatten(Index flat) const {
    std::array<int, 3> idx{0, 0, 0};
    for (int a = 0; a < dim; ++a) {
        idx[a] = static_cast<int>(flat % points);
        flat /= points;
    }
    return idx;
}

Index GridSpec::flatten(const std::array<int, 3>& idx) const {
    Index flat = 0;
    for (int a = dim - 1; a >= 0; --a) flat = flat * points + idx[a];
    return flat;
}

Vec3 GridSpec::freq(Index flat) const {
    auto idx = unflatten(flat);
    Vec3 xi{0.0, 0.0, 0.0};
    for (int a = 0; a < dim; ++a) xi[a] = wavenumber(idx[a]);
    return xi;
}

double GridSpec::freq_sq(Index flat) const {
    auto xi = freq(flat);
    return xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
}

Vec3 GridSpec::position(Index flat) const {
    auto idx = unflatten(flat);
    Vec3 x{0.0, 0.0, 0.0};
    for (int a = 0; a < dim; ++a) x[a] = idx[a] * spacing();
    return x;
}

Index GridSpec::difference(Index a, Index b) const {
    auto ia = unflatten(a), ib = unflatten(b);
    std::array<int, 3> d{0, 0, 0};
    for (int k = 0; k < dim; ++k) d[k] = ((ia[k] - ib[k]) % points + points) % points;
    return flatten(d);
}

GridSpec make_grid(int dim, int points, double length) {
    if (dim < 1 || dim > 3) throw validation_error("dim must be 1, 2 or 3");
    if (points < 8 || (points & (points - 1)) != 0)
        throw validation_error("points must be power of two (>= 8), got " + std::to_string(points));
    if (!(length > 0.0) || !std::isfinite(length)) throw validation_error("length must be positive");
    return GridSpec{dim, points, length};
}

void require_same_grid(const GridSpec& a, const GridSpec& b, const char* where) {
    if (!(a == b)) throw validation_error(std::string(where) + ": grid mismatch");
}

Field zero_field(const GridSpec& g) { return Field{g, VectorXcd::Zero(g.size())}; }

PairKernel zero_kernel(const GridSpec& g, Symmetry s) {
    return PairKernel{g, MatrixXcd::Zero(g.size(), g.size()), s};
}

PairKernel delta_kernel(const GridSpec& g) {
    MatrixXcd id = MatrixXcd::Identity(g.size(), g.size()) / g.cell();
    return PairKernel{g, std::move(id), Symmetry::hermitian};
}

PairKernel outer(const Field& a, const Field& b, Symmetry s) {
    require_same_grid(a.grid, b.grid, "outer");
    return PairKernel{a.grid, a.values * b.values.transpose(), s};
}

double symmetry_defect(const MatrixXcd& a, Symmetry s) {
    if (s == Symmetry::none || a.size() == 0) return 0.0;
    double scale = a.cwiseAbs().maxCoeff();
    if (scale == 0.0) return 0.0;
    double d = s == Symmetry::symmetric ? (a - a.transpose()).cwiseAbs().maxCoeff()
                                        : (a - a.adjoint()).cwiseAbs().maxCoeff();
    return d / scale;
}

void check_symmetry(const PairKernel& k, double tol) {
    double d = symmetry_defect(k.values, k.symmetry);
    if (d > tol)
        throw numerical_error("symmetry tag violated: relative defect " + std::to_string(d));
}

bool all_finite(const MatrixXcd& a) { return a.allFinite(); }
bool all_finite(const VectorXcd& a) { return a.allFinite(); }

double l2_norm(const Field& f) { return std::sqrt(f.grid.cell()) * f.values.norm(); }

double l2_norm(const PairKernel& k) { return k.grid.cell() * k.values.norm(); }

}  // namespace hfb
