#pragma once

#include <Eigen/Dense>

#include <array>
#include <complex>

namespace hfb {

using cplx = std::complex<double>;
using Index = Eigen::Index;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;
using Vec3 = std::array<double, 3>;

// Periodic torus [0,L)^d sampled with M points per axis. Flat index
// i0 + M*i1 + M^2*i2, axis 0 fastest. Frequencies use FFT storage order
// (m = 0..M/2-1, -M/2..-1) but the lattice is the centered one.
struct GridSpec {
    int dim = 1;
    int points = 8;
    double length = 1.0;

    double spacing() const { return length / points; }
    double cell() const;  // h^d
    Index size() const;   // M^d
    double nyquist() const;
    int mode(int i) const { return i < points / 2 ? i : i - points; }
    double wavenumber(int i) const;
    std::array<int, 3> unflatten(Index flat) const;
    Index flatten(const std::array<int, 3>& idx) const;
    Vec3 freq(Index flat) const;
    double freq_sq(Index flat) const;
    Vec3 position(Index flat) const;
    // flat index of (a - b) mod M per axis
    Index difference(Index a, Index b) const;

    bool operator==(const GridSpec&) const = default;
};

GridSpec make_grid(int dim, int points, double length);
void require_same_grid(const GridSpec& a, const GridSpec& b, const char* where);

struct Field {
    GridSpec grid;
    VectorXcd values;
};

enum class Symmetry { none, symmetric, hermitian };

struct PairKernel {
    GridSpec grid;
    MatrixXcd values;  // (x, y)
    Symmetry symmetry = Symmetry::none;
};

Field zero_field(const GridSpec& g);
PairKernel zero_kernel(const GridSpec& g, Symmetry s = Symmetry::none);
// identity / h^d
PairKernel delta_kernel(const GridSpec& g);
// a(x) b(y)
PairKernel outer(const Field& a, const Field& b, Symmetry s = Symmetry::none);

// max |A - A^T| (or A^dagger) relative to max |A|
double symmetry_defect(const MatrixXcd& a, Symmetry s);
void check_symmetry(const PairKernel& k, double tol);
bool all_finite(const MatrixXcd& a);
bool all_finite(const VectorXcd& a);

// discrete L2 norms with the h^d / h^{2d} weights
double l2_norm(const Field& f);
double l2_norm(const PairKernel& k);

}  // namespace hfb
