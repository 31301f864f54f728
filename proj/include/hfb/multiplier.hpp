#pragma once

#include "hfb/grid.hpp"

#include <functional>

namespace hfb {

// which coordinate block a symbol acts on; x-y and x+y evaluate a one-variable
// symbol at xi-eta and xi+eta
enum class Axes { x, y, x_minus_y, x_plus_y, both };

struct FourierMultiplier {
    Axes axes = Axes::x;
    std::function<cplx(const Vec3& xi, const Vec3& eta)> symbol;
};

double norm3(const Vec3& v);
Vec3 add3(const Vec3& a, const Vec3& b);
Vec3 sub3(const Vec3& a, const Vec3& b);

FourierMultiplier on_axes(Axes a, std::function<cplx(const Vec3&)> s);
// <nabla>^alpha, symbol (1+|zeta|^2)^{alpha/2}
FourierMultiplier bracket(double alpha, Axes a);
FourierMultiplier identity_multiplier(Axes a = Axes::x);
FourierMultiplier operator*(const FourierMultiplier& a, const FourierMultiplier& b);

VectorXcd symbol_table(const GridSpec& g, const FourierMultiplier& m);       // fields
MatrixXcd symbol_table_pair(const GridSpec& g, const FourierMultiplier& m);  // kernels
double max_modulus(const GridSpec& g, const FourierMultiplier& m, bool pair);

Field apply_multiplier(const Field& f, const FourierMultiplier& m);
PairKernel apply_multiplier(const PairKernel& k, const FourierMultiplier& m);
MatrixXcd apply_multiplier(const MatrixXcd& k, const GridSpec& g, const FourierMultiplier& m);

}  // namespace hfb
