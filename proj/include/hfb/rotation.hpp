#pragma once

#include "hfb/grid.hpp"

namespace hfb {

enum class RotationDirection { forward, inverse };

// Exact lattice shear. forward: R(u, s) = K(u + s, s), i.e. rows index the
// difference u = x - y and columns the base point s = y; the sum coordinate
// is w = x + y = u + 2s (mod L). Each sample carries measure h^d in u and
// 2^d h^d in w, so L2 norms over (u, w) are 2^{d/2} times L2 over (x, y).
PairKernel rotate_pair_coords(const PairKernel& k, RotationDirection dir);
MatrixXcd rotate_pair_coords(const MatrixXcd& k, const GridSpec& g, RotationDirection dir);

// flat index of the sum coordinate w = u + 2s
Index w_index(const GridSpec& g, Index u, Index s);
double rotation_l2_factor(int dim);
double rotated_w_weight(const GridSpec& g);  // 2^d h^d

}  // namespace hfb
