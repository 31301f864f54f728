#pragma once

#include "hfb/grid.hpp"

namespace hfb {

// Unnormalized forward DFT (sign -1); the inverse carries 1/M^d so that
// ifft(fft(f)) == f. Plans live in a thread_local Eigen::FFT.
void fft_block(cplx* data, const GridSpec& g, bool inverse);

VectorXcd fft(const VectorXcd& f, const GridSpec& g);
VectorXcd ifft(const VectorXcd& f, const GridSpec& g);

// pair kernels: x is the row index, y the column index
MatrixXcd fft_x(const MatrixXcd& a, const GridSpec& g, bool inverse = false);
MatrixXcd fft_y(const MatrixXcd& a, const GridSpec& g, bool inverse = false);
void fft_x_inplace(MatrixXcd& a, const GridSpec& g, bool inverse = false);
MatrixXcd fft_xy(const MatrixXcd& a, const GridSpec& g, bool inverse = false);

// 1-d DFT of arbitrary length, same conventions
void dft_inplace(cplx* data, Index n, bool inverse);
// 1-d DFT of every column
void dft_columns(MatrixXcd& m, bool inverse);

}  // namespace hfb
