#pragma once

#include <span>
#include <vector>

#include "jsbl/linear_map.hpp"
#include "jsbl/model.hpp"

namespace jsbl {

/// A linear system (operator, data) after realification or whitening.
struct RealSystem {
  LinearMap map;
  Vector data;
};

LinearMap identity_operator(Index n);

/// Midpoint-quadrature discretisation of convolution with the kernel
/// k(s) = exp(-s^2 / (2 gamma^2)) / (2 pi gamma^2) on n points with h = 1/n.
LinearMap gaussian_blur_operator(Index n, double gamma);

/// (n-1) x n forward differences: row k maps x to x[k+1] - x[k].
LinearMap difference_operator(Index n);

/// Anisotropic first-order differences of an nx-by-ny image stored column-major
/// (pixel (i, j) at index i + nx*j). Rows: all vertical differences
/// x(i+1, j) - x(i, j) first, ordered i + (nx-1)*j, then all horizontal
/// differences x(i, j+1) - x(i, j), ordered i + nx*j.
LinearMap gradient2d_operator(Index nx, Index ny);

/// Orthonormal DCT-II matrix; row k is c_k cos(pi (n + 1/2) k / N).
Matrix dct_matrix(Index N);

/// Rows `omega` (0-based, distinct) of the orthonormal DCT-II.
LinearMap subsampled_dct_operator(Index N, std::span<const Index> omega);

/// Radial sampling pattern over an n-by-n centred frequency grid. Indices are
/// column-major over the centred grid, (row, col) -> row + n*col, with the DC
/// term at (n/2, n/2). Returned sorted and duplicate-free.
std::vector<Index> radial_sampling_mask(Index n, Index n_lines, double angle_offset);

/// Linear index of the DC term in radial_sampling_mask coordinates.
Index mask_center_index(Index n);

/// Unitary 2-D DFT of a column-major n-by-n image followed by selection of the
/// frequencies in `mask` (centred grid indices, see radial_sampling_mask).
ComplexLinearMap subsampled_dft_operator(std::span<const Index> mask, Index n);

/// Stack [Re(F); Im(F)] and [Re(y); Im(y)] for an operator on real inputs.
RealSystem realify(const ComplexLinearMap& map, const ComplexVector& y);

/// Scale rows by `scale` (length rows()).
LinearMap row_scaled(const LinearMap& map, Vector scale);

/// Returns (C^{-1} F, C^{-1} y) with cov = C C^T. Diagonal covariances keep
/// the operator's structure; general ones densify it.
RealSystem whiten(const LinearMap& map, const Vector& y, const Matrix& cov);

/// Whitens every signal that carries a noise covariance and clears the list.
MMVProblem whiten_problem(const MMVProblem& problem);

}  // namespace jsbl
