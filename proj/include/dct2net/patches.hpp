#pragma once

#include <Eigen/Dense>

#include "dct2net/image.hpp"

namespace dct2net {

/// Every p x p patch of a (padded) image, one vectorized patch per column.
///
/// Patch t has its top-left corner at (t / grid_cols, t % grid_cols) and entry
/// u * p + v holds the pixel at offset (u, v) inside it, so that for a
/// reflect-padded image the grid has exactly one patch per original pixel.
struct PatchStack {
    int p = 0;
    int grid_rows = 0;
    int grid_cols = 0;
    Eigen::MatrixXd values; // p^2 x (grid_rows * grid_cols)

    Eigen::Index count() const { return values.cols(); }
};

/// Extracts patch rows [first_row, first_row + rows) of the patch grid of img.
Eigen::MatrixXd im2col(const Image& img, int p, int first_row, int rows);

/// All patches of img.
PatchStack extract_patches(const Image& img, int p);

/// Adds column t of cols (scaled by weights[t] when weights is non-null) back
/// onto the pixels of patch t. Columns cover patch rows starting at first_row;
/// accum has the full size of the image the patches came from.
void col2im_add(const Eigen::MatrixXd& cols, const Eigen::VectorXd* weights, int p,
                int first_row, Image& accum);

/// Adds weights[t] to every pixel covered by patch t.
void spread_weights_add(const Eigen::VectorXd& weights, int p, int first_row, Image& accum);

} // namespace dct2net
