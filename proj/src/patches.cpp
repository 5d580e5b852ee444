#include "dct2net/patches.hpp"

#include <stdexcept>

namespace dct2net {

namespace {

void check_band(const Image& img, int p, int first_row, int rows) {
    if (p < 1 || p > img.height() || p > img.width()) {
        throw std::invalid_argument("patch side does not fit the image");
    }
    const int grid_rows = img.height() - p + 1;
    if (first_row < 0 || rows < 0 || first_row + rows > grid_rows) {
        throw std::out_of_range("patch rows outside the patch grid");
    }
}

} // namespace

Eigen::MatrixXd im2col(const Image& img, int p, int first_row, int rows) {
    check_band(img, p, first_row, rows);
    const int grid_cols = img.width() - p + 1;
    Eigen::MatrixXd cols(p * p, static_cast<Eigen::Index>(rows) * grid_cols);
    const auto pix = img.pixels();
    const std::size_t stride = static_cast<std::size_t>(img.width());
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < grid_cols; ++c) {
            double* dst = cols.col(static_cast<Eigen::Index>(r) * grid_cols + c).data();
            for (int u = 0; u < p; ++u) {
                const double* src = pix.data() + (first_row + r + u) * stride + c;
                for (int v = 0; v < p; ++v) {
                    dst[u * p + v] = src[v];
                }
            }
        }
    }
    return cols;
}

PatchStack extract_patches(const Image& img, int p) {
    PatchStack stack;
    stack.p = p;
    stack.grid_rows = img.height() - p + 1;
    stack.grid_cols = img.width() - p + 1;
    stack.values = im2col(img, p, 0, stack.grid_rows);
    return stack;
}

void col2im_add(const Eigen::MatrixXd& cols, const Eigen::VectorXd* weights, int p,
                int first_row, Image& accum) {
    const int grid_cols = accum.width() - p + 1;
    if (cols.rows() != p * p || cols.cols() % grid_cols != 0) {
        throw std::invalid_argument("col2im_add: column block does not match patch grid");
    }
    const int rows = static_cast<int>(cols.cols() / grid_cols);
    check_band(accum, p, first_row, rows);
    auto pix = accum.pixels();
    const std::size_t stride = static_cast<std::size_t>(accum.width());
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < grid_cols; ++c) {
            const Eigen::Index t = static_cast<Eigen::Index>(r) * grid_cols + c;
            const double w = weights != nullptr ? (*weights)[t] : 1.0;
            const double* src = cols.col(t).data();
            for (int u = 0; u < p; ++u) {
                double* dst = pix.data() + (first_row + r + u) * stride + c;
                for (int v = 0; v < p; ++v) {
                    dst[v] += w * src[u * p + v];
                }
            }
        }
    }
}

void spread_weights_add(const Eigen::VectorXd& weights, int p, int first_row, Image& accum) {
    const int grid_cols = accum.width() - p + 1;
    if (weights.size() % grid_cols != 0) {
        throw std::invalid_argument("spread_weights_add: weight count does not match patch grid");
    }
    const int rows = static_cast<int>(weights.size() / grid_cols);
    check_band(accum, p, first_row, rows);
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < grid_cols; ++c) {
            const double w = weights[static_cast<Eigen::Index>(r) * grid_cols + c];
            for (int u = 0; u < p; ++u) {
                for (int v = 0; v < p; ++v) {
                    accum(first_row + r + u, c + v) += w;
                }
            }
        }
    }
}

} // namespace dct2net
