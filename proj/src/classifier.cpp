#include "dct2net/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace dct2net {

namespace {

Image gaussian_blur(const Image& img, double sigma) {
    const int radius = static_cast<int>(std::ceil(3.0 * sigma));
    std::vector<double> kernel(static_cast<std::size_t>(2 * radius + 1));
    double total = 0.0;
    for (int k = -radius; k <= radius; ++k) {
        const double w = std::exp(-0.5 * k * k / (sigma * sigma));
        kernel[static_cast<std::size_t>(k + radius)] = w;
        total += w;
    }
    for (double& w : kernel) {
        w /= total;
    }
    const int h = img.height();
    const int w = img.width();
    Image rows(h, w);
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            double acc = 0.0;
            for (int k = -radius; k <= radius; ++k) {
                acc += kernel[static_cast<std::size_t>(k + radius)] * img(r, reflect_index(c + k, w));
            }
            rows(r, c) = acc;
        }
    }
    Image out(h, w);
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            double acc = 0.0;
            for (int k = -radius; k <= radius; ++k) {
                acc += kernel[static_cast<std::size_t>(k + radius)] * rows(reflect_index(r + k, h), c);
            }
            out(r, c) = acc;
        }
    }
    return out;
}

} // namespace

void CannyParams::validate() const {
    if (!(gauss_sigma > 0.0)) {
        throw std::invalid_argument("Canny blur sigma must be positive");
    }
    if (!(low >= 0.0 && low <= high)) {
        throw std::invalid_argument("Canny thresholds need 0 <= low <= high");
    }
    if (dilation < 1 || dilation % 2 == 0) {
        throw std::invalid_argument("dilation must be odd and >= 1");
    }
}

BinaryMask canny_edges(const Image& img, const CannyParams& params) {
    params.validate();
    const int h = img.height();
    const int w = img.width();
    Image scaled(h, w);
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            scaled(r, c) = img(r, c) / 255.0;
        }
    }
    const Image smooth = gaussian_blur(scaled, params.gauss_sigma);
    auto at = [&](int r, int c) { return smooth(reflect_index(r, h), reflect_index(c, w)); };

    Image magnitude(h, w);
    std::vector<std::uint8_t> direction(static_cast<std::size_t>(h) * static_cast<std::size_t>(w));
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            const double gx = (at(r - 1, c + 1) + 2.0 * at(r, c + 1) + at(r + 1, c + 1)) -
                              (at(r - 1, c - 1) + 2.0 * at(r, c - 1) + at(r + 1, c - 1));
            const double gy = (at(r + 1, c - 1) + 2.0 * at(r + 1, c) + at(r + 1, c + 1)) -
                              (at(r - 1, c - 1) + 2.0 * at(r - 1, c) + at(r - 1, c + 1));
            magnitude(r, c) = std::hypot(gx, gy);
            double angle = std::atan2(gy, gx) * 180.0 / std::numbers::pi;
            if (angle < 0.0) {
                angle += 180.0;
            }
            // 0: horizontal gradient, 1: 45 deg, 2: vertical, 3: 135 deg
            const int bin = static_cast<int>(std::floor((angle + 22.5) / 45.0)) % 4;
            direction[static_cast<std::size_t>(r) * w + c] = static_cast<std::uint8_t>(bin);
        }
    }

    constexpr int kStep[4][2] = {{0, 1}, {1, 1}, {1, 0}, {1, -1}};
    auto mag_or_zero = [&](int r, int c) {
        return (r < 0 || r >= h || c < 0 || c >= w) ? 0.0 : magnitude(r, c);
    };
    // 0 none, 1 weak, 2 strong
    std::vector<std::uint8_t> level(direction.size(), 0);
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            const double m = magnitude(r, c);
            if (m <= 0.0 || m < params.low) {
                continue;
            }
            const auto* s = kStep[direction[static_cast<std::size_t>(r) * w + c]];
            if (m < mag_or_zero(r + s[0], c + s[1]) || m < mag_or_zero(r - s[0], c - s[1])) {
                continue;
            }
            level[static_cast<std::size_t>(r) * w + c] = m >= params.high ? 2 : 1;
        }
    }

    BinaryMask edges(h, w);
    std::deque<std::pair<int, int>> queue;
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            if (level[static_cast<std::size_t>(r) * w + c] == 2) {
                edges.set(r, c, true);
                queue.emplace_back(r, c);
            }
        }
    }
    while (!queue.empty()) {
        const auto [r, c] = queue.front();
        queue.pop_front();
        for (int dr = -1; dr <= 1; ++dr) {
            for (int dc = -1; dc <= 1; ++dc) {
                const int nr = r + dr;
                const int nc = c + dc;
                if (nr < 0 || nr >= h || nc < 0 || nc >= w || edges(nr, nc)) {
                    continue;
                }
                if (level[static_cast<std::size_t>(nr) * w + nc] != 0) {
                    edges.set(nr, nc, true);
                    queue.emplace_back(nr, nc);
                }
            }
        }
    }
    return edges;
}

BinaryMask canny_mask(const Image& img, const CannyParams& params) {
    return dilate(canny_edges(img, params), params.dilation);
}

BinaryMask dilate(const BinaryMask& mask, int k) {
    if (k < 1 || k % 2 == 0) {
        throw std::invalid_argument("dilation kernel side must be odd and >= 1");
    }
    const int h = mask.height();
    const int w = mask.width();
    const int radius = k / 2;
    // A mirrored pixel lies inside the window already, so reflect padding
    // reduces to clamping the window to the image.
    BinaryMask rows(h, w);
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            bool on = false;
            for (int cc = std::max(0, c - radius); cc <= std::min(w - 1, c + radius) && !on; ++cc) {
                on = mask(r, cc);
            }
            rows.set(r, c, on);
        }
    }
    BinaryMask out(h, w);
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            bool on = false;
            for (int rr = std::max(0, r - radius); rr <= std::min(h - 1, r + radius) && !on; ++rr) {
                on = rows(rr, c);
            }
            out.set(r, c, on);
        }
    }
    return out;
}

Image tv_map(const Image& img, int window) {
    if (window < 1 || window % 2 == 0) {
        throw std::invalid_argument("TV window must be odd and >= 1");
    }
    const int h = img.height();
    const int w = img.width();
    Image local(h, w);
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            local(r, c) = std::abs(img(r, reflect_index(c + 1, w)) - img(r, c)) +
                          std::abs(img(reflect_index(r + 1, h), c) - img(r, c));
        }
    }
    const int radius = window / 2;
    Image out(h, w);
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            double sum = 0.0;
            for (int dr = -radius; dr <= radius; ++dr) {
                for (int dc = -radius; dc <= radius; ++dc) {
                    sum += local(reflect_index(r + dr, h), reflect_index(c + dc, w));
                }
            }
            out(r, c) = sum;
        }
    }
    return out;
}

BinaryMask tv_mask(const Image& img, int window, double percentile) {
    if (!(percentile > 0.0 && percentile < 1.0)) {
        throw std::invalid_argument("TV percentile must lie in (0, 1)");
    }
    const Image tv = tv_map(img, window);
    std::vector<double> sorted(tv.pixels().begin(), tv.pixels().end());
    std::sort(sorted.begin(), sorted.end());
    const auto rank = static_cast<std::size_t>(std::ceil(percentile * static_cast<double>(sorted.size())));
    const double threshold = sorted[std::max<std::size_t>(rank, 1) - 1];
    BinaryMask mask(img.height(), img.width());
    for (int r = 0; r < img.height(); ++r) {
        for (int c = 0; c < img.width(); ++c) {
            mask.set(r, c, tv(r, c) > threshold);
        }
    }
    return mask;
}

} // namespace dct2net
