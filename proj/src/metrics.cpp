#include "dct2net/metrics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace dct2net {

double mse(const Image& a, const Image& b) {
    if (!a.same_shape(b)) {
        throw std::invalid_argument("mse: image dimensions differ");
    }
    double sum = 0.0;
    const auto pa = a.pixels();
    const auto pb = b.pixels();
    for (std::size_t i = 0; i < pa.size(); ++i) {
        const double d = pa[i] - pb[i];
        sum += d * d;
    }
    return sum / static_cast<double>(pa.size());
}

double psnr(const Image& a, const Image& b, double peak) {
    const double err = mse(a, b);
    if (err == 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    return 10.0 * std::log10(peak * peak / err);
}

} // namespace dct2net
