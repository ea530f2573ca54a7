#pragma once

#include <string>

#include "srx/image.hpp"

namespace srx {

enum class Direction { lower_better, higher_better };

struct MetricValue {
    std::string name;
    double value = 0.0;
    Direction direction = Direction::lower_better;
};

/// sqrt of the mean squared difference over all pixels and channels.
MetricValue rmse(const Image& a, const Image& b);

/// Mean absolute difference over all pixels and channels.
MetricValue mae(const Image& a, const Image& b);

/// Windowed SSIM: 11x11 Gaussian window sigma=1.5, C1=(0.01)^2, C2=(0.03)^2
/// for dynamic range 1, valid window positions only, per channel then
/// unweighted channel average. Needs height and width >= 11.
MetricValue ssim(const Image& a, const Image& b);

/// Global zero-mean normalized cross-correlation over the flattened
/// all-channel signal. Throws DegenerateInput when either image has zero
/// variance instead of returning 0 or NaN.
MetricValue ncc(const Image& a, const Image& b);

} // namespace srx
