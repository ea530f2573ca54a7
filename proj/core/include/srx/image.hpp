#pragma once

#include <cstddef>
#include <filesystem>
#include <utility>
#include <vector>

#include "srx/errors.hpp"

namespace srx {

/// Row-major H×W×C raster of intensities in [0,1]. Channels is 1 (gray)
/// or 3 (RGB). Immutable by convention once filled; all operations below
/// return fresh images.
struct Image {
    int height = 0;
    int width = 0;
    int channels = 1;
    std::vector<double> data;

    Image() = default;
    Image(int h, int w, int c);

    double at(int y, int x, int c) const {
        return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
    }
    double& at(int y, int x, int c) {
        return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
    }

    std::size_t pixel_count() const {
        return static_cast<std::size_t>(height) * width;
    }
    bool same_shape(const Image& o) const {
        return height == o.height && width == o.width && channels == o.channels;
    }
};

/// Loads an 8-bit gray or RGB PNG. Intensities are byte/255 exactly.
/// Throws FileNotFound or UnsupportedFormat (palette, alpha, 16-bit, non-PNG).
Image load_image(const std::filesystem::path& path);

/// Writes an 8-bit PNG, quantizing each intensity as round-half-up(i*255).
void save_image(const Image& img, const std::filesystem::path& path);

/// Splits a side-by-side composite down the middle. Width must be even.
std::pair<Image, Image> split_pair(const Image& pair);

/// Joins two equally-sized halves left|right. Inverse of split_pair.
Image hconcat(const Image& left, const Image& right);

/// Bilinear resize with the half-pixel-center convention: output (y,x)
/// samples source ((y+0.5)*h/out_h - 0.5, (x+0.5)*w/out_w - 0.5), neighbor
/// coordinates clamped to bounds, result clamped to [0,1]. No prefilter.
Image resize_bilinear(const Image& img, int out_h, int out_w);

/// Nearest-neighbor resize, same coordinate convention:
/// source pixel floor((y+0.5)*h/out_h), floor((x+0.5)*w/out_w), clamped.
Image resize_nearest(const Image& img, int out_h, int out_w);

} // namespace srx
