#include "srx/image.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>

namespace srx {

Image::Image(int h, int w, int c)
    : height(h), width(w), channels(c),
      data(static_cast<std::size_t>(h) * w * c, 0.0) {}

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const { if (f) std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

} // namespace

Image load_image(const std::filesystem::path& path) {
    FilePtr fp(std::fopen(path.string().c_str(), "rb"));
    if (!fp)
        throw FileNotFound("cannot open " + path.string());

    png_byte header[8];
    if (std::fread(header, 1, 8, fp.get()) != 8 || png_sig_cmp(header, 0, 8))
        throw UnsupportedFormat(path.string() + " is not a PNG file");

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png_create_info_struct(png);
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw UnsupportedFormat("libpng failed to decode " + path.string());
    }
    png_init_io(png, fp.get());
    png_set_sig_bytes(png, 8);
    png_read_info(png, info);

    const png_uint_32 w = png_get_image_width(png, info);
    const png_uint_32 h = png_get_image_height(png, info);
    const int bit_depth = png_get_bit_depth(png, info);
    const int color_type = png_get_color_type(png, info);

    if (bit_depth != 8 ||
        (color_type != PNG_COLOR_TYPE_GRAY && color_type != PNG_COLOR_TYPE_RGB)) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw UnsupportedFormat(path.string() +
                                ": only 8-bit gray or RGB PNG without alpha is accepted");
    }

    const int channels = (color_type == PNG_COLOR_TYPE_RGB) ? 3 : 1;
    Image img(static_cast<int>(h), static_cast<int>(w), channels);

    std::vector<png_byte> row(static_cast<std::size_t>(w) * channels);
    for (png_uint_32 y = 0; y < h; ++y) {
        png_read_row(png, row.data(), nullptr);
        for (std::size_t i = 0; i < row.size(); ++i)
            img.data[static_cast<std::size_t>(y) * row.size() + i] = row[i] / 255.0;
    }
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return img;
}

void save_image(const Image& img, const std::filesystem::path& path) {
    FilePtr fp(std::fopen(path.string().c_str(), "wb"));
    if (!fp)
        throw IoError("cannot open " + path.string() + " for writing");

    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png_create_info_struct(png);
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw IoError("libpng failed to write " + path.string());
    }
    png_init_io(png, fp.get());
    const int color_type = (img.channels == 3) ? PNG_COLOR_TYPE_RGB : PNG_COLOR_TYPE_GRAY;
    png_set_IHDR(png, info, img.width, img.height, 8, color_type,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);

    std::vector<png_byte> row(static_cast<std::size_t>(img.width) * img.channels);
    for (int y = 0; y < img.height; ++y) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            // round-half-up quantization; 0.5 maps to byte 128
            const double v = img.data[static_cast<std::size_t>(y) * row.size() + i];
            const double q = std::floor(v * 255.0 + 0.5);
            row[i] = static_cast<png_byte>(std::clamp(q, 0.0, 255.0));
        }
        png_write_row(png, row.data());
    }
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

std::pair<Image, Image> split_pair(const Image& pair) {
    if (pair.width % 2 != 0)
        throw OddWidth("split_pair requires an even width, got " + std::to_string(pair.width));
    const int half = pair.width / 2;
    Image left(pair.height, half, pair.channels);
    Image right(pair.height, half, pair.channels);
    for (int y = 0; y < pair.height; ++y)
        for (int x = 0; x < half; ++x)
            for (int c = 0; c < pair.channels; ++c) {
                left.at(y, x, c) = pair.at(y, x, c);
                right.at(y, x, c) = pair.at(y, x + half, c);
            }
    return {std::move(left), std::move(right)};
}

Image hconcat(const Image& left, const Image& right) {
    if (left.height != right.height || left.channels != right.channels)
        throw ShapeMismatch("hconcat halves disagree in height or channels");
    Image out(left.height, left.width + right.width, left.channels);
    for (int y = 0; y < out.height; ++y)
        for (int x = 0; x < out.width; ++x)
            for (int c = 0; c < out.channels; ++c)
                out.at(y, x, c) = (x < left.width) ? left.at(y, x, c)
                                                   : right.at(y, x - left.width, c);
    return out;
}

Image resize_bilinear(const Image& img, int out_h, int out_w) {
    if (out_h == img.height && out_w == img.width)
        return img;
    Image out(out_h, out_w, img.channels);
    const double sy = static_cast<double>(img.height) / out_h;
    const double sx = static_cast<double>(img.width) / out_w;
    for (int y = 0; y < out_h; ++y) {
        const double fy = std::clamp((y + 0.5) * sy - 0.5, 0.0, img.height - 1.0);
        const int y0 = static_cast<int>(std::floor(fy));
        const int y1 = std::min(y0 + 1, img.height - 1);
        const double wy = fy - y0;
        for (int x = 0; x < out_w; ++x) {
            const double fx = std::clamp((x + 0.5) * sx - 0.5, 0.0, img.width - 1.0);
            const int x0 = static_cast<int>(std::floor(fx));
            const int x1 = std::min(x0 + 1, img.width - 1);
            const double wx = fx - x0;
            for (int c = 0; c < img.channels; ++c) {
                const double top = img.at(y0, x0, c) * (1.0 - wx) + img.at(y0, x1, c) * wx;
                const double bot = img.at(y1, x0, c) * (1.0 - wx) + img.at(y1, x1, c) * wx;
                out.at(y, x, c) = std::clamp(top * (1.0 - wy) + bot * wy, 0.0, 1.0);
            }
        }
    }
    return out;
}

Image resize_nearest(const Image& img, int out_h, int out_w) {
    if (out_h == img.height && out_w == img.width)
        return img;
    Image out(out_h, out_w, img.channels);
    const double sy = static_cast<double>(img.height) / out_h;
    const double sx = static_cast<double>(img.width) / out_w;
    for (int y = 0; y < out_h; ++y) {
        const int src_y = std::clamp(static_cast<int>(std::floor((y + 0.5) * sy)), 0, img.height - 1);
        for (int x = 0; x < out_w; ++x) {
            const int src_x = std::clamp(static_cast<int>(std::floor((x + 0.5) * sx)), 0, img.width - 1);
            for (int c = 0; c < img.channels; ++c)
                out.at(y, x, c) = img.at(src_y, src_x, c);
        }
    }
    return out;
}

} // namespace srx
