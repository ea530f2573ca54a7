#include "srx/metrics.hpp"

#include <array>
#include <cmath>
#include <vector>

namespace srx {

namespace {

void require_same_shape(const Image& a, const Image& b, const char* op) {
    if (!a.same_shape(b))
        throw ShapeMismatch(std::string(op) + ": image shapes differ");
}

constexpr int kSsimWindow = 11;
constexpr double kSsimSigma = 1.5;
constexpr double kSsimC1 = 0.01 * 0.01; // (K1*L)^2, L=1
constexpr double kSsimC2 = 0.03 * 0.03;

std::array<double, kSsimWindow> gaussian_kernel() {
    std::array<double, kSsimWindow> k{};
    const int half = kSsimWindow / 2;
    double sum = 0.0;
    for (int i = 0; i < kSsimWindow; ++i) {
        const double d = i - half;
        k[i] = std::exp(-d * d / (2.0 * kSsimSigma * kSsimSigma));
        sum += k[i];
    }
    for (double& v : k) v /= sum;
    return k;
}

// Valid-mode separable Gaussian filter of one channel plane.
// in is H×W, out is (H-10)×(W-10).
std::vector<double> gaussian_valid(const std::vector<double>& in, int h, int w) {
    static const std::array<double, kSsimWindow> k = gaussian_kernel();
    const int ow = w - kSsimWindow + 1;
    const int oh = h - kSsimWindow + 1;
    std::vector<double> rows(static_cast<std::size_t>(h) * ow);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < ow; ++x) {
            double s = 0.0;
            for (int i = 0; i < kSsimWindow; ++i)
                s += k[i] * in[static_cast<std::size_t>(y) * w + x + i];
            rows[static_cast<std::size_t>(y) * ow + x] = s;
        }
    std::vector<double> out(static_cast<std::size_t>(oh) * ow);
    for (int y = 0; y < oh; ++y)
        for (int x = 0; x < ow; ++x) {
            double s = 0.0;
            for (int i = 0; i < kSsimWindow; ++i)
                s += k[i] * rows[static_cast<std::size_t>(y + i) * ow + x];
            out[static_cast<std::size_t>(y) * ow + x] = s;
        }
    return out;
}

std::vector<double> extract_channel(const Image& img, int c) {
    std::vector<double> plane(img.pixel_count());
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x)
            plane[static_cast<std::size_t>(y) * img.width + x] = img.at(y, x, c);
    return plane;
}

} // namespace

MetricValue rmse(const Image& a, const Image& b) {
    require_same_shape(a, b, "rmse");
    double sum = 0.0;
    for (std::size_t i = 0; i < a.data.size(); ++i) {
        const double d = a.data[i] - b.data[i];
        sum += d * d;
    }
    return {"RMSE", std::sqrt(sum / a.data.size()), Direction::lower_better};
}

MetricValue mae(const Image& a, const Image& b) {
    require_same_shape(a, b, "mae");
    double sum = 0.0;
    for (std::size_t i = 0; i < a.data.size(); ++i)
        sum += std::abs(a.data[i] - b.data[i]);
    return {"MAE", sum / a.data.size(), Direction::lower_better};
}

MetricValue ssim(const Image& a, const Image& b) {
    require_same_shape(a, b, "ssim");
    if (a.height < kSsimWindow || a.width < kSsimWindow)
        throw TooSmall("ssim requires images at least 11x11");

    double channel_sum = 0.0;
    for (int c = 0; c < a.channels; ++c) {
        const std::vector<double> pa = extract_channel(a, c);
        const std::vector<double> pb = extract_channel(b, c);
        std::vector<double> pa2(pa.size()), pb2(pa.size()), pab(pa.size());
        for (std::size_t i = 0; i < pa.size(); ++i) {
            pa2[i] = pa[i] * pa[i];
            pb2[i] = pb[i] * pb[i];
            pab[i] = pa[i] * pb[i];
        }
        const int h = a.height, w = a.width;
        const std::vector<double> mu_a = gaussian_valid(pa, h, w);
        const std::vector<double> mu_b = gaussian_valid(pb, h, w);
        const std::vector<double> m_a2 = gaussian_valid(pa2, h, w);
        const std::vector<double> m_b2 = gaussian_valid(pb2, h, w);
        const std::vector<double> m_ab = gaussian_valid(pab, h, w);

        double map_sum = 0.0;
        for (std::size_t i = 0; i < mu_a.size(); ++i) {
            const double va = m_a2[i] - mu_a[i] * mu_a[i];
            const double vb = m_b2[i] - mu_b[i] * mu_b[i];
            const double cov = m_ab[i] - mu_a[i] * mu_b[i];
            const double num = (2.0 * mu_a[i] * mu_b[i] + kSsimC1) * (2.0 * cov + kSsimC2);
            const double den = (mu_a[i] * mu_a[i] + mu_b[i] * mu_b[i] + kSsimC1) * (va + vb + kSsimC2);
            map_sum += num / den;
        }
        channel_sum += map_sum / mu_a.size();
    }
    return {"SSIM", channel_sum / a.channels, Direction::higher_better};
}

MetricValue ncc(const Image& a, const Image& b) {
    require_same_shape(a, b, "ncc");
    const std::size_t n = a.data.size();
    double mean_a = 0.0, mean_b = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mean_a += a.data[i];
        mean_b += b.data[i];
    }
    mean_a /= n;
    mean_b /= n;
    double cross = 0.0, var_a = 0.0, var_b = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double da = a.data[i] - mean_a;
        const double db = b.data[i] - mean_b;
        cross += da * db;
        var_a += da * da;
        var_b += db * db;
    }
    if (var_a == 0.0 || var_b == 0.0)
        throw DegenerateInput("ncc: zero-variance image");
    return {"NCC", cross / std::sqrt(var_a * var_b), Direction::higher_better};
}

} // namespace srx
