// Independent brute-force oracles. These implement the definitions
// literally with plain loops and stay independent of the library's
// computation paths; the tests check the library against them.
#pragma once

#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "srx/image.hpp"

namespace oracle {

inline double rmse(const srx::Image& a, const srx::Image& b) {
    double sum = 0.0;
    std::size_t n = 0;
    for (int y = 0; y < a.height; ++y)
        for (int x = 0; x < a.width; ++x)
            for (int c = 0; c < a.channels; ++c) {
                const double d = a.at(y, x, c) - b.at(y, x, c);
                sum += d * d;
                ++n;
            }
    return std::sqrt(sum / n);
}

inline double mae(const srx::Image& a, const srx::Image& b) {
    double sum = 0.0;
    std::size_t n = 0;
    for (int y = 0; y < a.height; ++y)
        for (int x = 0; x < a.width; ++x)
            for (int c = 0; c < a.channels; ++c) {
                sum += std::abs(a.at(y, x, c) - b.at(y, x, c));
                ++n;
            }
    return sum / n;
}

inline double ncc(const srx::Image& a, const srx::Image& b) {
    double ma = 0.0, mb = 0.0;
    const std::size_t n = a.data.size();
    for (std::size_t i = 0; i < n; ++i) {
        ma += a.data[i];
        mb += b.data[i];
    }
    ma /= n;
    mb /= n;
    double cross = 0.0, va = 0.0, vb = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        cross += (a.data[i] - ma) * (b.data[i] - mb);
        va += (a.data[i] - ma) * (a.data[i] - ma);
        vb += (b.data[i] - mb) * (b.data[i] - mb);
    }
    return cross / std::sqrt(va * vb);
}

// Naive O(HW * 11^2) sliding-window SSIM, valid positions only, per
// channel then averaged. 11x11 Gaussian sigma=1.5, C1=1e-4, C2=9e-4.
inline double ssim(const srx::Image& a, const srx::Image& b) {
    constexpr int win = 11;
    constexpr double sigma = 1.5;
    constexpr double c1 = 0.01 * 0.01, c2 = 0.03 * 0.03;
    double kernel[win][win];
    double ksum = 0.0;
    for (int i = 0; i < win; ++i)
        for (int j = 0; j < win; ++j) {
            const double dy = i - win / 2, dx = j - win / 2;
            kernel[i][j] = std::exp(-(dy * dy + dx * dx) / (2.0 * sigma * sigma));
            ksum += kernel[i][j];
        }
    for (int i = 0; i < win; ++i)
        for (int j = 0; j < win; ++j)
            kernel[i][j] /= ksum;

    double channel_sum = 0.0;
    for (int c = 0; c < a.channels; ++c) {
        double map_sum = 0.0;
        std::size_t positions = 0;
        for (int y = 0; y + win <= a.height; ++y)
            for (int x = 0; x + win <= a.width; ++x) {
                double mu_a = 0.0, mu_b = 0.0;
                for (int i = 0; i < win; ++i)
                    for (int j = 0; j < win; ++j) {
                        mu_a += kernel[i][j] * a.at(y + i, x + j, c);
                        mu_b += kernel[i][j] * b.at(y + i, x + j, c);
                    }
                double va = 0.0, vb = 0.0, cov = 0.0;
                for (int i = 0; i < win; ++i)
                    for (int j = 0; j < win; ++j) {
                        const double da = a.at(y + i, x + j, c) - mu_a;
                        const double db = b.at(y + i, x + j, c) - mu_b;
                        va += kernel[i][j] * da * da;
                        vb += kernel[i][j] * db * db;
                        cov += kernel[i][j] * da * db;
                    }
                const double num = (2 * mu_a * mu_b + c1) * (2 * cov + c2);
                const double den = (mu_a * mu_a + mu_b * mu_b + c1) * (va + vb + c2);
                map_sum += num / den;
                ++positions;
            }
        channel_sum += map_sum / positions;
    }
    return channel_sum / a.channels;
}

// Per-pixel bilinear resample implementing the half-pixel-center mapping
// directly from its formula.
inline srx::Image resize_bilinear(const srx::Image& img, int out_h, int out_w) {
    srx::Image out(out_h, out_w, img.channels);
    for (int y = 0; y < out_h; ++y)
        for (int x = 0; x < out_w; ++x) {
            double fy = (y + 0.5) * img.height / out_h - 0.5;
            double fx = (x + 0.5) * img.width / out_w - 0.5;
            fy = std::min(std::max(fy, 0.0), img.height - 1.0);
            fx = std::min(std::max(fx, 0.0), img.width - 1.0);
            const int y0 = static_cast<int>(std::floor(fy));
            const int x0 = static_cast<int>(std::floor(fx));
            const int y1 = std::min(y0 + 1, img.height - 1);
            const int x1 = std::min(x0 + 1, img.width - 1);
            const double wy = fy - y0, wx = fx - x0;
            for (int c = 0; c < img.channels; ++c) {
                const double v = img.at(y0, x0, c) * (1 - wy) * (1 - wx) +
                                 img.at(y0, x1, c) * (1 - wy) * wx +
                                 img.at(y1, x0, c) * wy * (1 - wx) +
                                 img.at(y1, x1, c) * wy * wx;
                out.at(y, x, c) = std::min(std::max(v, 0.0), 1.0);
            }
        }
    return out;
}

// Two-pass unbiased covariance.
inline Eigen::MatrixXd covariance(const Eigen::MatrixXd& rows) {
    const Eigen::Index n = rows.rows(), d = rows.cols();
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(d);
    for (Eigen::Index i = 0; i < n; ++i)
        mean += rows.row(i).transpose();
    mean /= double(n);
    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(d, d);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index a = 0; a < d; ++a)
            for (Eigen::Index b = 0; b < d; ++b)
                cov(a, b) += (rows(i, a) - mean(a)) * (rows(i, b) - mean(b));
    }
    return cov / double(n - 1);
}

// Closed-form Fréchet distance for diagonal covariances.
inline double frechet_diagonal(const Eigen::VectorXd& mu1, const Eigen::VectorXd& var1,
                               const Eigen::VectorXd& mu2, const Eigen::VectorXd& var2) {
    double sum = 0.0;
    for (Eigen::Index i = 0; i < mu1.size(); ++i) {
        const double dm = mu1(i) - mu2(i);
        const double ds = std::sqrt(var1(i)) - std::sqrt(var2(i));
        sum += dm * dm + ds * ds;
    }
    return sum;
}

// Direct binning loop: right-open bins, last bin right-closed.
inline std::vector<std::size_t> bin_counts(const std::vector<double>& values, double lo,
                                           double hi, int bins) {
    std::vector<std::size_t> counts(bins, 0);
    for (double v : values) {
        for (int i = 0; i < bins; ++i) {
            const double left = lo + (hi - lo) * i / bins;
            const double right = lo + (hi - lo) * (i + 1) / bins;
            const bool in = (i + 1 == bins) ? (v >= left && v <= right) : (v >= left && v < right);
            if (in) {
                ++counts[i];
                break;
            }
        }
    }
    return counts;
}

inline srx::Image random_image(std::mt19937_64& rng, int h, int w, int c) {
    srx::Image img(h, w, c);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (double& v : img.data)
        v = uni(rng);
    return img;
}

} // namespace oracle
