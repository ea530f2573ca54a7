#pragma once

#include <Eigen/Dense>
#include <filesystem>

#include "srx/image.hpp"

namespace srx {

/// N×D population of feature vectors, one row per image.
struct FeatureSet {
    Eigen::MatrixXd rows;

    Eigen::Index n() const { return rows.rows(); }
    Eigen::Index d() const { return rows.cols(); }
};

/// Gaussian fit of a feature population: column means and unbiased (n-1)
/// sample covariance, symmetrized.
struct GaussianStats {
    Eigen::VectorXd mean;
    Eigen::MatrixXd cov;
};

GaussianStats feature_stats(const FeatureSet& fs);

/// Principal square root of a symmetric PSD matrix via eigendecomposition,
/// negative eigenvalues (above -1e-8) clipped to zero.
Eigen::MatrixXd matrix_sqrt_psd(const Eigen::MatrixXd& m);

/// Fréchet distance between two Gaussian fits,
/// |mu_p - mu_q|^2 + Tr(Sp + Sq - 2 sqrtm(Sp Sq)), with the trace term
/// evaluated through the symmetric sandwich sqrtm(Sp^1/2 Sq Sp^1/2).
/// Small negative results clamp to 0.
double frechet_distance(const GaussianStats& p, const GaussianStats& q);

/// Feature file interchange. Binary format (little-endian):
///   "SRXF" | version u32 = 1 | n u32 | d u32 | n*d float32 row-major.
/// A ".csv" path instead reads/writes headerless CSV rows of d columns.
FeatureSet read_features(const std::filesystem::path& path);
void write_features(const FeatureSet& fs, const std::filesystem::path& path);

constexpr int kBuiltinFeatureDim = 64;

/// Deterministic stand-in descriptor for images (no neural network):
/// the image is converted to grayscale (0.299 R + 0.587 G + 0.114 B),
/// bilinearly resized to 16x16, then the features are
///   [0..15]  means of the 4x4 cell grid (row-major cells),
///   [16..31] population stds of the same cells,
///   [32..63] magnitudes of the 32 lowest row-major coefficients of the
///            orthonormal 2-D DCT-II of the 16x16 plane.
Eigen::VectorXd builtin_features(const Image& img);

} // namespace srx
