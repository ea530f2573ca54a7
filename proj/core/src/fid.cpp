#include "srx/fid.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace srx {

namespace {

constexpr char kMagic[4] = {'S', 'R', 'X', 'F'};
constexpr std::uint32_t kVersion = 1;
constexpr double kCovEpsilon = 1e-6;
constexpr double kEigFloor = 1e-10;

void require_finite(const Eigen::MatrixXd& m, const char* what) {
    if (!m.allFinite())
        throw NonFiniteValue(std::string(what) + " contains non-finite values");
}

// Diagonal regularization applied before square roots when the spectrum
// touches zero; standard practice for small-sample FID.
Eigen::MatrixXd regularized(const Eigen::MatrixXd& cov) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < kEigFloor)
        return cov + kCovEpsilon * Eigen::MatrixXd::Identity(cov.rows(), cov.cols());
    return cov;
}

} // namespace

GaussianStats feature_stats(const FeatureSet& fs) {
    if (fs.n() < 2)
        throw TooFewSamples("feature_stats needs at least 2 samples, got " +
                            std::to_string(fs.n()));
    require_finite(fs.rows, "feature set");
    const Eigen::VectorXd mean = fs.rows.colwise().mean();
    const Eigen::MatrixXd centered = fs.rows.rowwise() - mean.transpose();
    Eigen::MatrixXd cov = centered.transpose() * centered / double(fs.n() - 1);
    cov = 0.5 * (cov + cov.transpose());
    return {mean, cov};
}

Eigen::MatrixXd matrix_sqrt_psd(const Eigen::MatrixXd& m) {
    if (m.rows() != m.cols())
        throw NotSymmetric("matrix_sqrt_psd: matrix is not square");
    const double scale = 1.0 + m.cwiseAbs().maxCoeff();
    if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-8 * scale)
        throw NotSymmetric("matrix_sqrt_psd: matrix is not symmetric");

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
    Eigen::VectorXd lambda = es.eigenvalues();
    if (lambda.minCoeff() < -1e-8 * scale)
        throw IndefiniteMatrix("matrix_sqrt_psd: eigenvalue " +
                               std::to_string(lambda.minCoeff()) + " below tolerance");
    lambda = lambda.cwiseMax(0.0).cwiseSqrt();
    return es.eigenvectors() * lambda.asDiagonal() * es.eigenvectors().transpose();
}

double frechet_distance(const GaussianStats& p, const GaussianStats& q) {
    if (p.mean.size() != q.mean.size() || p.cov.rows() != q.cov.rows())
        throw DimensionMismatch("frechet_distance: stats dimensions differ");

    const Eigen::MatrixXd cp = regularized(p.cov);
    const Eigen::MatrixXd cq = regularized(q.cov);

    const Eigen::MatrixXd sp = matrix_sqrt_psd(cp);
    Eigen::MatrixXd sandwich = sp * cq * sp;
    sandwich = 0.5 * (sandwich + sandwich.transpose());
    const double tr_cross = matrix_sqrt_psd(sandwich).trace();

    const double mean_term = (p.mean - q.mean).squaredNorm();
    const double result = mean_term + cp.trace() + cq.trace() - 2.0 * tr_cross;
    return result < 0.0 ? 0.0 : result;
}

FeatureSet read_features(const std::filesystem::path& path) {
    if (path.extension() == ".csv") {
        std::ifstream in(path);
        if (!in)
            throw FileNotFound("cannot open " + path.string());
        std::vector<std::vector<double>> rows;
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty())
                continue;
            std::vector<double> row;
            std::stringstream ss(line);
            std::string cell;
            while (std::getline(ss, cell, ','))
                row.push_back(std::stod(cell));
            if (!rows.empty() && row.size() != rows.front().size())
                throw TruncatedFile(path.string() + ": ragged CSV rows");
            rows.push_back(std::move(row));
        }
        if (rows.empty())
            throw TruncatedFile(path.string() + ": empty feature CSV");
        FeatureSet fs;
        fs.rows.resize(rows.size(), rows.front().size());
        for (std::size_t i = 0; i < rows.size(); ++i)
            for (std::size_t j = 0; j < rows[i].size(); ++j)
                fs.rows(i, j) = rows[i][j];
        require_finite(fs.rows, path.string().c_str());
        return fs;
    }

    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw FileNotFound("cannot open " + path.string());
    char magic[4];
    std::uint32_t version = 0, n = 0, d = 0;
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0)
        throw BadMagic(path.string() + ": not a feature file");
    in.read(reinterpret_cast<char*>(&version), 4);
    in.read(reinterpret_cast<char*>(&n), 4);
    in.read(reinterpret_cast<char*>(&d), 4);
    if (!in)
        throw TruncatedFile(path.string() + ": truncated header");
    if (version != kVersion)
        throw BadMagic(path.string() + ": unsupported version " + std::to_string(version));

    std::vector<float> buf(static_cast<std::size_t>(n) * d);
    in.read(reinterpret_cast<char*>(buf.data()),
            static_cast<std::streamsize>(buf.size() * sizeof(float)));
    if (static_cast<std::size_t>(in.gcount()) != buf.size() * sizeof(float))
        throw TruncatedFile(path.string() + ": expected " + std::to_string(n) + " rows");

    FeatureSet fs;
    fs.rows.resize(n, d);
    for (std::uint32_t i = 0; i < n; ++i)
        for (std::uint32_t j = 0; j < d; ++j)
            fs.rows(i, j) = buf[static_cast<std::size_t>(i) * d + j];
    require_finite(fs.rows, path.string().c_str());
    return fs;
}

void write_features(const FeatureSet& fs, const std::filesystem::path& path) {
    require_finite(fs.rows, "feature set");
    if (path.extension() == ".csv") {
        std::ofstream out(path);
        if (!out)
            throw IoError("cannot open " + path.string() + " for writing");
        out.precision(17);
        for (Eigen::Index i = 0; i < fs.n(); ++i) {
            for (Eigen::Index j = 0; j < fs.d(); ++j)
                out << (j ? "," : "") << fs.rows(i, j);
            out << '\n';
        }
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot open " + path.string() + " for writing");
    const std::uint32_t n = static_cast<std::uint32_t>(fs.n());
    const std::uint32_t d = static_cast<std::uint32_t>(fs.d());
    out.write(kMagic, 4);
    out.write(reinterpret_cast<const char*>(&kVersion), 4);
    out.write(reinterpret_cast<const char*>(&n), 4);
    out.write(reinterpret_cast<const char*>(&d), 4);
    for (Eigen::Index i = 0; i < fs.n(); ++i)
        for (Eigen::Index j = 0; j < fs.d(); ++j) {
            const float v = static_cast<float>(fs.rows(i, j));
            out.write(reinterpret_cast<const char*>(&v), sizeof(float));
        }
    if (!out)
        throw IoError("short write to " + path.string());
}

Eigen::VectorXd builtin_features(const Image& img) {
    // grayscale via BT.601 luma, then bilinear to 16x16
    Image gray(img.height, img.width, 1);
    if (img.channels == 3) {
        for (int y = 0; y < img.height; ++y)
            for (int x = 0; x < img.width; ++x)
                gray.at(y, x, 0) = 0.299 * img.at(y, x, 0) + 0.587 * img.at(y, x, 1) +
                                   0.114 * img.at(y, x, 2);
    } else {
        gray = img;
    }
    const Image small = resize_bilinear(gray, 16, 16);

    Eigen::VectorXd f(kBuiltinFeatureDim);

    // 4x4 grid of 4x4-pixel cells: 16 means then 16 population stds
    for (int cy = 0; cy < 4; ++cy)
        for (int cx = 0; cx < 4; ++cx) {
            double sum = 0.0, sum2 = 0.0;
            for (int y = 0; y < 4; ++y)
                for (int x = 0; x < 4; ++x) {
                    const double v = small.at(cy * 4 + y, cx * 4 + x, 0);
                    sum += v;
                    sum2 += v * v;
                }
            const double mean = sum / 16.0;
            const double var = std::max(sum2 / 16.0 - mean * mean, 0.0);
            f[cy * 4 + cx] = mean;
            f[16 + cy * 4 + cx] = std::sqrt(var);
        }

    // orthonormal 2-D DCT-II, first 32 row-major coefficient magnitudes
    constexpr int n = 16;
    constexpr double pi = 3.14159265358979323846;
    for (int idx = 0; idx < 32; ++idx) {
        const int u = idx / n;
        const int v = idx % n;
        double coef = 0.0;
        for (int y = 0; y < n; ++y)
            for (int x = 0; x < n; ++x)
                coef += small.at(y, x, 0) *
                        std::cos(pi * (y + 0.5) * u / n) *
                        std::cos(pi * (x + 0.5) * v / n);
        const double au = (u == 0) ? std::sqrt(1.0 / n) : std::sqrt(2.0 / n);
        const double av = (v == 0) ? std::sqrt(1.0 / n) : std::sqrt(2.0 / n);
        f[32 + idx] = std::abs(au * av * coef);
    }
    return f;
}

} // namespace srx
