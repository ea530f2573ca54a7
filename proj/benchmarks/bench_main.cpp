#include <benchmark/benchmark.h>

#include <random>

#include "srx/fid.hpp"
#include "srx/image.hpp"
#include "srx/metrics.hpp"

namespace {

srx::Image random_image(std::mt19937_64& rng, int h, int w, int c) {
    srx::Image img(h, w, c);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (double& v : img.data)
        v = uni(rng);
    return img;
}

void BM_resize_bilinear_down(benchmark::State& state) {
    std::mt19937_64 rng(1);
    const srx::Image img = random_image(rng, 256, 256, 3);
    for (auto _ : state)
        benchmark::DoNotOptimize(srx::resize_bilinear(img, 64, 64));
}
BENCHMARK(BM_resize_bilinear_down);

void BM_resize_nearest_up(benchmark::State& state) {
    std::mt19937_64 rng(2);
    const srx::Image img = random_image(rng, 64, 64, 3);
    for (auto _ : state)
        benchmark::DoNotOptimize(srx::resize_nearest(img, 256, 256));
}
BENCHMARK(BM_resize_nearest_up);

void BM_ssim_256(benchmark::State& state) {
    std::mt19937_64 rng(3);
    const srx::Image a = random_image(rng, 256, 256, 3);
    const srx::Image b = random_image(rng, 256, 256, 3);
    for (auto _ : state)
        benchmark::DoNotOptimize(srx::ssim(a, b));
}
BENCHMARK(BM_ssim_256);

void BM_rmse_256(benchmark::State& state) {
    std::mt19937_64 rng(4);
    const srx::Image a = random_image(rng, 256, 256, 3);
    const srx::Image b = random_image(rng, 256, 256, 3);
    for (auto _ : state)
        benchmark::DoNotOptimize(srx::rmse(a, b));
}
BENCHMARK(BM_rmse_256);

void BM_builtin_features(benchmark::State& state) {
    std::mt19937_64 rng(5);
    const srx::Image img = random_image(rng, 256, 256, 3);
    for (auto _ : state)
        benchmark::DoNotOptimize(srx::builtin_features(img));
}
BENCHMARK(BM_builtin_features);

void BM_frechet_distance(benchmark::State& state) {
    const int d = static_cast<int>(state.range(0));
    std::mt19937_64 rng(6);
    std::normal_distribution<double> gauss;
    auto stats = [&] {
        Eigen::MatrixXd a(d, d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                a(i, j) = gauss(rng);
        Eigen::VectorXd mu(d);
        for (int i = 0; i < d; ++i)
            mu(i) = gauss(rng);
        return srx::GaussianStats{mu, Eigen::MatrixXd(a.transpose() * a)};
    };
    const srx::GaussianStats p = stats(), q = stats();
    for (auto _ : state)
        benchmark::DoNotOptimize(srx::frechet_distance(p, q));
}
BENCHMARK(BM_frechet_distance)->Arg(64)->Arg(256);

} // namespace

BENCHMARK_MAIN();
