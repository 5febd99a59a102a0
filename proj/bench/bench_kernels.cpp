// Compares the OpenMP kernels against the serial reference implementations
// on a large structured mesh. Run with --benchmark_filter=... to narrow.

#include <benchmark/benchmark.h>

#include <random>

#include "stresslab/kernels.hpp"

namespace {

using namespace stresslab;

struct BenchData {
  TriangleMesh mesh;
  kernels::ElementGeometry geom;
  Eigen::VectorXd u;
  Eigen::VectorXd sigma;
  std::vector<Eigen::Matrix3d> maps;

  explicit BenchData(int m) : mesh(structured_unit_square(m)) {
    geom = kernels::build_geometry(mesh);
    std::mt19937_64 rng(1234);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    u.resize(geom.num_dofs);
    for (int i = 0; i < u.size(); ++i) u[i] = uni(rng);
    sigma.resize(3 * geom.num_elements());
    for (int i = 0; i < sigma.size(); ++i) sigma[i] = uni(rng);
    maps.resize(geom.num_elements());
    for (auto& mp : maps) {
      Eigen::Matrix3d a;
      for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) a(r, c) = uni(rng);
      }
      mp = a.transpose() * a + Eigen::Matrix3d::Identity();
    }
  }
};

const BenchData& data() {
  static BenchData d(256);  // 131072 elements
  return d;
}

void BM_Strains_Serial(benchmark::State& state) {
  const BenchData& d = data();
  Eigen::VectorXd eps;
  for (auto _ : state) {
    kernels::serial::element_strains(d.geom, d.u, eps);
    benchmark::DoNotOptimize(eps.data());
  }
}
BENCHMARK(BM_Strains_Serial);

void BM_Strains_OpenMP(benchmark::State& state) {
  const BenchData& d = data();
  Eigen::VectorXd eps;
  for (auto _ : state) {
    kernels::element_strains(d.geom, d.u, eps);
    benchmark::DoNotOptimize(eps.data());
  }
}
BENCHMARK(BM_Strains_OpenMP);

void BM_ApplyTensor_Serial(benchmark::State& state) {
  const BenchData& d = data();
  Eigen::VectorXd out;
  for (auto _ : state) {
    kernels::serial::apply_tensor_field(d.maps, d.sigma, out);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_ApplyTensor_Serial);

void BM_ApplyTensor_OpenMP(benchmark::State& state) {
  const BenchData& d = data();
  Eigen::VectorXd out;
  for (auto _ : state) {
    kernels::apply_tensor_field(d.maps, d.sigma, out);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_ApplyTensor_OpenMP);

void BM_WeightedIp_Serial(benchmark::State& state) {
  const BenchData& d = data();
  for (auto _ : state) {
    benchmark::DoNotOptimize(kernels::serial::weighted_inner_product(
        d.geom.areas, d.maps, d.sigma, d.sigma));
  }
}
BENCHMARK(BM_WeightedIp_Serial);

void BM_WeightedIp_OpenMP(benchmark::State& state) {
  const BenchData& d = data();
  for (auto _ : state) {
    benchmark::DoNotOptimize(kernels::weighted_inner_product(
        d.geom.areas, d.maps, d.sigma, d.sigma));
  }
}
BENCHMARK(BM_WeightedIp_OpenMP);

void BM_AdjointForces_Serial(benchmark::State& state) {
  const BenchData& d = data();
  Eigen::VectorXd r;
  for (auto _ : state) {
    kernels::serial::adjoint_forces(d.geom, d.sigma, r);
    benchmark::DoNotOptimize(r.data());
  }
}
BENCHMARK(BM_AdjointForces_Serial);

void BM_AdjointForces_OpenMP(benchmark::State& state) {
  const BenchData& d = data();
  Eigen::VectorXd r;
  for (auto _ : state) {
    kernels::adjoint_forces(d.geom, d.sigma, r);
    benchmark::DoNotOptimize(r.data());
  }
}
BENCHMARK(BM_AdjointForces_OpenMP);

void BM_ElementStiffness_Serial(benchmark::State& state) {
  const BenchData& d = data();
  std::vector<Eigen::Matrix<double, 6, 6>> blocks;
  for (auto _ : state) {
    kernels::serial::element_stiffness(d.geom, d.maps, blocks);
    benchmark::DoNotOptimize(blocks.data());
  }
}
BENCHMARK(BM_ElementStiffness_Serial);

void BM_ElementStiffness_OpenMP(benchmark::State& state) {
  const BenchData& d = data();
  std::vector<Eigen::Matrix<double, 6, 6>> blocks;
  for (auto _ : state) {
    kernels::element_stiffness(d.geom, d.maps, blocks);
    benchmark::DoNotOptimize(blocks.data());
  }
}
BENCHMARK(BM_ElementStiffness_OpenMP);

}  // namespace

BENCHMARK_MAIN();
