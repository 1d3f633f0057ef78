// Benchmark of the OpenMP grid kernels against the serial reference, plus a
// curvature-stack timing on a chart background in both modes.
#include "ach/curvature.hpp"
#include "ach/io.hpp"

#include <chrono>
#include <iostream>
#include <random>

#include <omp.h>

using namespace ach;

namespace {

double seconds(const std::function<void()>& f, int reps) {
  auto t0 = std::chrono::steady_clock::now();
  for (int i = 0; i < reps; ++i) f();
  auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(t1 - t0).count() / reps;
}

GridPtr random_grid(const GridDims& d, unsigned seed) {
  auto g = std::make_shared<GridData>(d);
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (auto& z : g->v) z = {u(rng), u(rng)};
  return g;
}

void bench_pointwise(int n) {
  GridDims d;
  d.n = {n, n, n};
  d.period = {2 * M_PI, 2 * M_PI, 2 * M_PI};
  GridPtr a = random_grid(d, 1), b = random_grid(d, 2);
  GridData out(d);
  SpectralGeometry geom(d);
  const int reps = std::max(1, int(1u << 24) / int(d.size()));

  struct Row {
    const char* name;
    std::function<void()> run;
  };
  std::vector<Row> rows = {
      {"mul", [&] { kern::mul(out.v.data(), a->v.data(), b->v.data(), d.size()); }},
      {"mul_add", [&] { kern::mul_add(out.v.data(), a->v.data(), b->v.data(), d.size()); }},
      {"deriv_axis0", [&] { kern::deriv_axis(out.v.data(), a->v.data(), d, 0, geom.dmat[0].data()); }},
  };
  for (auto& r : rows) {
    kern::serial_mode() = true;
    double ts = seconds(r.run, reps);
    kern::serial_mode() = false;
    double tp = seconds(r.run, reps);
    std::cout << "  " << n << "^3 " << r.name << ": serial " << ts * 1e6 << " us, parallel " << tp * 1e6
              << " us, speedup " << ts / tp << "\n";
  }
}

void bench_stack(int n, int order) {
  Background bg = Background::from_chart(torus_chart({n, n, n}, 0.05), 1e-8);
  MetricAnsatz phi = MetricAnsatz::zero(order);
  kern::serial_mode() = true;
  double ts = seconds([&] { compute_stack(bg, phi, STACK_WEYL); }, 1);
  kern::serial_mode() = false;
  double tp = seconds([&] { compute_stack(bg, phi, STACK_WEYL); }, 1);
  std::cout << "  stack " << n << "^3 order " << order << ": serial " << ts << " s, parallel " << tp
            << " s, speedup " << ts / tp << "\n";
}

}  // namespace

int main() {
  std::cout << "threads: " << omp_get_max_threads() << "\n";
  std::cout << "pointwise kernels:\n";
  for (int n : {16, 32, 48}) bench_pointwise(n);
  std::cout << "curvature stack:\n";
  bench_stack(12, 6);
  bench_stack(16, 8);
  return 0;
}
