// Timing comparison: serial reference kernels against the OpenMP versions,
// and a short flow stepping benchmark. Prints a small table; no assertions.

#include <chrono>
#include <cstdio>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "icflow/flow.hpp"
#include "icflow/frame.hpp"
#include "icflow/integrals.hpp"

using namespace icflow;
using clk = std::chrono::steady_clock;

static double ms_since(clk::time_point t0) {
  return std::chrono::duration<double, std::milli>(clk::now() - t0).count();
}

int main() {
#ifdef _OPENMP
  std::printf("OpenMP threads: %d\n", omp_get_max_threads());
#else
  std::printf("OpenMP not enabled\n");
#endif

  for (int n : {3, 5, 7}) {
    const auto sp = ShapeSpec::perturbed_sphere(1.0, {{2, 0.1}, {3, 0.05}}, n);
    GridSpec g;
    g.N = 4096;
    const auto s = sample_shape(sp, g);

    // warm up and correctness cross-check
    const auto ref = compute_frame_field_serial(s);
    const auto par = compute_frame_field(s);
    double max_diff = 0;
    for (size_t i = 0; i < ref.nodes.size(); ++i) {
      const double d = std::fabs(ref.nodes[i].curv.H[1] - par.nodes[i].curv.H[1]);
      if (d > max_diff) max_diff = d;
    }

    const int reps = 40;
    auto t0 = clk::now();
    for (int r = 0; r < reps; ++r) (void)compute_frame_field_serial(s);
    const double serial_ms = ms_since(t0) / reps;

    t0 = clk::now();
    for (int r = 0; r < reps; ++r) (void)compute_frame_field(s);
    const double parallel_ms = ms_since(t0) / reps;

    t0 = clk::now();
    for (int r = 0; r < reps; ++r) (void)functionals(s, 1);
    const double func_ms = ms_since(t0) / reps;

    std::printf(
        "n=%d N=%d  frame serial %.3f ms  parallel %.3f ms  speedup %.2fx  "
        "functionals %.3f ms  (cross-check diff %.1e)\n",
        n, g.N, serial_ms, parallel_ms, serial_ms / parallel_ms, func_ms, max_diff);
  }

  {
    FlowConfig fc;
    fc.n = 3;
    fc.k = 1;
    fc.t_end = 0.05;
    GridSpec g;
    g.N = 1024;
    const auto sp = ShapeSpec::perturbed_sphere(1.0, {{2, 0.1}}, 3);
    auto t0 = clk::now();
    auto state = initial_state(sp, g, fc);
    long steps = 0;
    while (state.t < fc.t_end) {
      step(state, fc);
      ++steps;
    }
    std::printf("flow n=3 k=1 N=%d: %ld steps in %.1f ms\n", g.N, steps, ms_since(t0));
  }
  return 0;
}
