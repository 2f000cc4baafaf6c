// Times the serial reference kernels against the OpenMP ones on a dense and a
// sparse problem, checking along the way that both produce identical bits.
//
//   bench_kernels [n] [d] [reps]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <vector>

#include "csi/kernels.hpp"
#include "csi/rng.hpp"
#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

using Clock = std::chrono::steady_clock;

double time_best_of(int reps, const std::function<void()>& fn) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = Clock::now();
    fn();
    best = std::min(best, std::chrono::duration<double>(Clock::now() - t0).count());
  }
  return best;
}

std::size_t mismatches(const std::vector<double>& a, const std::vector<double>& b,
                       std::size_t count) {
  std::size_t bad = 0;
  for (std::size_t i = 0; i < count; ++i) bad += a[i] != b[i];
  return bad;
}

}  // namespace

int main(int argc, char** argv) {
  const std::size_t n = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 4000;
  const std::size_t d = argc > 2 ? std::strtoull(argv[2], nullptr, 10) : 2000;
  const int reps = argc > 3 ? std::atoi(argv[3]) : 5;

  csi::Rng rng(17);
  std::vector<double> x(n * d), w(d), v(n);
  for (double& e : x) e = rng.normal();
  for (double& e : w) e = rng.normal();
  for (double& e : v) e = rng.normal();

  // ~1% dense CSR for the sparse kernels
  std::vector<std::size_t> row_offsets{0};
  std::vector<std::uint32_t> idx;
  std::vector<double> val;
  const std::size_t per_row = std::max<std::size_t>(1, d / 100);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < per_row; ++k) {
      idx.push_back(static_cast<std::uint32_t>((i + k * 97) % d));
      val.push_back(rng.normal());
    }
    std::sort(idx.end() - per_row, idx.end());
    row_offsets.push_back(idx.size());
  }

#ifdef _OPENMP
  std::printf("threads: %d\n", omp_get_max_threads());
#else
  std::printf("threads: 1 (built without OpenMP)\n");
#endif
  std::printf("n=%zu d=%zu reps=%d (best-of timing)\n\n", n, d, reps);
  std::printf("%-16s %12s %12s %9s %10s\n", "kernel", "serial(ms)", "omp(ms)",
              "speedup", "mismatch");

  std::vector<double> out_s(std::max(n, d)), out_p(std::max(n, d));

  {
    const double ts = time_best_of(reps, [&] {
      csi::kernels::serial::dense_matvec(x.data(), n, d, w.data(), out_s.data());
    });
    const double tp = time_best_of(reps, [&] {
      csi::kernels::omp::dense_matvec(x.data(), n, d, w.data(), out_p.data());
    });
    std::printf("%-16s %12.3f %12.3f %8.2fx %10zu\n", "dense_matvec", ts * 1e3,
                tp * 1e3, ts / tp, mismatches(out_s, out_p, n));
  }
  {
    const double ts = time_best_of(reps, [&] {
      csi::kernels::serial::dense_tmatvec(x.data(), n, d, v.data(), out_s.data());
    });
    const double tp = time_best_of(reps, [&] {
      csi::kernels::omp::dense_tmatvec(x.data(), n, d, v.data(), out_p.data());
    });
    std::printf("%-16s %12.3f %12.3f %8.2fx %10zu\n", "dense_tmatvec", ts * 1e3,
                tp * 1e3, ts / tp, mismatches(out_s, out_p, d));
  }
  {
    const double ts = time_best_of(reps, [&] {
      csi::kernels::serial::sparse_matvec(row_offsets.data(), idx.data(), val.data(), n,
                                          w.data(), out_s.data());
    });
    const double tp = time_best_of(reps, [&] {
      csi::kernels::omp::sparse_matvec(row_offsets.data(), idx.data(), val.data(), n,
                                       w.data(), out_p.data());
    });
    std::printf("%-16s %12.3f %12.3f %8.2fx %10zu\n", "sparse_matvec", ts * 1e3,
                tp * 1e3, ts / tp, mismatches(out_s, out_p, n));
  }
  {
    const double ts = time_best_of(reps, [&] {
      csi::kernels::serial::axpy(w, -0.5, w, out_s.data());
    });
    const double tp = time_best_of(reps, [&] {
      csi::kernels::omp::axpy(w, -0.5, w, out_p.data());
    });
    std::printf("%-16s %12.3f %12.3f %8.2fx %10zu\n", "axpy", ts * 1e3, tp * 1e3,
                ts / tp, mismatches(out_s, out_p, d));
  }
  return 0;
}
