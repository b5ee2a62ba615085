// Timing comparison between the serial and OpenMP backends for the two
// hot kernels: boundary-matrix construction and rank computation.  Each
// case is checked for agreement between the backends before the timings
// are reported.
//
//   bench_qhom [n] [q] [p]     (defaults: 6 2 3)
#include <chrono>
#include <cstdint>
#include <iostream>
#include <string>

#include "qhom/lattice.hpp"
#include "qhom/linalg.hpp"
#include "qhom/qcomb.hpp"
#include "qhom/qfield.hpp"

using Clock = std::chrono::steady_clock;

namespace {

double seconds(Clock::time_point a, Clock::time_point b) {
  return std::chrono::duration<double>(b - a).count();
}

struct Timed {
  double serial = 0;
  double parallel = 0;
};

void print_row(const std::string& label, const Timed& t) {
  std::printf("%-28s %10.3fs %10.3fs %8.2fx\n", label.c_str(), t.serial,
              t.parallel, t.parallel > 0 ? t.serial / t.parallel : 0.0);
}

}  // namespace

int main(int argc, char** argv) {
  int64_t n = argc > 1 ? std::stoll(argv[1]) : 6;
  int64_t q = argc > 2 ? std::stoll(argv[2]) : 2;
  int64_t p = argc > 3 ? std::stoll(argv[3]) : 3;
  qhom::Field F(static_cast<uint32_t>(q));

  std::printf("bench: n=%lld q=%lld p=%lld (threads: OpenMP default)\n",
              static_cast<long long>(n), static_cast<long long>(q),
              static_cast<long long>(p));
  int64_t k = n / 2 + 1;
  std::printf("level sizes: %s x %s\n",
              qhom::gauss_binomial(n, k - 1, q).get_str().c_str(),
              qhom::gauss_binomial(n, k, q).get_str().c_str());
  std::printf("%-28s %11s %11s %9s\n", "kernel", "serial", "parallel",
              "speedup");

  Timed build;
  auto t0 = Clock::now();
  qhom::SparseMatModP serial_m =
      qhom::boundary_matrix(n, k, F, p, qhom::Backend::serial);
  auto t1 = Clock::now();
  qhom::SparseMatModP parallel_m =
      qhom::boundary_matrix(n, k, F, p, qhom::Backend::parallel);
  auto t2 = Clock::now();
  build.serial = seconds(t0, t1);
  build.parallel = seconds(t1, t2);
  if (!(serial_m == parallel_m)) {
    std::fprintf(stderr, "backend mismatch in boundary_matrix\n");
    return 1;
  }
  print_row("boundary matrix", build);

  Timed rank;
  t0 = Clock::now();
  int64_t rs = qhom::rank_mod_p(serial_m, qhom::Backend::serial);
  t1 = Clock::now();
  int64_t rp = qhom::rank_mod_p(parallel_m, qhom::Backend::parallel);
  t2 = Clock::now();
  rank.serial = seconds(t0, t1);
  rank.parallel = seconds(t1, t2);
  if (rs != rp) {
    std::fprintf(stderr, "backend mismatch in rank_mod_p: %lld vs %lld\n",
                 static_cast<long long>(rs), static_cast<long long>(rp));
    return 1;
  }
  print_row("rank", rank);
  std::printf("rank = %lld\n", static_cast<long long>(rs));
  return 0;
}
