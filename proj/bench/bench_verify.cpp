// Serial reference vs OpenMP kernels: catalog verification, orbit residuals, covering classification.
#include <omp.h>

#include <chrono>
#include <cstdlib>
#include <iomanip>
#include <iostream>

#include "heunpull/covering.hpp"
#include "heunpull/driver.hpp"

using namespace heunpull;
using Q = Rational;

namespace {

template <class Fn>
double seconds(int reps, Fn&& fn) {
  const auto start = std::chrono::steady_clock::now();
  for (int i = 0; i < reps; ++i) fn();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() / reps;
}

template <class Fn>
void row(const char* name, int reps, Fn&& fn) {
  const double s = seconds(reps, [&] { fn(Execution::kSerial); });
  const double p = seconds(reps, [&] { fn(Execution::kParallel); });
  std::cout << std::left << std::setw(22) << name << std::right << std::fixed << std::setprecision(4) << std::setw(10)
            << s << std::setw(10) << p << std::setw(8) << std::setprecision(2) << s / p << "x\n";
}

}  // namespace

int main(int argc, char** argv) {
  const int reps = argc > 1 ? std::atoi(argv[1]) : 3;
  std::vector<TransformationRecord> todo;
  for (const auto& r : load_catalog(HEUNPULL_CATALOG_PATH))
    if (r.verifiable()) todo.push_back(r);
  VerifyOptions opt;
  opt.order = 12;
  opt.samples = 5;

  std::cout << "threads " << omp_get_max_threads() << ", " << reps << " reps\n";
  std::cout << std::left << std::setw(22) << "kernel" << std::right << std::setw(10) << "serial" << std::setw(10)
            << "omp" << std::setw(9) << "speedup\n";

  bool agree = true;
  row("verify-all", reps, [&](Execution e) {
    static std::vector<VerifyReport> first;
    auto reps_out = verify_records(todo, opt, e);
    if (first.empty()) first = reps_out;
    else agree = agree && reps_out == first;
  });

  const HeunParams<Q> hp{Q(1, 3), Q(2, 7), Q(3, 11), Q(5, 13), Q(2, 3), Q(7)};
  const auto horbit = heun_orbit(hp);
  row("heun orbit (192)", reps, [&](Execution e) {
    static std::vector<char> first;
    auto ok = verify_orbit(horbit, hp, 10, e);
    if (first.empty()) first = ok;
    else agree = agree && ok == first;
  });

  const HypergeometricParams<Q> kp{Q(1, 3), Q(2, 7), Q(3, 11)};
  const auto korbit = kummer_orbit(kp);
  row("kummer orbit (24)", reps, [&](Execution e) { verify_orbit(korbit, kp, 10, e); });

  row("classify (2 params)", reps, [&](Execution e) { classify(2, e); });

  std::cout << (agree ? "serial and parallel results agree\n" : "RESULTS DIFFER\n");
  return agree ? 0 : 1;
}
