#pragma once

#include <vector>

#include "heunpull/catalog.hpp"
#include "heunpull/group.hpp"

namespace heunpull {

/// Serial reference or OpenMP kernel; both must produce identical results.
enum class Execution { kSerial, kParallel };

/// verify_identity for each record, in input order.
std::vector<VerifyReport> verify_records(const std::vector<TransformationRecord>& records, const VerifyOptions& opt,
                                         Execution mode = Execution::kParallel);

/// Residual check of every orbit record, in orbit order (1 = verified).
template <Field F, class Params>
std::vector<char> verify_orbit(const Orbit<F, Params>& orbit, const Params& base, int order,
                               Execution mode = Execution::kParallel) {
  const auto n = static_cast<long>(orbit.records.size());
  std::vector<char> ok(static_cast<std::size_t>(n), 0);
  auto one = [&](long i) {
    try {
      ok[static_cast<std::size_t>(i)] = verify_record(orbit.records[static_cast<std::size_t>(i)], base, order) ? 1 : 0;
    } catch (const Error&) {
      ok[static_cast<std::size_t>(i)] = 0;
    }
  };
  if (mode == Execution::kSerial) {
    for (long i = 0; i < n; ++i) one(i);
  } else {
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < n; ++i) one(i);
  }
  return ok;
}

}  // namespace heunpull
