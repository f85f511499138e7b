#include "heunpull/driver.hpp"

namespace heunpull {

namespace {

VerifyReport guarded(const TransformationRecord& rec, const VerifyOptions& opt) {
  try {
    return verify_identity(rec, opt);
  } catch (const Error& e) {
    VerifyReport r;
    r.id = rec.id;
    r.field = rec.field;
    r.error = e.what();
    return r;
  }
}

}  // namespace

std::vector<VerifyReport> verify_records(const std::vector<TransformationRecord>& records, const VerifyOptions& opt,
                                         Execution mode) {
  const auto n = static_cast<long>(records.size());
  std::vector<VerifyReport> out(records.size());
  if (mode == Execution::kSerial) {
    for (long i = 0; i < n; ++i) out[i] = guarded(records[i], opt);
  } else {
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < n; ++i) out[i] = guarded(records[i], opt);
  }
  return out;
}

}  // namespace heunpull
