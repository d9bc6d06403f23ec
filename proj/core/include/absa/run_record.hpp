#pragma once

#include <cstdint>
#include <map>
#include <string>

namespace absa {

/// One planned simulation run. Seeds are assigned when the campaign is
/// planned, never drawn during execution, so any execution schedule yields
/// the same results.
struct RunRequest {
  std::uint64_t run_id = 0;  // unique and monotone within a campaign
  std::map<std::string, double> parameters;
  std::uint64_t seed = 0;
};

/// Outcome of one run. A record with ok status carries every declared output
/// as a finite value; a failed record carries a reason instead.
struct RunRecord {
  RunRequest request;
  std::map<std::string, double> outputs;
  bool ok = false;
  std::string failure_reason;
  double wall_time_s = 0.0;  // in-memory diagnostic, not persisted

  static RunRecord success(RunRequest req, std::map<std::string, double> outs) {
    RunRecord r;
    r.request = std::move(req);
    r.outputs = std::move(outs);
    r.ok = true;
    return r;
  }

  static RunRecord failure(RunRequest req, std::string reason) {
    RunRecord r;
    r.request = std::move(req);
    r.ok = false;
    r.failure_reason = std::move(reason);
    return r;
  }
};

}  // namespace absa
