#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "absa/run_record.hpp"

namespace absa {

/// Declarative description of a simulator: either the built-in toy model or
/// an external command speaking the line protocol documented in
/// external_simulator.hpp.
struct SimulatorSpec {
  enum class Kind { toy, external };

  Kind kind = Kind::toy;
  std::string command;      // external only: template with {param:NAME} and {seed}
  std::string working_dir;  // external only: optional child working directory
  double timeout_s = 30.0;  // external only: per-run wall clock limit
  std::vector<std::string> outputs;
  std::vector<std::string> parameters;

  /// Spec for the built-in model: parameters pi_ds/ec50/gamma, outputs X1/X2.
  static SimulatorSpec toy();

  /// Throws InvalidSpec when outputs are empty, names collide, or an external
  /// spec has no command.
  void validate() const;
};

/// Executable simulator. Implementations must be safe to call concurrently:
/// run() touches only per-call state.
class Simulator {
 public:
  virtual ~Simulator() = default;
  virtual const SimulatorSpec& spec() const = 0;
  virtual RunRecord run(const RunRequest& request) const = 0;
};

/// Materializes a validated spec into a callable simulator.
std::unique_ptr<Simulator> make_simulator(const SimulatorSpec& spec);

/// Executes every request, up to `parallelism` at a time, and returns records
/// in run_id order. Failures are reported per record and never abort the
/// batch. Results are identical for any parallelism because each run is
/// self-contained. Every ok record is checked against the declared outputs;
/// a run that reports a missing, extra, or non-finite output is demoted to
/// failed.
std::vector<RunRecord> execute_batch(const Simulator& sim,
                                     const std::vector<RunRequest>& requests,
                                     unsigned parallelism);

}  // namespace absa
