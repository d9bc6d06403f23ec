#pragma once

#include "absa/run_record.hpp"
#include "absa/simulator.hpp"

namespace absa {

/// Runs one external simulation and classifies the outcome.
///
/// Protocol: the SimulatorSpec command template is expanded by replacing every
/// `{param:NAME}` with that parameter's value and `{seed}` with the run seed,
/// both as decimal literals, and the result is run through /bin/sh. The child
/// must write exactly two lines to standard output: a header of
/// comma-separated output names matching the declared outputs, then the same
/// number of comma-separated finite decimal values, and exit 0.
///
/// Nonzero exit, timeout, spawn trouble, or malformed output all yield a
/// failed record whose reason names the problem; this function only throws
/// for misuse (calling it with a non-external spec).
RunRecord run_external(const SimulatorSpec& spec, const RunRequest& request);

}  // namespace absa
