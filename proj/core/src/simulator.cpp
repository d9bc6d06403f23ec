#include "absa/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <set>
#include <thread>

#include "absa/errors.hpp"
#include "absa/external_simulator.hpp"
#include "absa/toy_model.hpp"

namespace absa {

SimulatorSpec SimulatorSpec::toy() {
  SimulatorSpec spec;
  spec.kind = Kind::toy;
  spec.outputs = {"X1", "X2"};
  spec.parameters = {"pi_ds", "ec50", "gamma"};
  return spec;
}

void SimulatorSpec::validate() const {
  if (outputs.empty()) throw InvalidSpec("simulator must declare at least one output");
  std::set<std::string> seen_outputs(outputs.begin(), outputs.end());
  if (seen_outputs.size() != outputs.size())
    throw InvalidSpec("simulator output names must be unique");
  std::set<std::string> seen_params(parameters.begin(), parameters.end());
  if (seen_params.size() != parameters.size())
    throw InvalidSpec("simulator parameter names must be unique");
  if (kind == Kind::external) {
    if (command.empty()) throw InvalidSpec("external simulator requires a command template");
    if (!(timeout_s > 0.0)) throw InvalidSpec("external simulator timeout must be positive");
  }
}

namespace {

class ToySimulator final : public Simulator {
 public:
  explicit ToySimulator(SimulatorSpec spec) : spec_(std::move(spec)) {}

  const SimulatorSpec& spec() const override { return spec_; }

  RunRecord run(const RunRequest& request) const override {
    ToyModelParams params;
    for (const auto& [name, value] : request.parameters) {
      if (name == "pi_ds") {
        params.pi_ds = value;
      } else if (name == "ec50") {
        params.ec50 = value;
      } else if (name == "gamma") {
        params.gamma = value;
      } else {
        return RunRecord::failure(request, "unknown parameter '" + name + "'");
      }
    }
    try {
      ToyModelOutputs out = simulate_toy(params, request.seed);
      return RunRecord::success(request, {{"X1", out.x1}, {"X2", out.x2}});
    } catch (const Error& e) {
      return RunRecord::failure(request, e.what());
    }
  }

 private:
  SimulatorSpec spec_;
};

class ExternalSimulator final : public Simulator {
 public:
  explicit ExternalSimulator(SimulatorSpec spec) : spec_(std::move(spec)) {}

  const SimulatorSpec& spec() const override { return spec_; }

  RunRecord run(const RunRequest& request) const override {
    return run_external(spec_, request);
  }

 private:
  SimulatorSpec spec_;
};

// Post-run contract check shared by all simulator kinds.
RunRecord validate_outputs(const SimulatorSpec& spec, RunRecord record) {
  if (!record.ok) return record;
  for (const std::string& name : spec.outputs) {
    auto it = record.outputs.find(name);
    if (it == record.outputs.end())
      return RunRecord::failure(record.request, "missing declared output '" + name + "'");
    if (!std::isfinite(it->second))
      return RunRecord::failure(record.request, "non-finite value for output '" + name + "'");
  }
  if (record.outputs.size() != spec.outputs.size())
    return RunRecord::failure(record.request, "undeclared extra output reported");
  return record;
}

}  // namespace

std::unique_ptr<Simulator> make_simulator(const SimulatorSpec& spec) {
  spec.validate();
  if (spec.kind == SimulatorSpec::Kind::toy) return std::make_unique<ToySimulator>(spec);
  return std::make_unique<ExternalSimulator>(spec);
}

std::vector<RunRecord> execute_batch(const Simulator& sim,
                                     const std::vector<RunRequest>& requests,
                                     unsigned parallelism) {
  if (parallelism == 0) throw InvalidSpec("parallelism must be >= 1");

  std::vector<RunRecord> records(requests.size());
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= requests.size()) return;
      const auto started = std::chrono::steady_clock::now();
      RunRecord record;
      try {
        record = sim.run(requests[i]);
      } catch (const std::exception& e) {
        record = RunRecord::failure(requests[i], e.what());
      }
      record = validate_outputs(sim.spec(), std::move(record));
      record.wall_time_s =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
      records[i] = std::move(record);
    }
  };

  const unsigned thread_count =
      static_cast<unsigned>(std::min<std::size_t>(parallelism, std::max<std::size_t>(requests.size(), 1)));
  if (thread_count <= 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    threads.reserve(thread_count);
    for (unsigned t = 0; t < thread_count; ++t) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
  }

  // Requests are expected in run_id order already; sort defensively so the
  // contract holds even for callers that submit out of order.
  std::stable_sort(records.begin(), records.end(),
                   [](const RunRecord& a, const RunRecord& b) {
                     return a.request.run_id < b.request.run_id;
                   });
  return records;
}

}  // namespace absa
