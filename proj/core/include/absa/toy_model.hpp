#pragma once

#include <cstdint>

namespace absa {

/// Parameters of the built-in stochastic drug-response model. The three
/// exposed parameters are the ones campaigns perturb; everything else is a
/// fixed internal constant so the model is fully specified by (params, seed).
struct ToyModelParams {
  double pi_ds = 0.75;  // probability a healthy cell enters the damaged state
  double ec50 = 1.0;    // drug concentration of half-maximal effect, in uM
  double gamma = 2.0;   // Hill exponent

  static constexpr int kInitialCells = 50;
  static constexpr int kSteps = 60;
  static constexpr double kDrugConcentration = 1.0;  // uM
  static constexpr double kPCycle = 0.05;
  static constexpr double kPDiv = 0.04;
  static constexpr double kPKillMax = 0.3;
  static constexpr double kPRepair = 0.4;
  static constexpr int kPopulationCap = 5000;
};

struct ToyModelOutputs {
  double x1;  // percentage of damaged cells at the final step, in [0,100]
  double x2;  // total cell count at the final step
};

/// Hill dose-response effect E = C^gamma / (EC50^gamma + C^gamma), strictly
/// decreasing in ec50 for fixed concentration and exponent.
double hill_effect(double concentration, double ec50, double gamma);

/// Runs the cell population model for a fixed number of steps and returns the
/// final damaged-cell percentage (X1) and cell count (X2).
///
/// Each step visits cells in a fixed order: every healthy cell becomes
/// damaged with probability p_cycle * pi_ds; every damaged cell dies with
/// probability E * p_kill_max and otherwise repairs with probability
/// (1 - E) * p_repair; every surviving healthy cell divides with probability
/// p_div unless the population has reached the cap. Per-damaged-cell outflow
/// E * p_kill_max + (1 - E) * p_repair decreases in E because p_repair
/// exceeds p_kill_max, which fixes the sign structure of the model: stronger
/// drug effect raises the steady damaged fraction and lowers the population.
///
/// Deterministic given (params, seed).
ToyModelOutputs simulate_toy(const ToyModelParams& params, std::uint64_t seed);

}  // namespace absa
