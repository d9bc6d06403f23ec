#include "absa/toy_model.hpp"

#include <cmath>

#include "absa/errors.hpp"
#include "absa/rng.hpp"

namespace absa {

double hill_effect(double concentration, double ec50, double gamma) {
  const double cg = std::pow(concentration, gamma);
  const double eg = std::pow(ec50, gamma);
  return cg / (eg + cg);
}

ToyModelOutputs simulate_toy(const ToyModelParams& params, std::uint64_t seed) {
  if (!(params.pi_ds >= 0.0 && params.pi_ds <= 1.0) || !std::isfinite(params.pi_ds))
    throw InvalidParams("pi_ds must lie in [0,1]");
  if (!(params.ec50 > 0.0) || !std::isfinite(params.ec50))
    throw InvalidParams("ec50 must be > 0");
  if (!(params.gamma > 0.0) || !std::isfinite(params.gamma))
    throw InvalidParams("gamma must be > 0");

  const double effect = hill_effect(ToyModelParams::kDrugConcentration, params.ec50, params.gamma);
  const double p_damage = ToyModelParams::kPCycle * params.pi_ds;
  const double p_die = effect * ToyModelParams::kPKillMax;
  const double p_repair = (1.0 - effect) * ToyModelParams::kPRepair;

  Rng rng(seed);
  long healthy = ToyModelParams::kInitialCells;
  long damaged = 0;

  for (int step = 0; step < ToyModelParams::kSteps; ++step) {
    // Damage phase: each healthy cell may enter the damaged state.
    long newly_damaged = 0;
    for (long i = 0; i < healthy; ++i) {
      if (rng.uniform01() < p_damage) ++newly_damaged;
    }
    healthy -= newly_damaged;
    damaged += newly_damaged;

    // Drug phase: each damaged cell dies or repairs back to healthy.
    long died = 0;
    long repaired = 0;
    for (long i = 0; i < damaged; ++i) {
      if (rng.uniform01() < p_die) {
        ++died;
      } else if (rng.uniform01() < p_repair) {
        ++repaired;
      }
    }
    damaged -= died + repaired;
    healthy += repaired;

    // Division phase: each surviving healthy cell may divide, capped.
    long births = 0;
    const long healthy_before_division = healthy;
    for (long i = 0; i < healthy_before_division; ++i) {
      if (healthy + damaged + births >= ToyModelParams::kPopulationCap) break;
      if (rng.uniform01() < ToyModelParams::kPDiv) ++births;
    }
    healthy += births;
  }

  const long total = healthy + damaged;
  ToyModelOutputs out;
  out.x1 = total > 0 ? 100.0 * static_cast<double>(damaged) / static_cast<double>(total) : 0.0;
  out.x2 = static_cast<double>(total);
  return out;
}

}  // namespace absa
