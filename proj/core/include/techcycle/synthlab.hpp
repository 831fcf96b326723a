#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <variant>

#include "techcycle/config.hpp"
#include "techcycle/growth_models.hpp"
#include "techcycle/market_data.hpp"

namespace techcycle {

/// SplitMix64. Each call advances the state by the golden-gamma constant
/// 0x9e3779b97f4a7c15 and returns the mixed value. The stream for a given
/// seed depends on nothing but this code.
class SplitMix64 {
public:
  explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next() noexcept {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform on [-1, 1): top 53 bits scaled to [0, 1), then 2u - 1.
  double symmetric_unit() noexcept {
    const double u = static_cast<double>(next() >> 11) * 0x1.0p-53;
    return 2.0 * u - 1.0;
  }

private:
  std::uint64_t state_;
};

struct SyntheticScenario {
  LogisticParams p_old;
  LogisticParams p_new;
  YearInterval years{0, 40};
  double noise_rel = 0.0;
  std::uint64_t seed = 0;
};

/// Throws Error(Validation) on an empty year range, noise outside [0, 1) or
/// non-positive k / b.
void validate(const SyntheticScenario& s);

/// value(t) = logistic(p, t) * (1 + noise_rel * eps_t), clamped at 0.
/// One SplitMix64 stream seeded with `seed` supplies eps for the old series
/// (ascending years) and then for the new series.
std::pair<RevenueSeries, RevenueSeries> generate_scenario(const SyntheticScenario& s);

/// Years where both noise-free curves sit below `fraction` of their k.
struct EarlyWindow {
  double fraction = 0.1;
};

using WindowPolicy = std::variant<EarlyWindow, YearInterval>;

struct RecoveryReport {
  double b_theoretical = 0.0;
  double b_fitted = 0.0;
  double abs_gap = 0.0;
  YearInterval window_used;
  double saturation_level = 0.0;  // max of level / k over both curves in the window
  SubstitutionFit fit;
};

/// Throws Error(Window) when the policy leaves fewer than three usable years.
RecoveryReport recovery_experiment(const SyntheticScenario& s, const WindowPolicy& policy);

/// Scenario file keys: k1 a1 b1 k2 a2 b2 (required), year_start, year_end,
/// noise, seed, and optionally `window` (`early` or `Y1:Y2`) and `fraction`.
struct ScenarioFile {
  SyntheticScenario scenario;
  WindowPolicy policy = EarlyWindow{};
};

ScenarioFile parse_scenario(const KeyValueConfig& cfg);

}  // namespace techcycle
