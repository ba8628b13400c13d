#pragma once

#include <cstdint>
#include <vector>

#include "leakwise/distributions.hpp"
#include "leakwise/entropy.hpp"

namespace leakwise {

/// One execution of the sum over t targets and n spectators, all inputs
/// i.i.d. from dist. The attacker's own inputs drop out of the leakage.
struct ScenarioConfig {
    DistributionSpec dist;
    std::int64_t t = 1;
    std::int64_t n = 0;
    double truncation_threshold = kDefaultTruncationThreshold;
};

struct EntropyReport {
    EntropyValue before;
    EntropyValue after;
    double absolute_loss = 0.0;
    double relative_loss = 0.0;
};

/// Upper end of the spectator search in solve_min_spectators().
inline constexpr std::int64_t kMaxSpectators = 1'000'000;

/// Entropy of one participant's input.
EntropyValue input_entropy(const DistributionSpec& dist,
                           double threshold = kDefaultTruncationThreshold);

/// Remaining entropy of the target vector given the output,
/// H(X_T) + H(X_S) - H(X_T + X_S).
EntropyValue awae(const ScenarioConfig& scenario);

EntropyReport loss_report(const ScenarioConfig& scenario);

/// Absolute loss for normal inputs; independent of the variance.
EntropyValue normal_loss_closed_form(std::int64_t t, std::int64_t n);

/// Smallest spectator count whose relative loss is within budget.
std::int64_t solve_min_spectators(const DistributionSpec& dist, std::int64_t t, double budget,
                                  double threshold = kDefaultTruncationThreshold);

/// Reports for n = 1..n_max, in order.
std::vector<EntropyReport> sweep(const DistributionSpec& dist, std::int64_t t, std::int64_t n_max,
                                 double threshold = kDefaultTruncationThreshold);

}  // namespace leakwise
