#pragma once

// Brute-force evaluation of the weighted-average-entropy definitions by
// exhaustive enumeration over small finite input domains. Nothing here goes
// through the closed forms in single_execution; it exists to check them.

#include <cstdint>
#include <span>
#include <vector>

#include "leakwise/distributions.hpp"
#include "leakwise/entropy.hpp"
#include "leakwise/two_execution.hpp"

namespace leakwise::oracle {

/// Largest |D|^(|A|+|T|+|S|) that the enumerations will accept.
inline constexpr double kEnumerationBudget = 1e8;

/// Spectator groups larger than this are enumerated by their sum rather than by tuple.
inline constexpr std::int64_t kMaxSpectatorTuples = 3;

/// Every participant draws i.i.d. from one finite domain.
class FiniteScenario {
public:
    /// Uniform inputs use {0..N-1}; Poisson inputs use the truncated table,
    /// renormalized to total mass 1.
    static FiniteScenario from_distribution(const DistributionSpec& dist, std::int64_t attackers,
                                            std::int64_t targets, std::int64_t spectators,
                                            double threshold = kDefaultTruncationThreshold);
    /// Explicit domain; values must be distinct and probs must sum to 1 within 1e-9.
    static FiniteScenario from_domain(std::vector<std::int64_t> values, std::vector<double> probs,
                                      std::int64_t attackers, std::int64_t targets,
                                      std::int64_t spectators);

    std::span<const std::int64_t> values() const noexcept { return values_; }
    std::span<const double> probs() const noexcept { return probs_; }
    std::int64_t attackers() const noexcept { return attackers_; }
    std::int64_t targets() const noexcept { return targets_; }
    std::int64_t spectators() const noexcept { return spectators_; }

    /// Throws ResourceError when the enumeration budget is exceeded.
    void check_budget() const;

private:
    FiniteScenario(std::vector<std::int64_t> values, std::vector<double> probs, std::int64_t attackers,
                   std::int64_t targets, std::int64_t spectators);

    std::vector<std::int64_t> values_;
    std::vector<double> probs_;
    std::int64_t attackers_;
    std::int64_t targets_;
    std::int64_t spectators_;
};

/// Output-weighted posterior entropy of the target vector for fixed inputs.
EntropyValue jwae(const FiniteScenario& sc, std::span<const std::int64_t> x_attacker,
                  std::span<const std::int64_t> x_target);

/// jwae averaged over attacker inputs.
EntropyValue twae(const FiniteScenario& sc, std::span<const std::int64_t> x_target);

/// jwae averaged over target inputs.
EntropyValue awae_enumerated(const FiniteScenario& sc, std::span<const std::int64_t> x_attacker);

/// H(X_T | X_A = x_A, O) straight from the joint table of (X_T, O).
EntropyValue conditional_entropy_joint(const FiniteScenario& sc, std::span<const std::int64_t> x_attacker);

/// max - min of awae_enumerated over every attacker vector.
double verify_claim1(const FiniteScenario& sc);

/// Sample covariance of (O1, O2), or (O1, O2') when cfg.participation is
/// once, from per-party normal draws with the given per-party mean.
/// Deterministic for a given (cfg, samples, seed, mean).
CovMatrix2 monte_carlo_covariance(const TwoExecConfig& cfg, std::uint64_t samples, std::uint64_t seed,
                                  double per_party_mean = 0.0);

inline constexpr std::uint64_t kMinMonteCarloSamples = 100'000;

/// Large-sample standard errors of the sample covariance entries for a
/// bivariate normal with covariance cov: Var(s_ij) = (c_ii c_jj + c_ij^2) / samples.
CovMatrix2 covariance_standard_errors(const CovMatrix2& cov, std::uint64_t samples);

}  // namespace leakwise::oracle
