#pragma once

#include <cstdint>
#include <vector>

#include "leakwise/entropy.hpp"

namespace leakwise {

/// Whether the target contributes to the second execution. With `once`
/// the second output is O2' = X_S0 + X_S2.
enum class Participation { twice, once };

/// Two executions of the sum over normal inputs with common variance.
/// Spectators in s0 take part in both executions with unchanged inputs;
/// s1 and s2 appear only in the first and second execution respectively.
struct TwoExecConfig {
    double sigma2 = 4.0;
    std::int64_t t = 1;
    std::int64_t s0 = 0;
    std::int64_t s1 = 0;
    std::int64_t s2 = 0;
    Participation participation = Participation::twice;

    /// Throws DomainError unless every count and the variance are admissible.
    void validate() const;
};

/// Covariance of (O1, O2).
CovMatrix2 covariance_O(const TwoExecConfig& cfg);
/// Covariance of (X_S0 + X_S1, X_S0 + X_S2). Singular when s1 = s2 = 0.
CovMatrix2 covariance_S(const TwoExecConfig& cfg);
/// Covariance of (O1, O2').
CovMatrix2 covariance_O_prime(const TwoExecConfig& cfg);

/// Expanded determinants in terms of the group variances.
double determinant_O(const TwoExecConfig& cfg);
double determinant_O_prime(const TwoExecConfig& cfg);

/// Prior entropy of the target vector, t * h(N(0, sigma2)).
EntropyValue target_entropy(const TwoExecConfig& cfg);
/// h(X_T | O1) with s0 + s1 spectators in the first execution.
EntropyValue cond_entropy_first(const TwoExecConfig& cfg);
/// h(X_T | O1, O2); requires participation == twice.
EntropyValue cond_entropy_two_exec(const TwoExecConfig& cfg);
/// h(X_T | O1, O2'); requires participation == once.
EntropyValue cond_entropy_once(const TwoExecConfig& cfg);
/// Dispatches on cfg.participation.
EntropyValue cond_entropy_after_two(const TwoExecConfig& cfg);

/// Loss from the second execution divided by the loss from the first.
double second_exec_loss_ratio(const TwoExecConfig& cfg);

struct OverlapPoint {
    std::int64_t s0 = 0;
    std::int64_t s1 = 0;
    std::int64_t s2 = 0;
    double overlap = 0.0;  // s0 / n_per_exec
    EntropyValue h_before;
    EntropyValue h_first;
    EntropyValue h_both;
    double ratio = 0.0;
};

/// s0 = 0..n_per_exec with s1 = s2 = n_per_exec - s0.
std::vector<OverlapPoint> overlap_sweep(double sigma2, std::int64_t t, std::int64_t n_per_exec,
                                        Participation participation);

}  // namespace leakwise
