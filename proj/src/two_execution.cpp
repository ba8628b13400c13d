#include "leakwise/two_execution.hpp"

#include <cmath>

#include "leakwise/errors.hpp"

namespace leakwise {

namespace {

struct GroupVariances {
    double target, shared, first, second;
};

GroupVariances variances(const TwoExecConfig& cfg, double sigma2) {
    return {static_cast<double>(cfg.t) * sigma2, static_cast<double>(cfg.s0) * sigma2,
            static_cast<double>(cfg.s1) * sigma2, static_cast<double>(cfg.s2) * sigma2};
}

CovMatrix2 o_matrix(const GroupVariances& v) {
    return {v.target + v.shared + v.first, v.target + v.shared, v.target + v.shared + v.second};
}

CovMatrix2 s_matrix(const GroupVariances& v) {
    return {v.shared + v.first, v.shared, v.shared + v.second};
}

CovMatrix2 o_prime_matrix(const GroupVariances& v) {
    return {v.target + v.shared + v.first, v.shared, v.shared + v.second};
}

// The bivariate terms enter only as h(S) - h(O), in which sigma2 cancels;
// evaluating at unit variance keeps every determinant an integer >= 1.
EntropyValue bivariate_gap(const CovMatrix2& spectators, const CovMatrix2& outputs) {
    return multivariate_normal_entropy(spectators) - multivariate_normal_entropy(outputs);
}

bool all_shared(const TwoExecConfig& cfg) { return cfg.s1 == 0 && cfg.s2 == 0; }

}  // namespace

void TwoExecConfig::validate() const {
    if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) throw DomainError("sigma2 must be > 0");
    if (t < 1) throw DomainError("target count must be >= 1");
    if (s0 < 0 || s1 < 0 || s2 < 0) throw DomainError("spectator counts must be >= 0");
    if (s0 + s1 < 1) throw DomainError("first execution needs at least one spectator");
    if (s0 + s2 < 1) throw DomainError("second execution needs at least one spectator");
}

CovMatrix2 covariance_O(const TwoExecConfig& cfg) {
    cfg.validate();
    return o_matrix(variances(cfg, cfg.sigma2));
}

CovMatrix2 covariance_S(const TwoExecConfig& cfg) {
    cfg.validate();
    return s_matrix(variances(cfg, cfg.sigma2));
}

CovMatrix2 covariance_O_prime(const TwoExecConfig& cfg) {
    cfg.validate();
    return o_prime_matrix(variances(cfg, cfg.sigma2));
}

double determinant_O(const TwoExecConfig& cfg) {
    cfg.validate();
    const auto v = variances(cfg, cfg.sigma2);
    return v.target * (v.first + v.second) + v.shared * (v.first + v.second) + v.first * v.second;
}

double determinant_O_prime(const TwoExecConfig& cfg) {
    cfg.validate();
    const auto v = variances(cfg, cfg.sigma2);
    return v.target * (v.shared + v.second) + v.shared * (v.first + v.second) + v.first * v.second;
}

EntropyValue target_entropy(const TwoExecConfig& cfg) {
    cfg.validate();
    return static_cast<double>(cfg.t) * differential_entropy_normal(cfg.sigma2);
}

EntropyValue cond_entropy_first(const TwoExecConfig& cfg) {
    cfg.validate();
    const double n = static_cast<double>(cfg.s0 + cfg.s1);
    const double t = static_cast<double>(cfg.t);
    return target_entropy(cfg) + differential_entropy_normal(n * cfg.sigma2) -
           differential_entropy_normal((t + n) * cfg.sigma2);
}

EntropyValue cond_entropy_two_exec(const TwoExecConfig& cfg) {
    cfg.validate();
    if (cfg.participation != Participation::twice) {
        throw DomainError("cond_entropy_two_exec requires participation = twice");
    }
    // Full overlap repeats the first output: h(X_T | O1, O1) = h(X_T | O1).
    if (all_shared(cfg)) return cond_entropy_first(cfg);
    const auto unit = variances(cfg, 1.0);
    return target_entropy(cfg) + bivariate_gap(s_matrix(unit), o_matrix(unit));
}

EntropyValue cond_entropy_once(const TwoExecConfig& cfg) {
    cfg.validate();
    if (cfg.participation != Participation::once) {
        throw DomainError("cond_entropy_once requires participation = once");
    }
    // Full overlap makes O2' = X_S0, leaving h(X_T) - h(X_T summed); zero for t = 1.
    if (all_shared(cfg)) {
        return target_entropy(cfg) -
               differential_entropy_normal(static_cast<double>(cfg.t) * cfg.sigma2);
    }
    const auto unit = variances(cfg, 1.0);
    return target_entropy(cfg) + bivariate_gap(s_matrix(unit), o_prime_matrix(unit));
}

EntropyValue cond_entropy_after_two(const TwoExecConfig& cfg) {
    return cfg.participation == Participation::twice ? cond_entropy_two_exec(cfg) : cond_entropy_once(cfg);
}

double second_exec_loss_ratio(const TwoExecConfig& cfg) {
    const EntropyValue before = target_entropy(cfg);
    const EntropyValue first = cond_entropy_first(cfg);
    const double first_loss = (before - first).bits;
    if (!(first_loss > 0.0)) throw DomainError("first-execution loss is zero; ratio undefined");
    return (first - cond_entropy_after_two(cfg)).bits / first_loss;
}

std::vector<OverlapPoint> overlap_sweep(double sigma2, std::int64_t t, std::int64_t n_per_exec,
                                        Participation participation) {
    if (n_per_exec < 1) throw DomainError("n_per_exec must be >= 1");
    std::vector<OverlapPoint> out;
    out.reserve(static_cast<std::size_t>(n_per_exec + 1));
    for (std::int64_t s0 = 0; s0 <= n_per_exec; ++s0) {
        const TwoExecConfig cfg{sigma2, t, s0, n_per_exec - s0, n_per_exec - s0, participation};
        OverlapPoint p;
        p.s0 = cfg.s0;
        p.s1 = cfg.s1;
        p.s2 = cfg.s2;
        p.overlap = static_cast<double>(s0) / static_cast<double>(n_per_exec);
        p.h_before = target_entropy(cfg);
        p.h_first = cond_entropy_first(cfg);
        p.h_both = cond_entropy_after_two(cfg);
        p.ratio = second_exec_loss_ratio(cfg);
        out.push_back(p);
    }
    return out;
}

}  // namespace leakwise
