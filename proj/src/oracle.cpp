#include "leakwise/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <string>

#include "leakwise/errors.hpp"

namespace leakwise::oracle {

namespace {

// Calls fn(indices) for every length-k tuple over {0..base-1}, in lexicographic order.
template <class Fn>
void for_each_tuple(std::int64_t k, std::size_t base, Fn&& fn) {
    std::vector<std::size_t> idx(static_cast<std::size_t>(k), 0);
    for (;;) {
        fn(std::span<const std::size_t>(idx));
        std::size_t pos = idx.size();
        while (pos > 0) {
            --pos;
            if (++idx[pos] < base) break;
            idx[pos] = 0;
            if (pos == 0) return;
        }
        if (idx.empty()) return;
    }
}

double plogp(double p) { return p > 0.0 ? p * std::log2(p) : 0.0; }

// Distribution of a dense integer range [lo, lo + probs.size()).
struct RangeDist {
    std::int64_t lo = 0;
    std::vector<double> probs;

    double at(std::int64_t x) const {
        if (x < lo || x >= lo + static_cast<std::int64_t>(probs.size())) return 0.0;
        return probs[static_cast<std::size_t>(x - lo)];
    }
};

struct TargetVector {
    double prob;
    std::int64_t sum;
};

class Enumeration {
public:
    explicit Enumeration(const FiniteScenario& sc) : sc_(sc) {
        sc.check_budget();
        const auto vals = sc.values();
        min_ = *std::min_element(vals.begin(), vals.end());
        max_ = *std::max_element(vals.begin(), vals.end());
        build_spectator_sum();
        build_targets();
    }

    // Posterior entropy H(X_T | X_A = x_A, O = o) for every reachable o,
    // indexed from o = attacker_sum + t*min + s*min.
    const std::vector<double>& posterior_entropies(std::int64_t attacker_sum) {
        auto it = posterior_cache_.find(attacker_sum);
        if (it != posterior_cache_.end()) return it->second;

        std::vector<double> h(output_width(), 0.0);
        std::vector<double> weights(targets_.size());
        for (std::size_t k = 0; k < h.size(); ++k) {
            const std::int64_t o = output_lo(attacker_sum) + static_cast<std::int64_t>(k);
            double p_o = 0.0;
            for (std::size_t j = 0; j < targets_.size(); ++j) {
                weights[j] = targets_[j].prob * spectators_.at(o - attacker_sum - targets_[j].sum);
                p_o += weights[j];
            }
            if (p_o <= 0.0) continue;
            double acc = 0.0;
            for (double w : weights) acc -= plogp(w / p_o);
            h[k] = acc;
        }
        return posterior_cache_.emplace(attacker_sum, std::move(h)).first->second;
    }

    double jwae(std::int64_t attacker_sum, std::int64_t target_sum) {
        const auto& h = posterior_entropies(attacker_sum);
        double acc = 0.0;
        for (std::size_t r = 0; r < spectators_.probs.size(); ++r) {
            const double p = spectators_.probs[r];
            if (p == 0.0) continue;
            const std::int64_t o = attacker_sum + target_sum + spectators_.lo + static_cast<std::int64_t>(r);
            acc += p * h[static_cast<std::size_t>(o - output_lo(attacker_sum))];
        }
        return acc;
    }

    double awae(std::int64_t attacker_sum) {
        double acc = 0.0;
        for (const auto& tv : targets_) acc += tv.prob * jwae(attacker_sum, tv.sum);
        return acc;
    }

    double joint_conditional(std::int64_t attacker_sum) const {
        double h = 0.0;
        std::vector<double> weights(targets_.size());
        for (std::size_t k = 0; k < output_width(); ++k) {
            const std::int64_t o = output_lo(attacker_sum) + static_cast<std::int64_t>(k);
            double p_o = 0.0;
            for (std::size_t j = 0; j < targets_.size(); ++j) {
                weights[j] = targets_[j].prob * spectators_.at(o - attacker_sum - targets_[j].sum);
                p_o += weights[j];
            }
            for (double w : weights) {
                if (w > 0.0) h -= w * std::log2(w / p_o);
            }
        }
        return h;
    }

    // (probability, sum) of every attacker vector.
    std::vector<TargetVector> attacker_vectors() const { return vectors_of(sc_.attackers()); }

    // Probability of a concrete input vector; throws if a value is outside D.
    double vector_prob(std::span<const std::int64_t> x, std::int64_t expected_len, const char* who) const {
        if (static_cast<std::int64_t>(x.size()) != expected_len) {
            throw DomainError(std::string(who) + " vector has length " + std::to_string(x.size()) +
                              ", expected " + std::to_string(expected_len));
        }
        double p = 1.0;
        for (std::int64_t v : x) {
            const auto vals = sc_.values();
            const auto it = std::find(vals.begin(), vals.end(), v);
            if (it == vals.end()) {
                throw DomainError(std::string(who) + " input " + std::to_string(v) + " is outside the domain");
            }
            p *= sc_.probs()[static_cast<std::size_t>(it - vals.begin())];
        }
        return p;
    }

private:
    std::int64_t output_lo(std::int64_t attacker_sum) const {
        return attacker_sum + (sc_.targets() + sc_.spectators()) * min_;
    }
    std::size_t output_width() const {
        return static_cast<std::size_t>((sc_.targets() + sc_.spectators()) * (max_ - min_) + 1);
    }

    std::vector<TargetVector> vectors_of(std::int64_t count) const {
        std::vector<TargetVector> out;
        const auto vals = sc_.values();
        const auto probs = sc_.probs();
        for_each_tuple(count, vals.size(), [&](std::span<const std::size_t> idx) {
            double p = 1.0;
            std::int64_t sum = 0;
            for (std::size_t i : idx) {
                p *= probs[i];
                sum += vals[i];
            }
            out.push_back({p, sum});
        });
        return out;
    }

    void build_targets() { targets_ = vectors_of(sc_.targets()); }

    void build_spectator_sum() {
        const std::int64_t s = sc_.spectators();
        spectators_.lo = s * min_;
        spectators_.probs.assign(static_cast<std::size_t>(s * (max_ - min_) + 1), 0.0);
        const auto vals = sc_.values();
        const auto probs = sc_.probs();
        if (s <= kMaxSpectatorTuples) {
            for (const auto& v : vectors_of(s)) {
                spectators_.probs[static_cast<std::size_t>(v.sum - spectators_.lo)] += v.prob;
            }
            return;
        }
        // Only the spectator sum enters the output, so fold one party at a time.
        RangeDist acc{0, {1.0}};
        for (std::int64_t k = 0; k < s; ++k) {
            RangeDist next{acc.lo + min_, std::vector<double>(acc.probs.size() + static_cast<std::size_t>(max_ - min_), 0.0)};
            for (std::size_t i = 0; i < acc.probs.size(); ++i) {
                for (std::size_t d = 0; d < vals.size(); ++d) {
                    next.probs[i + static_cast<std::size_t>(vals[d] - min_)] += acc.probs[i] * probs[d];
                }
            }
            acc = std::move(next);
        }
        spectators_ = std::move(acc);
    }

    const FiniteScenario& sc_;
    std::int64_t min_ = 0;
    std::int64_t max_ = 0;
    RangeDist spectators_;
    std::vector<TargetVector> targets_;
    std::map<std::int64_t, std::vector<double>> posterior_cache_;
};

std::int64_t sum_of(std::span<const std::int64_t> x) { return std::accumulate(x.begin(), x.end(), std::int64_t{0}); }

}  // namespace

// ---------------------------------------------------------------------------
// FiniteScenario

FiniteScenario::FiniteScenario(std::vector<std::int64_t> values, std::vector<double> probs,
                               std::int64_t attackers, std::int64_t targets, std::int64_t spectators)
    : values_(std::move(values)),
      probs_(std::move(probs)),
      attackers_(attackers),
      targets_(targets),
      spectators_(spectators) {
    if (attackers_ < 1) throw DomainError("attacker count must be >= 1");
    if (targets_ < 1) throw DomainError("target count must be >= 1");
    if (spectators_ < 0) throw DomainError("spectator count must be >= 0");
    if (values_.empty() || values_.size() != probs_.size()) {
        throw DomainError("domain values and probabilities must be non-empty and equally long");
    }
    if (std::set<std::int64_t>(values_.begin(), values_.end()).size() != values_.size()) {
        throw DomainError("domain values must be distinct");
    }
    double total = 0.0;
    for (double p : probs_) {
        if (!(p >= 0.0)) throw DomainError("domain probabilities must be >= 0");
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-9) throw DomainError("domain probabilities must sum to 1");
}

FiniteScenario FiniteScenario::from_domain(std::vector<std::int64_t> values, std::vector<double> probs,
                                           std::int64_t attackers, std::int64_t targets,
                                           std::int64_t spectators) {
    return FiniteScenario(std::move(values), std::move(probs), attackers, targets, spectators);
}

FiniteScenario FiniteScenario::from_distribution(const DistributionSpec& dist, std::int64_t attackers,
                                                 std::int64_t targets, std::int64_t spectators,
                                                 double threshold) {
    std::vector<std::int64_t> values;
    std::vector<double> probs;
    if (const auto* u = std::get_if<DiscreteUniform>(&dist.variant())) {
        for (std::int64_t v = 0; v < u->upper; ++v) {
            values.push_back(v);
            probs.push_back(1.0 / static_cast<double>(u->upper));
        }
    } else if (const auto* p = std::get_if<Poisson>(&dist.variant())) {
        const Pmf table = poisson_sum_pmf_table(p->lambda, 1, threshold);
        const double kept = std::accumulate(table.probs.begin(), table.probs.end(), 0.0);
        for (std::size_t i = 0; i < table.probs.size(); ++i) {
            values.push_back(table.offset + static_cast<std::int64_t>(i));
            probs.push_back(table.probs[i] / kept);
        }
    } else {
        throw DomainError("enumeration needs a discrete distribution, got " + dist.to_string());
    }
    return FiniteScenario(std::move(values), std::move(probs), attackers, targets, spectators);
}

void FiniteScenario::check_budget() const {
    const double parties = static_cast<double>(attackers_ + targets_ + spectators_);
    const double log_size = parties * std::log(static_cast<double>(values_.size()));
    if (log_size > std::log(kEnumerationBudget) + 1e-12) {
        throw ResourceError("enumeration over " + std::to_string(values_.size()) + "^" +
                            std::to_string(attackers_ + targets_ + spectators_) +
                            " input combinations exceeds the 1e8 budget");
    }
}

// ---------------------------------------------------------------------------
// Definitions

EntropyValue jwae(const FiniteScenario& sc, std::span<const std::int64_t> x_attacker,
                  std::span<const std::int64_t> x_target) {
    Enumeration e(sc);
    e.vector_prob(x_attacker, sc.attackers(), "attacker");
    e.vector_prob(x_target, sc.targets(), "target");
    return {e.jwae(sum_of(x_attacker), sum_of(x_target))};
}

EntropyValue twae(const FiniteScenario& sc, std::span<const std::int64_t> x_target) {
    Enumeration e(sc);
    e.vector_prob(x_target, sc.targets(), "target");
    const std::int64_t target_sum = sum_of(x_target);
    double acc = 0.0;
    for (const auto& av : e.attacker_vectors()) acc += av.prob * e.jwae(av.sum, target_sum);
    return {acc};
}

EntropyValue awae_enumerated(const FiniteScenario& sc, std::span<const std::int64_t> x_attacker) {
    Enumeration e(sc);
    e.vector_prob(x_attacker, sc.attackers(), "attacker");
    return {e.awae(sum_of(x_attacker))};
}

EntropyValue conditional_entropy_joint(const FiniteScenario& sc, std::span<const std::int64_t> x_attacker) {
    Enumeration e(sc);
    e.vector_prob(x_attacker, sc.attackers(), "attacker");
    return {e.joint_conditional(sum_of(x_attacker))};
}

double verify_claim1(const FiniteScenario& sc) {
    Enumeration e(sc);
    double lo = 0.0;
    double hi = 0.0;
    bool first = true;
    for (const auto& av : e.attacker_vectors()) {
        const double v = e.awae(av.sum);
        lo = first ? v : std::min(lo, v);
        hi = first ? v : std::max(hi, v);
        first = false;
    }
    return hi - lo;
}

// ---------------------------------------------------------------------------
// Monte Carlo

CovMatrix2 monte_carlo_covariance(const TwoExecConfig& cfg, std::uint64_t samples, std::uint64_t seed,
                                  double per_party_mean) {
    cfg.validate();
    if (samples < kMinMonteCarloSamples) throw DomainError("Monte Carlo needs at least 1e5 samples");
    if (!std::isfinite(per_party_mean)) throw DomainError("per-party mean must be finite");

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> party(per_party_mean, std::sqrt(cfg.sigma2));
    const auto group = [&](std::int64_t size) {
        double s = 0.0;
        for (std::int64_t i = 0; i < size; ++i) s += party(rng);
        return s;
    };

    // Welford co-moment updates; the means can dwarf the spread.
    double mean_x = 0.0, mean_y = 0.0, m_xx = 0.0, m_xy = 0.0, m_yy = 0.0;
    for (std::uint64_t k = 1; k <= samples; ++k) {
        const double target = group(cfg.t);
        const double shared = group(cfg.s0);
        const double first = group(cfg.s1);
        const double second = group(cfg.s2);
        const double x = target + shared + first;
        const double y = (cfg.participation == Participation::twice ? target : 0.0) + shared + second;

        const double dx = x - mean_x;
        const double dy = y - mean_y;
        const double inv = 1.0 / static_cast<double>(k);
        mean_x += dx * inv;
        mean_y += dy * inv;
        m_xx += dx * (x - mean_x);
        m_yy += dy * (y - mean_y);
        m_xy += dx * (y - mean_y);
    }
    const double denom = static_cast<double>(samples - 1);
    return {m_xx / denom, m_xy / denom, m_yy / denom};
}

CovMatrix2 covariance_standard_errors(const CovMatrix2& cov, std::uint64_t samples) {
    const double n = static_cast<double>(samples);
    return {std::sqrt(2.0 * cov.xx * cov.xx / n), std::sqrt((cov.xx * cov.yy + cov.xy * cov.xy) / n),
            std::sqrt(2.0 * cov.yy * cov.yy / n)};
}

}  // namespace leakwise::oracle
