#include "leakwise/single_execution.hpp"

#include <cmath>
#include <string>
#include <variant>

#include "leakwise/errors.hpp"
#include "leakwise/numfmt.hpp"
#include "leakwise/parallel.hpp"

namespace leakwise {

namespace {

// Entropy of the sum of `count` i.i.d. inputs.
EntropyValue sum_entropy(const DistributionSpec& dist, std::int64_t count, double threshold) {
    if (dist.is_discrete()) {
        return shannon_entropy(discrete_sum_table(dist, count, threshold));
    }
    if (count == 0) {
        throw DegenerateScenarioError("a continuous sum over zero inputs has no finite differential entropy");
    }
    if (const auto* d = std::get_if<Normal>(&dist.variant())) {
        return differential_entropy_normal(normal_sum_params(d->mu, d->sigma2, count).variance);
    }
    const auto& d = std::get<LogNormal>(dist.variant());
    const FwParams fw = fenton_wilkinson(d.mu, d.sigma2, count);
    return differential_entropy_lognormal(fw.mu_hat, fw.sigma2_hat);
}

void check_counts(const ScenarioConfig& s) {
    if (s.t < 1) throw DomainError("target count must be >= 1");
    if (s.n < 0) throw DomainError("spectator count must be >= 0");
}

}  // namespace

EntropyValue input_entropy(const DistributionSpec& dist, double threshold) {
    return sum_entropy(dist, 1, threshold);
}

EntropyValue awae(const ScenarioConfig& scenario) {
    check_counts(scenario);
    if (!scenario.dist.is_discrete() && scenario.n == 0) {
        throw DegenerateScenarioError("continuous inputs with no spectators reveal the target exactly");
    }
    const double thr = scenario.truncation_threshold;
    const EntropyValue targets = static_cast<double>(scenario.t) * input_entropy(scenario.dist, thr);
    return targets + sum_entropy(scenario.dist, scenario.n, thr) -
           sum_entropy(scenario.dist, scenario.t + scenario.n, thr);
}

EntropyReport loss_report(const ScenarioConfig& scenario) {
    check_counts(scenario);
    EntropyReport report;
    report.before = static_cast<double>(scenario.t) * input_entropy(scenario.dist, scenario.truncation_threshold);
    if (!(report.before.bits > 0.0)) {
        throw IllDefinedRelativeLossError("prior entropy " + format_number(report.before.bits) +
                                          " bits is not positive; relative loss is undefined");
    }
    report.after = awae(scenario);
    report.absolute_loss = (report.before - report.after).bits;
    report.relative_loss = report.absolute_loss / report.before.bits;
    return report;
}

EntropyValue normal_loss_closed_form(std::int64_t t, std::int64_t n) {
    if (t < 1) throw DomainError("target count must be >= 1");
    if (n < 1) throw DomainError("closed-form loss needs at least one spectator");
    return {0.5 * std::log2(static_cast<double>(t + n) / static_cast<double>(n))};
}

std::int64_t solve_min_spectators(const DistributionSpec& dist, std::int64_t t, double budget,
                                  double threshold) {
    if (!(budget > 0.0 && budget < 1.0)) throw DomainError("loss budget must lie in (0, 1)");
    if (t < 1) throw DomainError("target count must be >= 1");

    const auto meets = [&](std::int64_t n) {
        return loss_report(ScenarioConfig{dist, t, n, threshold}).relative_loss <= budget;
    };

    // Relative loss decreases in n: double until the budget is met, then bisect.
    std::int64_t fails = 0;  // largest count known to miss the budget (0 = none tested)
    std::int64_t passes = 1;
    while (!meets(passes)) {
        fails = passes;
        if (passes == kMaxSpectators) {
            throw UnboundedSearchError("loss budget " + format_number(budget) + " not met by " +
                                       std::to_string(kMaxSpectators) + " spectators");
        }
        passes = std::min(passes * 2, kMaxSpectators);
    }
    while (passes - fails > 1) {
        const std::int64_t mid = fails + (passes - fails) / 2;
        (meets(mid) ? passes : fails) = mid;
    }
    return passes;
}

std::vector<EntropyReport> sweep(const DistributionSpec& dist, std::int64_t t, std::int64_t n_max,
                                 double threshold) {
    if (n_max < 1) throw DomainError("sweep needs n_max >= 1");
    std::vector<EntropyReport> out(static_cast<std::size_t>(n_max));
    parallel_for(out.size(), [&](std::size_t i) {
        out[i] = loss_report(ScenarioConfig{dist, t, static_cast<std::int64_t>(i) + 1, threshold});
    });
    return out;
}

}  // namespace leakwise
