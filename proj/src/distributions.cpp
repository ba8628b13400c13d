#include "leakwise/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "leakwise/errors.hpp"
#include "leakwise/numfmt.hpp"
#include "log_gamma.hpp"

namespace leakwise {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require(bool ok, const std::string& what) {
    if (!ok) throw DomainError(what);
}

bool positive_finite(double x) { return std::isfinite(x) && x > 0.0; }

double poisson_log_pmf(double rate, std::int64_t a) {
    const double k = static_cast<double>(a);
    return k * std::log(rate) - rate - detail::log_gamma(k + 1.0);
}

// Smallest natural log of a double that still exponentiates to a nonzero value.

struct Evaluated {
    double value;
    double magnitude;  // sum of absolute term values
};

Evaluated uniform_sum_terms(std::int64_t N, std::int64_t n, std::int64_t x) {
    const std::int64_t top = n * (N - 1);
    if (x < 0 || x > top) return {0.0, 0.0};
    x = std::min(x, top - x);  // the sum is symmetric about top / 2

    const double dn = static_cast<double>(n);
    const double log_scale = dn * std::log(static_cast<double>(N));
    const std::int64_t p_max = std::min(n, x / N);

    std::vector<double> logs;
    logs.reserve(static_cast<std::size_t>(p_max + 1));
    for (std::int64_t p = 0; p <= p_max; ++p) {
        const double free = static_cast<double>(x - p * N);
        logs.push_back(detail::log_choose(dn, static_cast<double>(p)) +
                       detail::log_choose(free + dn - 1.0, dn - 1.0) - log_scale);
    }
    const double lmax = *std::max_element(logs.begin(), logs.end());
    double signed_sum = 0.0;
    double abs_sum = 0.0;
    for (std::size_t p = 0; p < logs.size(); ++p) {
        const double term = std::exp(logs[p] - lmax);
        signed_sum += (p % 2 == 0) ? term : -term;
        abs_sum += term;
    }
    const double scale = std::exp(lmax);
    return {signed_sum * scale, abs_sum * scale};
}

void check_uniform_args(std::int64_t N, std::int64_t n) {
    require(N >= 2, "uniform support size N must be >= 2");
    require(n >= 1, "summand count n must be >= 1");
}

}  // namespace

// ---------------------------------------------------------------------------
// DistributionSpec

DistributionSpec::DistributionSpec(Variant v) : v_(v) {
    std::visit(Overloaded{
                   [](const Poisson& p) { require(positive_finite(p.lambda), "poisson lambda must be > 0"); },
                   [](const DiscreteUniform& u) { require(u.upper >= 2, "uniform N must be >= 2"); },
                   [](const Normal& d) {
                       require(std::isfinite(d.mu), "normal mu must be finite");
                       require(positive_finite(d.sigma2), "normal sigma2 must be > 0");
                   },
                   [](const LogNormal& d) {
                       require(std::isfinite(d.mu), "lognormal mu must be finite");
                       require(positive_finite(d.sigma2), "lognormal sigma2 must be > 0");
                   },
               },
               v_);
}

bool DistributionSpec::is_discrete() const noexcept {
    return std::holds_alternative<Poisson>(v_) || std::holds_alternative<DiscreteUniform>(v_);
}

std::string DistributionSpec::to_string() const {
    return std::visit(Overloaded{
                          [](const Poisson& p) { return "poisson:lambda=" + format_number(p.lambda); },
                          [](const DiscreteUniform& u) { return "uniform:N=" + std::to_string(u.upper); },
                          [](const Normal& d) {
                              return "normal:mu=" + format_number(d.mu) + ",sigma2=" + format_number(d.sigma2);
                          },
                          [](const LogNormal& d) {
                              return "lognormal:mu=" + format_number(d.mu) + ",sigma2=" + format_number(d.sigma2);
                          },
                      },
                      v_);
}

// ---------------------------------------------------------------------------
// Pmf

double Pmf::total_mass() const noexcept {
    return std::accumulate(probs.begin(), probs.end(), 0.0) + truncated_mass;
}

double Pmf::at(std::int64_t x) const noexcept {
    if (x < offset || x > last()) return 0.0;
    return probs[static_cast<std::size_t>(x - offset)];
}

// ---------------------------------------------------------------------------
// Poisson

double poisson_sum_pmf(double lambda, std::int64_t n, std::int64_t a) {
    require(positive_finite(lambda), "poisson lambda must be > 0");
    require(n >= 1, "summand count n must be >= 1");
    require(a >= 0, "poisson support point must be >= 0");
    return std::exp(poisson_log_pmf(lambda * static_cast<double>(n), a));
}

Pmf poisson_sum_pmf_table(double lambda, std::int64_t n, double threshold) {
    require(positive_finite(lambda), "poisson lambda must be > 0");
    require(n >= 1, "summand count n must be >= 1");
    require(threshold > 0.0 && threshold <= 1e-3, "truncation threshold must lie in (0, 1e-3]");

    const double rate = lambda * static_cast<double>(n);
    const auto mode = static_cast<std::int64_t>(std::floor(rate));

    // The log pmf rises up to the mode, so bisect for the first representable entry.
    std::int64_t start = 0;
    const auto underflows = [&](std::int64_t a) { return std::exp(poisson_log_pmf(rate, a)) == 0.0; };
    if (underflows(0)) {
        std::int64_t lo = 0;
        std::int64_t hi = mode;
        while (hi - lo > 1) {
            const std::int64_t mid = lo + (hi - lo) / 2;
            (underflows(mid) ? lo : hi) = mid;
        }
        start = hi;
    }

    Pmf pmf;
    pmf.offset = start;
    pmf.truncation_threshold = threshold;
    std::int64_t a = start;
    for (;; ++a) {
        const double p = std::exp(poisson_log_pmf(rate, a));
        pmf.probs.push_back(p);
        if (a > mode && p < threshold) break;
    }

    // Past the mode the terms fall off at least geometrically.
    double tail = 0.0;
    for (std::int64_t b = a + 1;; ++b) {
        const double p = std::exp(poisson_log_pmf(rate, b));
        tail += p;
        if (p == 0.0 || p < tail * 1e-17) break;
    }
    pmf.truncated_mass = tail;
    return pmf;
}

// ---------------------------------------------------------------------------
// Uniform sums

double uniform_sum_pmf(std::int64_t N, std::int64_t n, std::int64_t x) {
    check_uniform_args(N, n);
    return std::max(0.0, uniform_sum_terms(N, n, x).value);
}

Pmf uniform_sum_convolution(std::int64_t N, std::int64_t n) {
    check_uniform_args(N, n);
    if (n > kConvolutionBound / N) {
        throw ResourceError("uniform convolution exceeds the tabulation bound n*N <= 1e7");
    }
    const double inv = 1.0 / static_cast<double>(N);
    const auto width = static_cast<std::size_t>(N);

    std::vector<double> cur(width, inv);
    std::vector<double> next;
    for (std::int64_t k = 2; k <= n; ++k) {
        // Each output is the mean of a window of N inputs. The table is
        // symmetric and unimodal, so a running window sum over the rising
        // half only ever subtracts terms smaller than the ones it adds.
        next.assign(cur.size() + width - 1, 0.0);
        const std::size_t last = next.size() - 1;
        double window = 0.0;
        for (std::size_t x = 0; x <= last / 2; ++x) {
            if (x < cur.size()) window += cur[x];
            if (x >= width) window -= cur[x - width];
            next[x] = window * inv;
            next[last - x] = next[x];
        }
        cur.swap(next);
    }
    Pmf pmf;
    pmf.probs = std::move(cur);
    return pmf;
}

Pmf uniform_sum_table(std::int64_t N, std::int64_t n) {
    check_uniform_args(N, n);
    if (n > kConvolutionBound / N) {
        throw ResourceError("uniform sum table exceeds the tabulation bound n*N <= 1e7");
    }
    // Above this ratio the alternating sum has lost more than ~3 of its 16 digits.
    constexpr double kMaxCancellation = 1e3;

    const std::int64_t top = n * (N - 1);
    Pmf pmf;
    pmf.probs.assign(static_cast<std::size_t>(top + 1), 0.0);
    for (std::int64_t x = 0; x <= top / 2; ++x) {
        const Evaluated e = uniform_sum_terms(N, n, x);
        if (!(e.value > 0.0) || e.magnitude > kMaxCancellation * e.value) {
            return uniform_sum_convolution(N, n);
        }
        pmf.probs[static_cast<std::size_t>(x)] = e.value;
        pmf.probs[static_cast<std::size_t>(top - x)] = e.value;
    }
    return pmf;
}

// ---------------------------------------------------------------------------
// Continuous sums

FwParams fenton_wilkinson(double mu, double sigma2, std::int64_t n) {
    require(std::isfinite(mu), "lognormal mu must be finite");
    require(positive_finite(sigma2), "lognormal sigma2 must be > 0");
    require(sigma2 <= kFentonWilkinsonMaxSigma2,
            "Fenton-Wilkinson approximation is unreliable for sigma2 > 4");
    require(n >= 1, "summand count n must be >= 1");
    if (n == 1) return {mu, sigma2};

    const double dn = static_cast<double>(n);
    const double sigma2_hat = std::log1p(std::expm1(sigma2) / dn);
    const double mu_hat = std::log(dn) + mu + 0.5 * (sigma2 - sigma2_hat);
    return {mu_hat, sigma2_hat};
}

NormalParams normal_sum_params(double mu, double sigma2, std::int64_t n) {
    require(std::isfinite(mu), "normal mu must be finite");
    require(positive_finite(sigma2), "normal sigma2 must be > 0");
    require(n >= 1, "summand count n must be >= 1");
    const double dn = static_cast<double>(n);
    return {dn * mu, dn * sigma2};
}

// ---------------------------------------------------------------------------

Pmf discrete_sum_table(const DistributionSpec& dist, std::int64_t n, double threshold) {
    require(n >= 0, "summand count must be >= 0");
    if (n == 0) {
        Pmf point;
        point.probs = {1.0};
        point.truncation_threshold = threshold;
        return point;
    }
    if (const auto* p = std::get_if<Poisson>(&dist.variant())) {
        return poisson_sum_pmf_table(p->lambda, n, threshold);
    }
    if (const auto* u = std::get_if<DiscreteUniform>(&dist.variant())) {
        return uniform_sum_table(u->upper, n);
    }
    throw DomainError("discrete_sum_table requires a discrete distribution, got " + dist.to_string());
}

Pmf convolve(const Pmf& lhs, const Pmf& rhs) {
    Pmf out;
    out.offset = lhs.offset + rhs.offset;
    out.truncation_threshold = std::max(lhs.truncation_threshold, rhs.truncation_threshold);
    out.truncated_mass = lhs.truncated_mass + rhs.truncated_mass - lhs.truncated_mass * rhs.truncated_mass;
    if (lhs.probs.empty() || rhs.probs.empty()) return out;
    out.probs.assign(lhs.probs.size() + rhs.probs.size() - 1, 0.0);
    for (std::size_t i = 0; i < lhs.probs.size(); ++i) {
        if (lhs.probs[i] == 0.0) continue;
        for (std::size_t j = 0; j < rhs.probs.size(); ++j) {
            out.probs[i + j] += lhs.probs[i] * rhs.probs[j];
        }
    }
    return out;
}

}  // namespace leakwise
