#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace leakwise {

inline constexpr double kDefaultTruncationThreshold = 1e-7;

struct Poisson {
    double lambda;

    friend bool operator==(const Poisson&, const Poisson&) = default;
};

/// Uniform over {0, ..., upper - 1}.
struct DiscreteUniform {
    std::int64_t upper;

    friend bool operator==(const DiscreteUniform&, const DiscreteUniform&) = default;
};

struct Normal {
    double mu;
    double sigma2;

    friend bool operator==(const Normal&, const Normal&) = default;
};

/// Parameters are the mean and variance of the variable's natural logarithm.
struct LogNormal {
    double mu;
    double sigma2;

    friend bool operator==(const LogNormal&, const LogNormal&) = default;
};

/// Common distribution of every participant's private input.
class DistributionSpec {
public:
    using Variant = std::variant<Poisson, DiscreteUniform, Normal, LogNormal>;

    // Throws DomainError when the parameters violate the family's invariants.
    DistributionSpec(Variant v);  // NOLINT(google-explicit-constructor)
    DistributionSpec(Poisson d) : DistributionSpec(Variant{d}) {}          // NOLINT(google-explicit-constructor)
    DistributionSpec(DiscreteUniform d) : DistributionSpec(Variant{d}) {}  // NOLINT(google-explicit-constructor)
    DistributionSpec(Normal d) : DistributionSpec(Variant{d}) {}           // NOLINT(google-explicit-constructor)
    DistributionSpec(LogNormal d) : DistributionSpec(Variant{d}) {}        // NOLINT(google-explicit-constructor)

    const Variant& variant() const noexcept { return v_; }
    bool is_discrete() const noexcept;

    /// Short form such as "poisson:lambda=4"; parseable by parse_distribution().
    std::string to_string() const;

    friend bool operator==(const DistributionSpec&, const DistributionSpec&) = default;

private:
    Variant v_;
};

/// Tabulated probability mass function over the integers
/// offset, offset + 1, ..., offset + probs.size() - 1.
struct Pmf {
    std::int64_t offset = 0;
    std::vector<double> probs;
    double truncation_threshold = kDefaultTruncationThreshold;
    double truncated_mass = 0.0;

    double total_mass() const noexcept;
    std::int64_t last() const noexcept { return offset + static_cast<std::int64_t>(probs.size()) - 1; }
    /// Probability at support point x, 0 outside the tabulated range.
    double at(std::int64_t x) const noexcept;
};

/// Log-normal parameters approximating a sum of i.i.d. log-normals.
struct FwParams {
    double mu_hat;
    double sigma2_hat;
};

struct NormalParams {
    double mean;
    double variance;
};

/// Largest log-normal variance accepted by fenton_wilkinson().
inline constexpr double kFentonWilkinsonMaxSigma2 = 4.0;
/// Upper bound on n * N for uniform_sum_convolution().
inline constexpr std::int64_t kConvolutionBound = 10'000'000;

/// Pr(X_1 + ... + X_n = a) for X_i ~ Pois(lambda), evaluated in log-gamma form.
double poisson_sum_pmf(double lambda, std::int64_t n, std::int64_t a);

/// Tabulates the Poisson sum from a = 0 upward. Entries that underflow to
/// exactly zero are skipped through the offset; the scan halts at the first
/// a past the mode floor(n*lambda) whose mass falls below threshold.
Pmf poisson_sum_pmf_table(double lambda, std::int64_t n,
                          double threshold = kDefaultTruncationThreshold);

/// Pr(X_1 + ... + X_n = x) for X_i ~ U(0, N-1) by the alternating binomial
/// closed form, summed in log space with sign tracking. Returns 0 outside
/// {0, ..., n(N-1)}.
double uniform_sum_pmf(std::int64_t N, std::int64_t n, std::int64_t x);

/// Exact iterated convolution of n copies of U(0, N-1).
Pmf uniform_sum_convolution(std::int64_t N, std::int64_t n);

/// Full table of the n-fold uniform sum. Uses the closed form while its
/// cancellation stays harmless and falls back to convolution otherwise.
Pmf uniform_sum_table(std::int64_t N, std::int64_t n);

/// Moment-matched log-normal for the sum of n i.i.d. LogN(mu, sigma2).
FwParams fenton_wilkinson(double mu, double sigma2, std::int64_t n);

NormalParams normal_sum_params(double mu, double sigma2, std::int64_t n);

/// Distribution of the sum of n i.i.d. inputs for a discrete family.
/// n = 0 yields the point mass at zero.
Pmf discrete_sum_table(const DistributionSpec& dist, std::int64_t n,
                       double threshold = kDefaultTruncationThreshold);

/// Direct discrete convolution of two tables.
Pmf convolve(const Pmf& lhs, const Pmf& rhs);

}  // namespace leakwise
