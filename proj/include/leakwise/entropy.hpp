#pragma once

#include <compare>

#include "leakwise/distributions.hpp"

namespace leakwise {

/// An entropy in bits. Shannon entropies are non-negative; differential
/// entropies may take any finite value.
struct EntropyValue {
    double bits = 0.0;

    friend EntropyValue operator+(EntropyValue a, EntropyValue b) { return {a.bits + b.bits}; }
    friend EntropyValue operator-(EntropyValue a, EntropyValue b) { return {a.bits - b.bits}; }
    friend EntropyValue operator*(double k, EntropyValue a) { return {k * a.bits}; }
    friend auto operator<=>(const EntropyValue&, const EntropyValue&) = default;
};

/// Symmetric 2x2 covariance matrix [[xx, xy], [xy, yy]].
struct CovMatrix2 {
    double xx = 0.0;
    double xy = 0.0;
    double yy = 0.0;

    double determinant() const noexcept { return xx * yy - xy * xy; }
    friend bool operator==(const CovMatrix2&, const CovMatrix2&) = default;
};

/// Allowed drift of sum(probs) + truncated_mass away from 1.
inline constexpr double kNormalizationTolerance = 1e-6;
inline constexpr double kSingularDeterminant = 1e-12;
/// Smallest rate for which poisson_entropy_approx() is accepted.
inline constexpr double kPoissonSeriesMinRate = 10.0;

/// -sum p log2 p over the tabulated entries, with 0 log 0 = 0.
EntropyValue shannon_entropy(const Pmf& pmf);

EntropyValue differential_entropy_normal(double sigma2);
EntropyValue differential_entropy_lognormal(double mu, double sigma2);

/// Asymptotic series for the entropy of Pois(lambda).
EntropyValue poisson_entropy_approx(double lambda);

/// Differential entropy of a bivariate normal with the given covariance.
EntropyValue multivariate_normal_entropy(const CovMatrix2& cov);

}  // namespace leakwise
