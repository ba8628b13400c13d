#include "leakwise/entropy.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "leakwise/errors.hpp"
#include "leakwise/numfmt.hpp"

namespace leakwise {

namespace {

constexpr double kTwoPiE = 2.0 * std::numbers::pi * std::numbers::e;

}  // namespace

EntropyValue shannon_entropy(const Pmf& pmf) {
    double total = 0.0;
    for (double p : pmf.probs) {
        if (!(p >= 0.0)) throw DomainError("pmf has a negative or NaN entry");
        total += p;
    }
    if (std::abs(total + pmf.truncated_mass - 1.0) > kNormalizationTolerance) {
        throw DomainError("pmf is not normalized: mass " + format_number(total + pmf.truncated_mass));
    }
    double h = 0.0;
    for (double p : pmf.probs) {
        if (p > 0.0) h -= p * std::log2(p);
    }
    return {h};
}

EntropyValue differential_entropy_normal(double sigma2) {
    if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) throw DomainError("normal variance must be > 0");
    return {0.5 * std::log2(kTwoPiE * sigma2)};
}

EntropyValue differential_entropy_lognormal(double mu, double sigma2) {
    if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) throw DomainError("lognormal sigma2 must be > 0");
    if (!std::isfinite(mu)) throw DomainError("lognormal mu must be finite");
    // log2(e^(mu + 1/2) * sqrt(2 pi sigma2)), expanded to avoid overflow in e^mu
    return {(mu + 0.5) * std::numbers::log2e + 0.5 * std::log2(2.0 * std::numbers::pi * sigma2)};
}

EntropyValue poisson_entropy_approx(double lambda) {
    if (!(lambda >= kPoissonSeriesMinRate) || !std::isfinite(lambda)) {
        throw DomainError("poisson entropy series requires lambda >= 10");
    }
    const double l = lambda;
    const double correction = 1.0 / (12.0 * l) + 1.0 / (24.0 * l * l) + 19.0 / (360.0 * l * l * l);
    return {0.5 * std::log2(kTwoPiE * l) - correction * std::numbers::log2e};
}

EntropyValue multivariate_normal_entropy(const CovMatrix2& cov) {
    if (!std::isfinite(cov.xx) || !std::isfinite(cov.xy) || !std::isfinite(cov.yy)) {
        throw DomainError("covariance entries must be finite");
    }
    const double det = cov.determinant();
    if (!(det > kSingularDeterminant)) {
        throw SingularityError("covariance determinant " + format_number(det) + " is singular");
    }
    return {0.5 * std::log2(kTwoPiE * kTwoPiE * det)};
}

}  // namespace leakwise
