#include <cmath>
#include <numbers>

#include "doctest.h"
#include "leakwise/errors.hpp"
#include "leakwise/two_execution.hpp"

using namespace leakwise;
using doctest::Approx;

namespace {

// Reference values from the Schur complement of the joint Gaussian
// covariance, computed at 30 significant digits.
constexpr double kOnce40 = 2.9659598707312026;
constexpr double kOnce50 = 2.9568094623597307;
constexpr double kOnce60 = 2.9423689023661662;
constexpr double kTwice40 = 2.9507730462094432;
constexpr double kTwice60 = 2.9621330844594849;
constexpr double kT2Twice = 5.8253627773898825;   // sigma2 4, t 2, s = (3, 2, 5)
constexpr double kT2Once = 5.7939948997159011;    // same counts, once
constexpr double kT3Twice = 3.5173229988201306;   // sigma2 0.5, t 3, s = (0, 4, 1)
constexpr double kOnce128 = 5.4640906094611765;   // sigma2 128, t 1, s = (2, 7, 3)

TwoExecConfig cfg(double sigma2, std::int64_t t, std::int64_t s0, std::int64_t s1, std::int64_t s2,
                  Participation p) {
    return TwoExecConfig{sigma2, t, s0, s1, s2, p};
}

// h(X_T | observations) by conditioning the joint Gaussian directly.
double schur_entropy(const TwoExecConfig& c) {
    const bool twice = c.participation == Participation::twice;
    const CovMatrix2 o = twice ? covariance_O(c) : covariance_O_prime(c);
    const double det = o.determinant();
    const double c2 = twice ? 1.0 : 0.0;
    const double w = (o.yy - 2 * o.xy * c2 + o.xx * c2 * c2) / det;
    const double t = static_cast<double>(c.t);
    const double s2 = c.sigma2;
    return 0.5 * t * std::log2(2 * std::numbers::pi * std::numbers::e * s2) + 0.5 * std::log2(1 - t * s2 * w);
}

}  // namespace

TEST_CASE("covariance matrices") {
    const auto c = cfg(2.0, 1, 3, 2, 4, Participation::twice);
    CHECK(covariance_O(c) == CovMatrix2{12.0, 8.0, 16.0});
    CHECK(covariance_S(c) == CovMatrix2{10.0, 6.0, 14.0});
    CHECK(covariance_O_prime(c) == CovMatrix2{12.0, 6.0, 14.0});
}

TEST_CASE("expanded determinants match the matrices") {
    for (double s2 : {0.1, 4.0, 128.0}) {
        for (std::int64_t t = 1; t <= 3; ++t) {
            for (std::int64_t s0 = 0; s0 <= 4; ++s0) {
                for (std::int64_t s1 = 0; s1 <= 4; ++s1) {
                    for (std::int64_t s2c = 0; s2c <= 4; ++s2c) {
                        if (s0 + s1 < 1 || s0 + s2c < 1) continue;
                        const auto c = cfg(s2, t, s0, s1, s2c, Participation::twice);
                        CHECK(determinant_O(c) == Approx(covariance_O(c).determinant()).epsilon(1e-12));
                        CHECK(determinant_O_prime(c) ==
                              Approx(covariance_O_prime(c).determinant()).epsilon(1e-12));
                    }
                }
            }
        }
    }
}

TEST_CASE("validation") {
    CHECK_THROWS_AS(cfg(0.0, 1, 1, 1, 1, Participation::twice).validate(), DomainError);
    CHECK_THROWS_AS(cfg(4.0, 0, 1, 1, 1, Participation::twice).validate(), DomainError);
    CHECK_THROWS_AS(cfg(4.0, 1, -1, 2, 2, Participation::twice).validate(), DomainError);
    CHECK_THROWS_AS(cfg(4.0, 1, 0, 0, 3, Participation::twice).validate(), DomainError);
    CHECK_THROWS_AS(cfg(4.0, 1, 0, 3, 0, Participation::twice).validate(), DomainError);
    CHECK_NOTHROW(cfg(4.0, 1, 1, 0, 0, Participation::once).validate());
    CHECK_THROWS_AS(cond_entropy_two_exec(cfg(4.0, 1, 1, 1, 1, Participation::once)), DomainError);
    CHECK_THROWS_AS(cond_entropy_once(cfg(4.0, 1, 1, 1, 1, Participation::twice)), DomainError);
}

TEST_CASE("reference conditional entropies") {
    using P = Participation;
    CHECK(std::abs(cond_entropy_once(cfg(4, 1, 4, 6, 6, P::once)).bits - kOnce40) < 1e-13);
    CHECK(std::abs(cond_entropy_once(cfg(4, 1, 5, 5, 5, P::once)).bits - kOnce50) < 1e-13);
    CHECK(std::abs(cond_entropy_once(cfg(4, 1, 6, 4, 4, P::once)).bits - kOnce60) < 1e-13);
    CHECK(std::abs(cond_entropy_two_exec(cfg(4, 1, 4, 6, 6, P::twice)).bits - kTwice40) < 1e-13);
    CHECK(std::abs(cond_entropy_two_exec(cfg(4, 1, 6, 4, 4, P::twice)).bits - kTwice60) < 1e-13);
    CHECK(std::abs(cond_entropy_two_exec(cfg(4, 2, 3, 2, 5, P::twice)).bits - kT2Twice) < 1e-13);
    CHECK(std::abs(cond_entropy_once(cfg(4, 2, 3, 2, 5, P::once)).bits - kT2Once) < 1e-13);
    CHECK(std::abs(cond_entropy_two_exec(cfg(0.5, 3, 0, 4, 1, P::twice)).bits - kT3Twice) < 1e-13);
    CHECK(std::abs(cond_entropy_once(cfg(128, 1, 2, 7, 3, P::once)).bits - kOnce128) < 1e-13);
}

TEST_CASE("agrees with gaussian conditioning on a grid") {
    for (auto p : {Participation::twice, Participation::once}) {
        for (double s2 : {0.1, 4.0, 128.0}) {
            for (std::int64_t t = 1; t <= 3; ++t) {
                for (std::int64_t s0 = 0; s0 <= 5; ++s0) {
                    for (std::int64_t s1 = 0; s1 <= 5; ++s1) {
                        for (std::int64_t s2c = 0; s2c <= 5; ++s2c) {
                            if (s0 + s1 < 1 || s0 + s2c < 1 || (s1 == 0 && s2c == 0)) continue;
                            const auto c = cfg(s2, t, s0, s1, s2c, p);
                            CHECK(cond_entropy_after_two(c).bits == Approx(schur_entropy(c)).epsilon(1e-11));
                        }
                    }
                }
            }
        }
    }
}

TEST_CASE("full overlap") {
    for (double s2 : {0.1, 4.0, 128.0}) {
        const auto once = cfg(s2, 1, 10, 0, 0, Participation::once);
        CHECK(cond_entropy_once(once).bits == 0.0);
        const auto twice = cfg(s2, 1, 10, 0, 0, Participation::twice);
        CHECK(cond_entropy_two_exec(twice).bits == cond_entropy_first(twice).bits);
        // Several targets keep everything but their sum.
        const auto once3 = cfg(s2, 3, 10, 0, 0, Participation::once);
        CHECK(cond_entropy_once(once3).bits ==
              Approx(3 * differential_entropy_normal(s2).bits - differential_entropy_normal(3 * s2).bits));
    }
}

TEST_CASE("conditioning never increases entropy") {
    for (auto p : {Participation::twice, Participation::once}) {
        for (std::int64_t s0 = 0; s0 <= 12; ++s0) {
            for (std::int64_t s1 = 0; s1 <= 12; s1 += 3) {
                if (s0 + s1 < 1) continue;
                const auto c = cfg(4.0, 1, s0, s1, s1 == 0 ? 0 : s1 + 1, p);
                CHECK(cond_entropy_after_two(c).bits <= cond_entropy_first(c).bits + 1e-12);
                CHECK(cond_entropy_first(c).bits <= target_entropy(c).bits);
            }
        }
    }
}

TEST_CASE("variance cancels from the ratio") {
    for (auto p : {Participation::twice, Participation::once}) {
        const double ref = second_exec_loss_ratio(cfg(4.0, 1, 3, 7, 7, p));
        for (double s2 : {1e-3, 0.1, 128.0, 1e6}) CHECK(second_exec_loss_ratio(cfg(s2, 1, 3, 7, 7, p)) == Approx(ref));
    }
}

TEST_CASE("overlap sweep") {
    const auto once = overlap_sweep(4.0, 1, 10, Participation::once);
    const auto twice = overlap_sweep(4.0, 1, 10, Participation::twice);
    REQUIRE(once.size() == 11);
    REQUIRE(twice.size() == 11);
    for (std::size_t i = 0; i < once.size(); ++i) {
        CHECK(once[i].s0 == static_cast<std::int64_t>(i));
        CHECK(once[i].s1 == 10 - once[i].s0);
        CHECK(once[i].overlap == Approx(static_cast<double>(i) / 10));
        if (i > 0) {
            // Once-only targets leak more with more overlap; repeated targets leak less.
            CHECK(once[i].ratio > once[i - 1].ratio);
            CHECK(twice[i].ratio < twice[i - 1].ratio);
        }
    }
    // No overlap with a one-time target: the second output is independent of the target.
    CHECK(std::abs(once[0].ratio) < 1e-12);
    CHECK(twice[10].ratio == 0.0);
    // The curves cross where the shared and fresh spectator counts are equal.
    CHECK(std::abs(once[5].h_both.bits - twice[5].h_both.bits) < 1e-14);
    CHECK_THROWS_AS(overlap_sweep(4.0, 1, 0, Participation::once), DomainError);
}
