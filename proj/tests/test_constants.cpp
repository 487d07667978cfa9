#include "doctest.h"
#include "sbmlab/constants.hpp"

#include <cmath>

using namespace sbmlab;

TEST_CASE("tabulated values for d = 2") {
    auto q = dimension_params(2);
    CHECK(q.p == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-14));
    CHECK(q.alpha == doctest::Approx(std::sqrt(2.0) - 1.0).epsilon(1e-14));
    CHECK(q.mu == 0.0);
    CHECK(q.nu == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-14));
    CHECK(q.lambda_d == 4.0);
    CHECK(q.d_f == doctest::Approx(4.0 - 2.0 * std::sqrt(2.0)).epsilon(1e-14));
    CHECK(q.d_f == doctest::Approx(1.1715729).epsilon(1e-6));
}

TEST_CASE("tabulated values for d = 3") {
    auto q = dimension_params(3);
    double s17 = std::sqrt(17.0);
    CHECK(q.p == doctest::Approx((1.0 + s17) / 2.0).epsilon(1e-14));
    CHECK(q.alpha == doctest::Approx((s17 - 3.0) / 2.0).epsilon(1e-14));
    CHECK(q.mu == 0.5);
    CHECK(q.nu == doctest::Approx(s17 / 2.0).epsilon(1e-14));
    CHECK(q.lambda_d == 2.0);
    CHECK(q.d_f == doctest::Approx((9.0 - s17) / 2.0).epsilon(1e-14));
    CHECK(q.d_f == doctest::Approx(2.4384472).epsilon(1e-6));
}

TEST_CASE("tabulated values for d = 1") {
    auto q = dimension_params(1);
    CHECK(q.p == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(q.alpha == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("algebraic identities hold to 1e-12") {
    for (int d : {1, 2, 3}) {
        auto q = dimension_params(d);
        CHECK(std::abs(q.p - (q.mu + q.nu)) < 1e-12);
        CHECK(std::abs(q.alpha * (4.0 - d) - (q.p - 2.0)) < 1e-12);
        CHECK(std::abs(d - (2.0 + 2.0 * q.mu)) < 1e-12);
        CHECK(std::abs(q.nu - std::sqrt(q.mu * q.mu + 4.0 * (4.0 - d))) < 1e-12);
        CHECK(std::abs(q.d_f - (d + 2.0 - q.p)) < 1e-12);
    }
}

TEST_CASE("psi0 normalization") {
    auto q2 = dimension_params(2);
    auto q3 = dimension_params(3);
    for (double eps : {0.1, 0.01}) {
        CHECK(q2.psi0(eps) == doctest::Approx(std::log(1.0 / eps) / M_PI).epsilon(1e-14));
        CHECK(q3.psi0(eps) == doctest::Approx(1.0 / (2.0 * M_PI * eps)).epsilon(1e-14));
    }
    CHECK_THROWS_AS(dimension_params(1).psi0(0.1), std::domain_error);
}

TEST_CASE("rejects dimensions outside 1..3") {
    CHECK_THROWS_AS(dimension_params(0), std::domain_error);
    CHECK_THROWS_AS(dimension_params(4), std::domain_error);
}
