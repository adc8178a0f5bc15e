#include <doctest.h>

#include <cmath>

#include "mcf/errors.hpp"
#include "mcf/params.hpp"

using namespace mcf;

TEST_CASE("constants for n=4, k=2") {
  const Params p = derive_constants(4, 2);
  CHECK(p.alpha == doctest::Approx(-2.0).epsilon(1e-14));
  CHECK(p.lambda_k == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(p.sigma_k == doctest::Approx(1.0 / 6).epsilon(1e-14));
  CHECK(p.mu == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(p.alpha_minus == doctest::Approx(-3.0).epsilon(1e-14));
}

TEST_CASE("constants for n=4, k=4 and n=5, k=2") {
  const Params p = derive_constants(4, 4);
  CHECK(p.lambda_k == doctest::Approx(2.5));
  CHECK(p.sigma_k == doctest::Approx(5.0 / 6));
  const Params q = derive_constants(5, 2);
  CHECK(q.mu == doctest::Approx(std::sqrt(17.0) / 2).epsilon(1e-14));
  CHECK(std::abs(q.alpha) < 1.5);
  CHECK(q.alpha_minus == doctest::Approx(0.5 * (-7 - std::sqrt(17.0))).epsilon(1e-14));
}

TEST_CASE("domain errors name the violated bound") {
  try {
    derive_constants(3, 2);
    FAIL("expected a domain error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Domain);
    CHECK(std::string(e.what()).find("n >= 4") != std::string::npos);
  }
  try {
    derive_constants(4, 1);
    FAIL("expected a domain error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("k >= 2") != std::string::npos);
  }
}

TEST_CASE("identities hold over 4 <= n <= 64") {
  double prev = 1e9;
  for (int n = 4; n <= 64; ++n) {
    const Params p = derive_constants(n, 2);
    CHECK(std::abs(alpha_quadratic_form(n) - alpha_discriminant_form(n)) < 1e-12);
    CHECK(std::abs(p.mu + 0.5 - (n - 1 + p.alpha)) < 1e-12);
    CHECK(2 * p.lambda_k - 1 >= -1e-15);
    CHECK(p.lambda_k > 0);
    CHECK(p.sigma_k > 0);
    CHECK(std::abs(p.alpha) < prev);
    prev = std::abs(p.alpha);
  }
  CHECK(std::abs(derive_constants(64, 2).alpha) < 1.02);
}

TEST_CASE("exponent condition examples") {
  const auto c1 = exponent_condition(derive_constants(4, 2), 2.1);
  CHECK(c1.value < 0);
  CHECK_FALSE(c1.admissible);
  const auto c2 = exponent_condition(derive_constants(4, 4), 2.1);
  CHECK(c2.value == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(c2.admissible);
  const Params p5 = derive_constants(5, 3);
  CHECK(exponent_condition(p5, std::abs(p5.alpha) + 1e-3).admissible);
  CHECK_FALSE(exponent_condition(p5, 0.5).in_window);
}

TEST_CASE("admissibility table") {
  for (int n = 4; n <= 12; ++n) {
    CHECK_FALSE(admissible_for_some_a(derive_constants(n, 2)));
    for (int k = 3; k <= 8; ++k) {
      const bool expected = (n == 4) ? (k >= 4) : true;
      CHECK(admissible_for_some_a(derive_constants(n, k)) == expected);
    }
  }
  // n = 4, k = 3 sits exactly on the boundary: sup of the condition is 0.
  CHECK(exponent_condition_sup(derive_constants(4, 3)) == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("blow-up scale") {
  Params p = derive_constants(4, 2);
  CHECK(blowup_scale(p, 0.0) == doctest::Approx(1.0));
  p = derive_constants(4, 4);
  CHECK(blowup_scale(p, 0.99) == doctest::Approx(std::pow(100.0, 4.0 / 3)).epsilon(1e-12));
  CHECK(blowup_scale(p, 0.5) < blowup_scale(p, 0.6));
  CHECK_THROWS_AS(blowup_scale(p, 1.0), Error);
}
