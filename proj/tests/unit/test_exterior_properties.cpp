#include <doctest.h>

#include "properties.hpp"

using namespace gcx::testing;

namespace {
void require_clean(const SuiteResult& r, int expected) {
  INFO(r.name << ": " << r.first_failure);
  CHECK(r.instances == expected);
  CHECK(r.failures == 0);
}
}  // namespace

TEST_CASE("property: d squared vanishes") { require_clean(suite_d_squared(200, 1), 200); }
TEST_CASE("property: Leibniz rule") { require_clean(suite_leibniz(200, 2), 200); }
TEST_CASE("property: pullback functoriality") { require_clean(suite_pullback(200, 3), 200); }
TEST_CASE("property: interior product") { require_clean(suite_interior(200, 4), 200); }
TEST_CASE("property: pairing") { require_clean(suite_pairing(200, 5), 200); }
TEST_CASE("property: exp additivity") { require_clean(suite_exp_additivity(200, 6), 200); }
TEST_CASE("property: courant bracket oracle") { require_clean(suite_courant_oracle(50, 7), 50); }
