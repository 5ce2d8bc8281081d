#include <doctest.h>

#include <json.hpp>

#include "error.hpp"
#include "verify.hpp"

using namespace quenchstage;

TEST_SUITE("verify") {

TEST_CASE("suite names") {
    CHECK(is_verify_suite("green"));
    CHECK(is_verify_suite("all"));
    CHECK_FALSE(is_verify_suite("greens"));
    CHECK_THROWS_AS(run_verify("nope"), Error);
}

TEST_CASE("single suite report") {
    const VerifyReport r = run_verify("unisolvence");
    CHECK(r.passed());
    REQUIRE(r.checks.size() == 3);
    CHECK(r.checks[0].measured <= 1e-11);
    const auto j = nlohmann::json::parse(r.to_json());
    CHECK(j["suite"] == "unisolvence");
    CHECK(j["passed"] == true);
    CHECK(j["checks"].size() == 3);
}

TEST_CASE("refinement study orders") {
    const RefinementStudy rs = ideal_transfer_refinement({9, 18, 36});
    CHECK(rs.observed_order >= 2.0);
    CHECK(rs.dirichlet_gap[2] < rs.dirichlet_gap[0]);
    CHECK_THROWS_AS(ideal_transfer_refinement({9}), Error);
}

}  // TEST_SUITE
