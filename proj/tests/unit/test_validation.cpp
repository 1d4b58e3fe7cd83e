#include "pmpy/cli/validation.hpp"

#include <doctest.h>

#include <set>
#include <string>

using namespace pmpy::cli;

namespace {

void check_reported(const CriterionResult &r, int id) {
    CHECK(r.id == id);
    CHECK_FALSE(r.name.empty());
    CHECK_FALSE(r.detail.empty());
    CHECK_FALSE(r.measurements.empty());
    CHECK(r.runtime_limit_seconds > 0.0);
    CHECK(r.runtime_seconds <= r.runtime_limit_seconds);
}

} // namespace

TEST_CASE("criteria that the model satisfies pass") {
    for (const CriterionResult &r :
         {check_algebraic_identities(), check_flow_field(), check_small_stroke_curvature(),
          check_large_stroke_displacement(), check_energy_asymptotics(), check_large_stroke_drag(),
          check_optimal_timing(), check_geometric_phase()}) {
        INFO(r.name << ": " << r.detail);
        CHECK(r.passed);
    }
}

TEST_CASE("a wrong curvature coefficient is detected") {
    const CriterionResult wrong = check_small_stroke_curvature(1.1 / 6.0);
    INFO(wrong.detail);
    CHECK_FALSE(wrong.passed);
}

TEST_CASE("every criterion reports its measurements") {
    const auto all = run_all_criteria();
    REQUIRE(all.size() == 10);
    std::set<std::string> names;
    for (std::size_t i = 0; i < all.size(); ++i) {
        check_reported(all[i], static_cast<int>(i) + 1);
        names.insert(all[i].name);
    }
    CHECK(names.size() == 10);
}

TEST_CASE("large-stroke sequence shrinks the radius ratio") {
    const auto &seq = large_stroke_sequence();
    REQUIRE(seq.size() >= 3);
    for (std::size_t i = 1; i < seq.size(); ++i) {
        CHECK(seq[i].radius_ratio < seq[i - 1].radius_ratio);
        CHECK(seq[i].long_over_large > seq[i].short_over_large);
        CHECK(seq[i].long_over_large > seq[i - 1].long_over_large);
    }
}
