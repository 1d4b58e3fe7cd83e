#pragma once

// In-process acceptance checks behind `pmpy validate`. Every check carries
// its tolerances and runtime limit and reports the values it measured.

#include "pmpy/sim.hpp"

#include <string>
#include <vector>

namespace pmpy::cli {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;
    std::vector<NamedValue> measurements;
    double runtime_seconds = 0.0;
    double runtime_limit_seconds = 0.0;
};

CriterionResult check_algebraic_identities();
CriterionResult check_flow_field();
/// coefficient is the predicted displacement per unit loop area.
CriterionResult check_small_stroke_curvature(double coefficient = 1.0 / 6.0);
CriterionResult check_large_stroke_displacement();
CriterionResult check_energy_asymptotics();
CriterionResult check_large_stroke_drag();
CriterionResult check_small_stroke_drag();
CriterionResult check_optimal_timing();
CriterionResult check_geometric_phase();
CriterionResult check_comparators();

std::vector<CriterionResult> run_all_criteria();

/// The large-stroke sequence shared by the energy and drag checks:
/// (a_s/a_L, ell_s/a_L, ell_L/a_L) with a_L = 1.
struct LargeStrokePoint {
    double radius_ratio;
    double short_over_large;
    double long_over_large;
};
const std::vector<LargeStrokePoint> &large_stroke_sequence();

} // namespace pmpy::cli
