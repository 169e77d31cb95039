#pragma once

#include <optional>
#include <stdexcept>

#include "levyrate/workload_dist.hpp"

namespace levyrate {

// Pointwise bound x <= slope * v induced by a minimal output rate:
// slope = 1/(min_rate - rho) - 1/(max_rate - rho).
struct AllocationCap {
    double slope;
};

struct InfeasibleBudget : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct Phase1Solution {
    double budget;  // E X
    double level;   // the common multiplier; +infinity when the cap saturates
    double value;   // optimal E[V X / 2 + mu rho X^2 / V]
    bool cap_active;
};

// Per-workload allocation at a given water level: v (level - v/2)^+ / (2 mu rho).
double allocation(double v, double level, double mu_rho);

// Expected allocation xi(level) = E x(V, level), or E[x ^ slope*V] with a cap.
// Continuous, nondecreasing, 0 at level 0.
double expected_allocation(const WorkloadDist& v, double level, double mu_rho,
                           std::optional<AllocationCap> cap = {});

// Smallest level whose expected allocation meets the budget. Bracket doubling
// then bisection; tolerance 1e-10 in the level or 1e-12 in the budget gap,
// whichever binds first. With a cap: budgets above slope*EV are infeasible and
// the boundary budget returns the +infinity sentinel (fully saturated).
double level_for_budget(const WorkloadDist& v, double budget, double mu_rho,
                        std::optional<AllocationCap> cap = {});

// Optimal objective value at the given budget; 0 at budget 0.
double phase1_value(const WorkloadDist& v, double budget, double mu_rho,
                    std::optional<AllocationCap> cap = {});

Phase1Solution solve_phase1(const WorkloadDist& v, double budget, double mu_rho,
                            std::optional<AllocationCap> cap = {});

// Rate rule induced by a level:
//   rho + [1/(max_rate - rho) + (level - v/2)^+ / (2 mu rho)]^{-1},
// nondecreasing in v, equal to max_rate once v >= 2*level.
double optimal_rate(double v, double level, double mu_rho, double rho,
                    double max_rate);

}  // namespace levyrate
