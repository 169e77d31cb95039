#pragma once

#include <functional>
#include <optional>

#include "levyrate/levy_exponent.hpp"
#include "levyrate/off_period.hpp"
#include "levyrate/rate_policy.hpp"
#include "levyrate/workload_dist.hpp"

namespace levyrate {

// Economic primitives: holding cost h per workload unit per time unit, setup
// cost K per cycle, capacity cost rate d, maximal rate r (finite unless
// d = 0), optional minimal rate.
struct CostParams {
    double holding;   // h > 0
    double setup;     // K > 0
    double capacity;  // d >= 0
    double max_rate;  // r > rho; +infinity allowed only with capacity == 0
    std::optional<double> min_rate;

    void validate() const;
};

// Thrown when the model cannot be stable (max rate <= mean input rate).
struct InfeasibleModel : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Coefficients of the reduced fractional problem, always computed from the
// primitives, never taken from a worked example.
struct ProblemConstants {
    double k1, k2, k3;
    double mu, rho;
    double max_rate;
    double holding;

    double mu_rho() const { return mu * rho; }
};

ProblemConstants constants_from_primitives(const LevyExponent& input,
                                           const WorkloadDist& v,
                                           const OffPeriodSpec& off,
                                           const CostParams& costs);

// Long-run average cost of a policy: setup + holding (off and on areas) +
// capacity, per unit of cycle length.
double steady_cost(const LevyExponent& input, const WorkloadDist& v,
                   const RatePolicy& policy, const OffPeriodSpec& off,
                   const CostParams& costs);

// The same cost through the budget change of variable
// X = V (1/(R-rho) - 1/(r-rho)):
//   (K1 + K2 E X + h E[V X / 2 + mu rho X^2 / V]) / (K3 + E X).
double objective_in_budget(const ProblemConstants& constants,
                           const WorkloadDist& v,
                           const std::function<double(double)>& x_of_v);

// Budget variable of a policy at workload v.
double budget_of_policy(const ProblemConstants& constants,
                        const RatePolicy& policy, double v);

}  // namespace levyrate
