#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "levyrate/levy_exponent.hpp"
#include "levyrate/off_period.hpp"
#include "levyrate/rate_policy.hpp"
#include "levyrate/workload_dist.hpp"

namespace levyrate {

// E[V/(R(V) - rho)] -- the expected on-period length, and the on-period
// weight of the cycle mixture.
double expected_v_over_gap(const LevyExponent& input, const WorkloadDist& v,
                           const RatePolicy& policy);

// LST of the steady-state on-period workload:
//   E[(1 - e^{-alpha V}) / (alpha R - exponent(alpha))] / E[V/(R - rho)].
double busy_lst(const LevyExponent& input, const WorkloadDist& v,
                const RatePolicy& policy, double alpha);

// Mean of the steady-state on-period workload:
//   E[V^2/(2(R-rho)) + mu rho V/(R-rho)^2] / E[V/(R-rho)].
// Throws std::domain_error when the expectation diverges (affine policy with
// E[1/V] = infinity).
double busy_mean(const LevyExponent& input, const WorkloadDist& v,
                 const RatePolicy& policy);

// LST of the full steady-state workload: the cycle mixture of the off-period
// law (caller-supplied LST, constant 1 when the off workload is identically
// zero) and the on-period law, weighted by E tau and E[V/(R-rho)].
double workload_lst(const LevyExponent& input, const WorkloadDist& v,
                    const RatePolicy& policy, const OffPeriodSpec& off,
                    const std::function<double(double)>& off_lst, double alpha);

// Draws (V, R) from the tilted law P_{V,R} (weight V/(R-rho)): exact
// reweighting for discrete V, rejection sampling with a piecewise-quadratic
// envelope bound for continuous V (support truncated at the 1 - 1e-9
// quantile, so the tilt bias is below Monte Carlo resolution).
class TiltedSampler {
public:
    TiltedSampler(const LevyExponent& input, const WorkloadDist& v,
                  const RatePolicy& policy);

    std::pair<double, double> sample(Rng& rng) const;  // (V, R(V))

private:
    const LevyExponent& input_;
    const WorkloadDist& v_;
    const RatePolicy& policy_;
    double rho_;
    std::vector<double> cum_weight_;   // discrete path
    std::vector<double> atom_values_;  // discrete path
    double truncation_ = 0;            // continuous path
    double weight_bound_ = 0;          // continuous path
};

// Geometric-sum representation of the on-period steady state: draws
// U V + sum_{i=1}^{N} e_i with (V,R) tilted, (N+1)|(V,R) geometric with
// success probability 1 - rho/R, and e_i equilibrium draws.
class BusyWorkloadSampler {
public:
    BusyWorkloadSampler(const LevyExponent& input, const WorkloadDist& v,
                        const RatePolicy& policy);

    double sample(Rng& rng) const;

private:
    const LevyExponent& input_;
    const RatePolicy& policy_;
    TiltedSampler tilted_;
    double rho_;
};

}  // namespace levyrate
