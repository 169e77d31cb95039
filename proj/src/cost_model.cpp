#include "levyrate/cost_model.hpp"

#include <cmath>
#include <stdexcept>

namespace levyrate {

void CostParams::validate() const {
    if (!(holding > 0)) throw std::invalid_argument("costs: holding must be > 0");
    if (!(setup > 0)) throw std::invalid_argument("costs: setup must be > 0");
    if (!(capacity >= 0)) throw std::invalid_argument("costs: capacity must be >= 0");
    if (!std::isfinite(max_rate) && capacity > 0)
        throw std::invalid_argument("costs: infinite max rate requires capacity = 0");
    if (min_rate && !(*min_rate <= max_rate))
        throw std::invalid_argument("costs: min rate must be <= max rate");
}

ProblemConstants constants_from_primitives(const LevyExponent& input,
                                           const WorkloadDist& v,
                                           const OffPeriodSpec& off,
                                           const CostParams& costs) {
    costs.validate();
    off.validate();
    const double rho = input.mean_rate();
    if (!(costs.max_rate > rho))
        throw InfeasibleModel("infeasible: max rate must exceed the mean input rate");

    const double mu = input.equilibrium_mean();
    const double gap = costs.max_rate - rho;  // +infinity collapses the 1/gap terms
    const double inv_gap = std::isfinite(gap) ? 1.0 / gap : 0.0;
    const double ev = v.mean();
    const double ev2 = v.second_moment();
    const double h = costs.holding;
    const double d = costs.capacity;

    ProblemConstants c;
    c.k1 = h * off.mean_off_area + costs.setup +
           (d + d * rho * inv_gap + h * mu * rho * inv_gap * inv_gap) * ev +
           0.5 * h * inv_gap * ev2;
    c.k2 = d * rho + 2.0 * h * mu * rho * inv_gap;
    c.k3 = off.mean_tau + ev * inv_gap;
    c.mu = mu;
    c.rho = rho;
    c.max_rate = costs.max_rate;
    c.holding = h;
    return c;
}

double steady_cost(const LevyExponent& input, const WorkloadDist& v,
                   const RatePolicy& policy, const OffPeriodSpec& off,
                   const CostParams& costs) {
    costs.validate();
    off.validate();
    const double rho = input.mean_rate();
    const double mu_rho = input.mu_rho();
    policy.validate(rho);

    const double ev_over_gap = v.expectation(
        [&](double w) { return w * policy.inv_gap(w, rho); });
    const double on_area = v.expectation([&](double w) {
        const double ig = policy.inv_gap(w, rho);
        return 0.5 * w * w * ig + mu_rho * w * ig * ig;
    });

    const double numer = costs.holding * off.mean_off_area + costs.setup +
                         costs.capacity * v.mean() +
                         costs.capacity * rho * ev_over_gap +
                         costs.holding * on_area;
    const double denom = off.mean_tau + ev_over_gap;
    return numer / denom;
}

double objective_in_budget(const ProblemConstants& constants,
                           const WorkloadDist& v,
                           const std::function<double(double)>& x_of_v) {
    const double mu_rho = constants.mu_rho();
    const double ex = v.expectation(x_of_v);
    const double quad = v.expectation([&](double w) {
        const double x = x_of_v(w);
        return 0.5 * w * x + mu_rho * x * x / w;
    });
    return (constants.k1 + constants.k2 * ex + constants.holding * quad) /
           (constants.k3 + ex);
}

double budget_of_policy(const ProblemConstants& constants,
                        const RatePolicy& policy, double v) {
    const double inv_gap_max = std::isfinite(constants.max_rate)
                                   ? 1.0 / (constants.max_rate - constants.rho)
                                   : 0.0;
    return v * (policy.inv_gap(v, constants.rho) - inv_gap_max);
}

}  // namespace levyrate
