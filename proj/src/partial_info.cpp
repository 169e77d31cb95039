#include "levyrate/partial_info.hpp"

#include <cmath>
#include <stdexcept>

namespace levyrate {

void PartialInfoModel::validate() const {
    if (!(mean_piece > 0))
        throw std::invalid_argument("partial info: delta must be > 0");
    if (!(var_piece >= 0))
        throw std::invalid_argument("partial info: sigma2 must be >= 0");
    for (const auto& [n, p] : count_dist.atom_view()) {
        if (std::abs(n - std::round(n)) > 1e-9 || n < 1)
            throw std::invalid_argument("partial info: counts must be integers >= 1");
    }
    costs.validate();
    off.validate();
}

ReducedProblem reduce(const PartialInfoModel& model) {
    model.validate();
    const double rho = model.input.mean_rate();
    if (!(model.costs.max_rate > rho))
        throw InfeasibleModel("infeasible: max rate must exceed the mean input rate");
    const double mu = model.input.equilibrium_mean();
    const double inv_gap = std::isfinite(model.costs.max_rate)
                               ? 1.0 / (model.costs.max_rate - rho)
                               : 0.0;
    const double delta = model.mean_piece;
    const double sigma2 = model.var_piece;
    const double h = model.costs.holding;
    const double d = model.costs.capacity;
    const double en = model.count_dist.mean();
    const double en2 = model.count_dist.second_moment();

    ProblemConstants c;
    c.k1 = h * model.off.mean_off_area + model.costs.setup + d * delta * en +
           (d * rho * delta + 0.5 * h * sigma2) * en * inv_gap +
           0.5 * h * delta * delta * en2 * inv_gap +
           h * mu * rho * delta * en * inv_gap * inv_gap;
    c.k2 = d * rho + 2.0 * h * mu * rho * inv_gap + 0.5 * h * sigma2 / delta;
    c.k3 = model.off.mean_tau + delta * en * inv_gap;
    c.mu = mu;
    c.rho = rho;
    c.max_rate = model.costs.max_rate;
    c.holding = h;

    std::vector<std::pair<double, double>> scaled;
    for (const auto& [n, p] : model.count_dist.atom_view())
        scaled.emplace_back(delta * n, p);
    return {c, WorkloadDist::atoms(std::move(scaled))};
}

double direct_cost(const PartialInfoModel& model,
                   const std::function<double(double)>& rate_of_n) {
    model.validate();
    const double rho = model.input.mean_rate();
    const double mu_rho = model.input.mu_rho();
    const double delta = model.mean_piece;
    const double h = model.costs.holding;
    const double d = model.costs.capacity;

    double en = 0, en_g = 0, en2_g = 0, en_g2 = 0;
    for (const auto& [n, p] : model.count_dist.atom_view()) {
        const double r = rate_of_n(n);
        if (!(r > rho))
            throw std::invalid_argument("direct_cost: rate must exceed the mean input rate");
        const double g = 1.0 / (r - rho);
        en += p * n;
        en_g += p * n * g;
        en2_g += p * n * n * g;
        en_g2 += p * n * g * g;
    }

    const double numer = h * model.off.mean_off_area + model.costs.setup +
                         d * delta * en +
                         (d * rho * delta + 0.5 * h * model.var_piece) * en_g +
                         h * (0.5 * delta * delta * en2_g + mu_rho * delta * en_g2);
    const double denom = model.off.mean_tau + delta * en_g;
    return numer / denom;
}

PartialSolution solve_partial(const PartialInfoModel& model) {
    ReducedProblem reduced = reduce(model);
    SolveResult solved = solve_with_constants(reduced.constants, reduced.workload,
                                              model.costs.min_rate);
    PartialSolution out{std::move(reduced), solved.search, solved.policy, {}};
    for (const auto& [n, p] : model.count_dist.atom_view()) {
        out.rate_table.emplace_back(
            n, solved.policy.rate(model.mean_piece * n, out.reduced.constants.rho));
    }
    return out;
}

}  // namespace levyrate
