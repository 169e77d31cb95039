#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "levyrate/cost_model.hpp"
#include "levyrate/ratesearch.hpp"

namespace levyrate {

// Only the customer count N is observed when the rate is chosen; the
// workload is V = sum of N i.i.d. pieces with mean delta and variance
// sigma2, independent of (N, R).
struct PartialInfoModel {
    WorkloadDist count_dist;  // finite atoms on {1, 2, ...}
    double mean_piece;        // delta > 0
    double var_piece;         // sigma2 >= 0
    LevyExponent input;
    OffPeriodSpec off;
    CostParams costs;

    void validate() const;
};

struct ReducedProblem {
    ProblemConstants constants;
    WorkloadDist workload;  // atoms at delta * n
};

// Equivalent full-information instance: V_eff = delta*N with
//   K2_eff = K2 + h sigma2 / (2 delta),  K3_eff = E tau + delta E N/(r-rho),
//   K1_eff = the collected constant terms after substituting
//            1/(R-rho) = X/(delta N) + 1/(r-rho).
// The construction is derived, not quoted; tests gate it against direct_cost.
ReducedProblem reduce(const PartialInfoModel& model);

// Long-run average cost of a rate rule n -> R(n), evaluated from the count
// law directly (no change of variable).
double direct_cost(const PartialInfoModel& model,
                   const std::function<double(double)>& rate_of_n);

struct PartialSolution {
    ReducedProblem reduced;
    SearchResult search;
    RatePolicy policy;
    std::vector<std::pair<double, double>> rate_table;  // (n, R(n))
};

// reduce -> exact discrete segment minimization -> rate rule at v = delta*n.
PartialSolution solve_partial(const PartialInfoModel& model);

}  // namespace levyrate
