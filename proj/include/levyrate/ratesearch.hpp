#pragma once

#include <optional>
#include <vector>

#include "levyrate/cost_model.hpp"
#include "levyrate/rate_policy.hpp"
#include "levyrate/workload_dist.hpp"

namespace levyrate {

enum class Backend {
    ClosedFormExponential,  // Erlang-CDF partial moments
    ClosedFormUniform,      // polynomial pieces
    DiscretePiecewise,      // finite sums over atoms
    Quadrature,             // adaptive integration of the defining integrands
};

// The reduced one-dimensional objective
//   G(level) = (K1 + K2 xi + h f) / (K3 + xi)
// evaluated through the unnormalized moments
//   alloc_moment = E V (level - V/2)^+          (= 2 mu rho * xi)
//   cost_moment  = E V [level^2 - (V/2)^2]^+    (= 4 mu rho * f)
//   active_mass  = E[V ; V <= 2 level].
class GCurve {
public:
    GCurve(ProblemConstants constants, WorkloadDist v,
           std::optional<Backend> backend = {});

    double alloc_moment(double level) const;
    double cost_moment(double level) const;
    double active_mass(double level) const;

    double value(double level) const;

    // Density of G: equals G' wherever V has no atom at 2*level; can change
    // sign at most once on [0, infinity).
    double slope(double level) const;

    // Upper end of the minimizer bracket, (K1 - K2 K3)^+ / (K3 h).
    double search_bound() const;

    // Lipschitz constant of G on [0, search_bound()].
    double lipschitz_bound() const;

    const ProblemConstants& constants() const { return constants_; }
    const WorkloadDist& workload() const { return v_; }
    Backend backend() const { return backend_; }

private:
    ProblemConstants constants_;
    WorkloadDist v_;
    Backend backend_;
};

struct SearchResult {
    double lambda_min = 0;
    double g_min = 0;
    double bracket_hi = 0;
    double error_bound = 0;  // suboptimality certificate
    int evaluations = 0;
};

// Golden-section search on [0, search_bound()]; relies only on absolute
// continuity and unimodality, so atoms of V (kinks in G) are fine.
SearchResult minimize(const GCurve& curve, double rel_width_tol = 1e-8);

// Exact minimization for discrete V: between consecutive half-atom seams G is
// a ratio (S x^2 + T x + U)/(Q + W x); each segment is minimized analytically
// and the global winner returned. error_bound is 0 (exact up to rounding).
SearchResult minimize_discrete(const ProblemConstants& constants,
                               const WorkloadDist& atoms);

// Segment table of the discrete curve on [0, hi] (for reporting).
struct RationalSegment {
    double lo, hi;
    double s, t, u, q, w;
};
std::vector<RationalSegment> discrete_segments(const ProblemConstants& constants,
                                               const WorkloadDist& atoms,
                                               double hi);

// End-to-end solve: constants -> Phase II -> water-fill policy. With a
// minimal rate the capped objective is minimized directly in budget space
// (ratio of a nonnegative convex numerator to a positive affine denominator,
// hence unimodal).
struct SolveResult {
    ProblemConstants constants;
    SearchResult search;
    RatePolicy policy;
    double budget;  // E X at the optimum
};

SolveResult solve_with_constants(const ProblemConstants& constants,
                                 const WorkloadDist& v,
                                 std::optional<double> min_rate = {},
                                 std::optional<Backend> backend = {});

SolveResult solve_model(const LevyExponent& input, const WorkloadDist& v,
                        const OffPeriodSpec& off, const CostParams& costs,
                        std::optional<Backend> backend = {});

// Capped Phase-II objective (K1 + K2 b + h f_cap(b)) / (K3 + b).
double capped_objective(const ProblemConstants& constants, const WorkloadDist& v,
                        double budget, double cap_slope);

}  // namespace levyrate
