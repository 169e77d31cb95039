#include "levyrate/ratesearch.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "levyrate/waterfill.hpp"

namespace levyrate {
namespace {

Backend pick_backend(const WorkloadDist& v) {
    if (std::holds_alternative<WorkloadDist::Exponential>(v.spec()))
        return Backend::ClosedFormExponential;
    if (std::holds_alternative<WorkloadDist::Uniform>(v.spec()))
        return Backend::ClosedFormUniform;
    return Backend::DiscretePiecewise;
}

// Real roots of a x^2 + b x + c = 0, degenerating gracefully.
int quadratic_roots(double a, double b, double c, double out[2]) {
    if (a == 0.0) {
        if (b == 0.0) return 0;
        out[0] = -c / b;
        return 1;
    }
    const double disc = b * b - 4.0 * a * c;
    if (disc < 0) return 0;
    const double sq = std::sqrt(disc);
    // Citardauq form for the smaller-magnitude root.
    const double q = -0.5 * (b + (b >= 0 ? sq : -sq));
    out[0] = q / a;
    if (q != 0.0)
        out[1] = c / q;
    else
        out[1] = -b / a - out[0];
    return 2;
}

}  // namespace

GCurve::GCurve(ProblemConstants constants, WorkloadDist v,
               std::optional<Backend> backend)
    : constants_(constants),
      v_(std::move(v)),
      backend_(backend.value_or(pick_backend(v_))) {
    if (!(constants_.k3 > 0)) throw std::invalid_argument("GCurve: K3 must be > 0");
    if (!(constants_.mu_rho() > 0))
        throw std::invalid_argument("GCurve: mu*rho must be > 0");
}

double GCurve::alloc_moment(double level) const {
    if (!(level > 0)) return 0.0;
    if (backend_ == Backend::Quadrature) {
        return v_.expectation(
            [level](double w) { return w * std::max(level - 0.5 * w, 0.0); });
    }
    return level * v_.partial_moment(1, 0, 2.0 * level) -
           0.5 * v_.partial_moment(2, 0, 2.0 * level);
}

double GCurve::cost_moment(double level) const {
    if (!(level > 0)) return 0.0;
    if (backend_ == Backend::Quadrature) {
        return v_.expectation([level](double w) {
            return w * std::max(level * level - 0.25 * w * w, 0.0);
        });
    }
    return level * level * v_.partial_moment(1, 0, 2.0 * level) -
           0.25 * v_.partial_moment(3, 0, 2.0 * level);
}

double GCurve::active_mass(double level) const {
    if (!(level > 0)) return 0.0;
    if (backend_ == Backend::Quadrature) {
        return v_.expectation(
            [level](double w) { return w <= 2.0 * level ? w : 0.0; });
    }
    return v_.partial_moment(1, 0, 2.0 * level);
}

double GCurve::value(double level) const {
    const double mr = constants_.mu_rho();
    const double a = alloc_moment(level);
    const double b = cost_moment(level);
    return (constants_.k1 + constants_.k2 / (2.0 * mr) * a +
            constants_.holding / (4.0 * mr) * b) /
           (constants_.k3 + a / (2.0 * mr));
}

double GCurve::slope(double level) const {
    const double mr = constants_.mu_rho();
    const double a = alloc_moment(level);
    const double b = cost_moment(level);
    const double am = active_mass(level);
    const double h = constants_.holding;
    // The bracket is K3 K2 - K1 + level K3 h + (h/4 mu rho)(2 level A - B);
    // 2 level A - B = E V ((level - V/2)^+)^2 is nonnegative and nondecreasing,
    // so the numerator changes sign at most once.
    const double numer =
        am / (2.0 * mr) *
        (constants_.k3 * constants_.k2 - constants_.k1 +
         level * constants_.k3 * h + h / (4.0 * mr) * (2.0 * level * a - b));
    const double denom = constants_.k3 + a / (2.0 * mr);
    return numer / (denom * denom);
}

double GCurve::search_bound() const {
    return std::max(constants_.k1 - constants_.k2 * constants_.k3, 0.0) /
           (constants_.k3 * constants_.holding);
}

double GCurve::lipschitz_bound() const {
    const double star = search_bound();
    if (star == 0) return 0.0;
    const double mr = constants_.mu_rho();
    const double h = constants_.holding;
    const double a = alloc_moment(star);
    const double b = cost_moment(star);
    return active_mass(star) / (2.0 * constants_.k3 * constants_.k3 * mr) *
           (constants_.k3 * constants_.k2 + constants_.k1 +
            star * constants_.k3 * h + h / (4.0 * mr) * (2.0 * star * a + b));
}

SearchResult minimize(const GCurve& curve, double rel_width_tol) {
    SearchResult out;
    out.bracket_hi = curve.search_bound();
    if (out.bracket_hi == 0) {
        out.lambda_min = 0;
        out.g_min = curve.value(0);
        out.evaluations = 1;
        return out;
    }

    constexpr double kInvPhi = 0.6180339887498949;
    double lo = 0, hi = out.bracket_hi;
    const double width_tol = rel_width_tol * std::max(1.0, hi);
    double x1 = hi - kInvPhi * (hi - lo);
    double x2 = lo + kInvPhi * (hi - lo);
    double f1 = curve.value(x1);
    double f2 = curve.value(x2);
    int evals = 2;
    while (hi - lo > width_tol) {
        // On ties keep the right interval: the only flat stretch of a
        // unimodal G is the initial one (below half the minimal workload),
        // so the minimizer region is never discarded.
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - kInvPhi * (hi - lo);
            f1 = curve.value(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + kInvPhi * (hi - lo);
            f2 = curve.value(x2);
        }
        ++evals;
    }
    out.lambda_min = 0.5 * (lo + hi);
    out.g_min = curve.value(out.lambda_min);
    out.error_bound = curve.lipschitz_bound() * (hi - lo);
    out.evaluations = evals + 1;

    // G can be constant near 0 (no workload mass below 2*level). When the
    // origin already attains the minimum the origin is the canonical answer.
    const double at_zero = curve.value(0);
    if (at_zero <= out.g_min + 1e-12 * std::max(1.0, std::abs(at_zero))) {
        out.lambda_min = 0;
        out.g_min = at_zero;
        out.error_bound = 0;
    }
    return out;
}

std::vector<RationalSegment> discrete_segments(const ProblemConstants& constants,
                                               const WorkloadDist& atoms,
                                               double hi) {
    const auto points = atoms.atom_view();
    const double mr = constants.mu_rho();
    const double h = constants.holding;

    std::vector<double> seams = {0.0};
    for (const auto& [v, p] : points) {
        const double s = 0.5 * v;
        if (s > 0 && s < hi) seams.push_back(s);
    }
    seams.push_back(hi);
    std::sort(seams.begin(), seams.end());
    seams.erase(std::unique(seams.begin(), seams.end(),
                            [](double a, double b) { return a == b; }),
                seams.end());

    std::vector<RationalSegment> out;
    for (std::size_t i = 0; i + 1 < seams.size(); ++i) {
        const double lo = seams[i];
        const double up = seams[i + 1];
        double m1 = 0, m2 = 0, m3 = 0;
        for (const auto& [v, p] : points) {
            if (0.5 * v <= lo) {  // active on the whole segment
                m1 += p * v;
                m2 += p * v * v;
                m3 += p * v * v * v;
            }
        }
        RationalSegment seg;
        seg.lo = lo;
        seg.hi = up;
        seg.s = h / (4.0 * mr) * m1;
        seg.t = constants.k2 / (2.0 * mr) * m1;
        seg.u = constants.k1 - constants.k2 / (4.0 * mr) * m2 - h / (16.0 * mr) * m3;
        seg.q = constants.k3 - m2 / (4.0 * mr);
        seg.w = m1 / (2.0 * mr);
        out.push_back(seg);
    }
    return out;
}

SearchResult minimize_discrete(const ProblemConstants& constants,
                               const WorkloadDist& atoms) {
    GCurve curve(constants, atoms, Backend::DiscretePiecewise);
    SearchResult out;
    out.bracket_hi = curve.search_bound();
    if (out.bracket_hi == 0) {
        out.lambda_min = 0;
        out.g_min = curve.value(0);
        out.evaluations = 1;
        return out;
    }

    const auto rational = [](const RationalSegment& seg, double x) {
        return ((seg.s * x + seg.t) * x + seg.u) / (seg.q + seg.w * x);
    };

    double best_x = 0;
    double best_val = std::numeric_limits<double>::infinity();
    int evals = 0;
    for (const auto& seg : discrete_segments(constants, atoms, out.bracket_hi)) {
        double candidates[4] = {seg.lo, seg.hi, 0, 0};
        int n = 2;
        // stationary points of (S x^2 + T x + U)/(Q + W x)
        double roots[2];
        const int nr = quadratic_roots(seg.s * seg.w, 2.0 * seg.s * seg.q,
                                       seg.t * seg.q - seg.u * seg.w, roots);
        for (int i = 0; i < nr; ++i)
            if (roots[i] > seg.lo && roots[i] < seg.hi) candidates[n++] = roots[i];
        for (int i = 0; i < n; ++i) {
            const double val = rational(seg, candidates[i]);
            ++evals;
            if (val < best_val) {
                best_val = val;
                best_x = candidates[i];
            }
        }
    }
    out.lambda_min = best_x;
    out.g_min = best_val;
    out.error_bound = 0;
    out.evaluations = evals;
    return out;
}

double capped_objective(const ProblemConstants& constants, const WorkloadDist& v,
                        double budget, double cap_slope) {
    const double f =
        phase1_value(v, budget, constants.mu_rho(), AllocationCap{cap_slope});
    return (constants.k1 + constants.k2 * budget + constants.holding * f) /
           (constants.k3 + budget);
}

namespace {

SolveResult solve_capped(const ProblemConstants& constants, const WorkloadDist& v,
                         double min_rate) {
    const double base = std::isfinite(constants.max_rate)
                            ? 1.0 / (constants.max_rate - constants.rho)
                            : 0.0;
    if (!(min_rate > constants.rho))
        throw InfeasibleModel("solve: min rate must exceed the mean input rate");
    const double cap_slope = 1.0 / (min_rate - constants.rho) - base;
    if (cap_slope <= 0) {
        // min rate equal to the max rate: the policy is forced to R = r
        SolveResult out{constants,
                        {0, constants.k1 / constants.k3, 0, 0, 1},
                        RatePolicy::waterfill(0, constants.max_rate,
                                              constants.mu_rho(), min_rate),
                        0};
        return out;
    }
    const AllocationCap cap{cap_slope};

    const auto objective = [&](double b) {
        return capped_objective(constants, v, b, cap_slope);
    };

    constexpr double kInvPhi = 0.6180339887498949;
    double lo = 0, hi = cap_slope * v.mean();
    const double width_tol = 1e-10 * std::max(1.0, hi);
    double x1 = hi - kInvPhi * hi;
    double x2 = kInvPhi * hi;
    double f1 = objective(x1);
    double f2 = objective(x2);
    int evals = 2;
    while (hi - lo > width_tol) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - kInvPhi * (hi - lo);
            f1 = objective(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + kInvPhi * (hi - lo);
            f2 = objective(x2);
        }
        ++evals;
    }
    const double budget = 0.5 * (lo + hi);

    SolveResult out{constants, {}, RatePolicy::constant(constants.max_rate), budget};
    const double level =
        budget > 0 ? level_for_budget(v, budget, constants.mu_rho(), cap) : 0.0;
    out.search.lambda_min = level;
    out.search.g_min = objective(budget);
    out.search.bracket_hi = cap_slope * v.mean();  // budget-space bracket
    out.search.evaluations = evals + 1;
    // Local Lipschitz certificate: the envelope derivative of the phase-I
    // value is the level itself, so |H'| <= (K2 + h*level + H)/K3 near the
    // final bracket.
    out.search.error_bound =
        std::isfinite(level)
            ? (constants.k2 + constants.holding * level + out.search.g_min) /
                  constants.k3 * (hi - lo)
            : std::numeric_limits<double>::infinity();
    out.policy = RatePolicy::waterfill(level, constants.max_rate,
                                       constants.mu_rho(), min_rate);
    return out;
}

}  // namespace

SolveResult solve_with_constants(const ProblemConstants& constants,
                                 const WorkloadDist& v,
                                 std::optional<double> min_rate,
                                 std::optional<Backend> backend) {
    if (min_rate) return solve_capped(constants, v, *min_rate);

    SearchResult search;
    if (!backend && v.is_discrete()) {
        search = minimize_discrete(constants, v);
    } else {
        GCurve curve(constants, v, backend);
        search = minimize(curve);
    }
    SolveResult out{constants, search,
                    RatePolicy::waterfill(search.lambda_min, constants.max_rate,
                                          constants.mu_rho()),
                    expected_allocation(v, search.lambda_min, constants.mu_rho())};
    return out;
}

SolveResult solve_model(const LevyExponent& input, const WorkloadDist& v,
                        const OffPeriodSpec& off, const CostParams& costs,
                        std::optional<Backend> backend) {
    const ProblemConstants constants =
        constants_from_primitives(input, v, off, costs);
    return solve_with_constants(constants, v, costs.min_rate, backend);
}

}  // namespace levyrate
