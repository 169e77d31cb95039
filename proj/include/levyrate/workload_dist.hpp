#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "levyrate/rng.hpp"

namespace levyrate {

// Law of the workload V at the start of an on period. Support is strictly
// positive (uniform may start at 0; the endpoint has zero mass) and the
// second moment is finite for every variant.
class WorkloadDist {
public:
    struct Exponential {
        double rate;
    };
    struct Uniform {
        double lo, hi;
    };
    struct Atoms {
        std::vector<std::pair<double, double>> points;  // (v_i > 0, p_i)
    };
    struct Empirical {
        std::vector<double> samples;  // sorted ascending, all > 0
    };
    using Spec = std::variant<Exponential, Uniform, Atoms, Empirical>;

    static WorkloadDist exponential(double rate);
    static WorkloadDist uniform(double lo, double hi);
    static WorkloadDist atoms(std::vector<std::pair<double, double>> points);
    static WorkloadDist single_atom(double v) { return atoms({{v, 1.0}}); }
    static WorkloadDist empirical(std::vector<double> samples);

    double mean() const { return partial_moment(1, 0, essential_sup_hint()); }
    double second_moment() const { return partial_moment(2, 0, essential_sup_hint()); }

    // E[1/V]; +infinity when the law puts mass arbitrarily close to 0
    // (Exponential, Uniform starting at 0).
    double mean_inverse() const;

    // E[V^k ; lo < V <= hi] in closed form, k in {0,1,2,3}.
    double partial_moment(int k, double lo, double hi) const;

    double essential_inf() const;
    double quantile(double q) const;

    // E[f(V)] by finite sum (atoms/empirical) or adaptive quadrature against
    // the density (exponential tail truncated where the mass is < 1e-18;
    // f must grow at most polynomially).
    double expectation(const std::function<double(double)>& f) const;

    double sample(Rng& rng) const;

    bool is_discrete() const;
    // Atom view for discrete variants (empirical samples become equal-weight
    // atoms). Throws for continuous variants.
    std::vector<std::pair<double, double>> atom_view() const;

    const Spec& spec() const { return spec_; }

private:
    explicit WorkloadDist(Spec spec);
    double essential_sup_hint() const;  // finite integration bound

    Spec spec_;
};

}  // namespace levyrate
