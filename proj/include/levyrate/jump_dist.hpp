#pragma once

#include <utility>
#include <variant>
#include <vector>

#include "levyrate/rng.hpp"

namespace levyrate {

// Jump-size law of the compound-Poisson part of the input. Restricted to
// parametric families with closed-form transforms and moments; every
// downstream formula needs only those and sampling.
class JumpDist {
public:
    struct Exponential {
        double rate;  // theta > 0
    };
    struct Uniform {
        double lo, hi;  // 0 <= lo < hi
    };
    struct Deterministic {
        double value;  // > 0
    };
    struct Atoms {
        std::vector<std::pair<double, double>> points;  // (x_i > 0, p_i), sum p = 1
    };
    using Spec = std::variant<Exponential, Uniform, Deterministic, Atoms>;

    static JumpDist exponential(double rate);
    static JumpDist uniform(double lo, double hi);
    static JumpDist deterministic(double value);
    static JumpDist atoms(std::vector<std::pair<double, double>> points);

    double mean() const;
    double second_moment() const;

    // E[1 - e^{-alpha J}], evaluated in a cancellation-free form.
    double one_minus_lst(double alpha) const;

    double sample(Rng& rng) const;

    // Size-biased draw (density x dF(x) / EJ). U(0,1) times this draw has the
    // stationary-excess law of J, which is how the equilibrium sampler works.
    double sample_size_biased(Rng& rng) const;

    const Spec& spec() const { return spec_; }

private:
    explicit JumpDist(Spec spec);

    Spec spec_;
};

}  // namespace levyrate
