#include "levyrate/jump_dist.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace levyrate {

JumpDist::JumpDist(Spec spec) : spec_(std::move(spec)) {}

JumpDist JumpDist::exponential(double rate) {
    if (!(rate > 0)) throw std::invalid_argument("jump exponential: rate must be > 0");
    return JumpDist(Exponential{rate});
}

JumpDist JumpDist::uniform(double lo, double hi) {
    if (!(lo >= 0) || !(hi > lo))
        throw std::invalid_argument("jump uniform: need 0 <= lo < hi");
    return JumpDist(Uniform{lo, hi});
}

JumpDist JumpDist::deterministic(double value) {
    if (!(value > 0)) throw std::invalid_argument("jump deterministic: value must be > 0");
    return JumpDist(Deterministic{value});
}

JumpDist JumpDist::atoms(std::vector<std::pair<double, double>> points) {
    if (points.empty()) throw std::invalid_argument("jump atoms: empty support");
    double total = 0;
    for (const auto& [x, p] : points) {
        if (!(x > 0)) throw std::invalid_argument("jump atoms: support must be > 0");
        if (p < 0) throw std::invalid_argument("jump atoms: negative probability");
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-12)
        throw std::invalid_argument("jump atoms: probabilities must sum to 1");
    return JumpDist(Atoms{std::move(points)});
}

double JumpDist::mean() const {
    return std::visit(
        [](const auto& d) -> double {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, Exponential>) return 1.0 / d.rate;
            if constexpr (std::is_same_v<T, Uniform>) return 0.5 * (d.lo + d.hi);
            if constexpr (std::is_same_v<T, Deterministic>) return d.value;
            if constexpr (std::is_same_v<T, Atoms>) {
                double m = 0;
                for (const auto& [x, p] : d.points) m += p * x;
                return m;
            }
        },
        spec_);
}

double JumpDist::second_moment() const {
    return std::visit(
        [](const auto& d) -> double {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, Exponential>) return 2.0 / (d.rate * d.rate);
            if constexpr (std::is_same_v<T, Uniform>)
                return (d.lo * d.lo + d.lo * d.hi + d.hi * d.hi) / 3.0;
            if constexpr (std::is_same_v<T, Deterministic>) return d.value * d.value;
            if constexpr (std::is_same_v<T, Atoms>) {
                double m = 0;
                for (const auto& [x, p] : d.points) m += p * x * x;
                return m;
            }
        },
        spec_);
}

double JumpDist::one_minus_lst(double alpha) const {
    if (alpha == 0) return 0.0;
    return std::visit(
        [alpha](const auto& d) -> double {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, Exponential>)
                return alpha / (d.rate + alpha);
            if constexpr (std::is_same_v<T, Uniform>) {
                // E e^{-aJ} = e^{-a lo} (1 - e^{-a(hi-lo)}) / (a (hi-lo))
                const double w = d.hi - d.lo;
                const double lst =
                    std::exp(-alpha * d.lo) * (-std::expm1(-alpha * w)) / (alpha * w);
                return 1.0 - lst;
            }
            if constexpr (std::is_same_v<T, Deterministic>)
                return -std::expm1(-alpha * d.value);
            if constexpr (std::is_same_v<T, Atoms>) {
                double s = 0;
                for (const auto& [x, p] : d.points) s += p * -std::expm1(-alpha * x);
                return s;
            }
        },
        spec_);
}

double JumpDist::sample(Rng& rng) const {
    return std::visit(
        [&rng](const auto& d) -> double {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, Exponential>) return rng.exponential(d.rate);
            if constexpr (std::is_same_v<T, Uniform>) return rng.uniform(d.lo, d.hi);
            if constexpr (std::is_same_v<T, Deterministic>) return d.value;
            if constexpr (std::is_same_v<T, Atoms>) {
                double u = rng.uniform01();
                for (const auto& [x, p] : d.points) {
                    if (u < p) return x;
                    u -= p;
                }
                return d.points.back().first;
            }
        },
        spec_);
}

double JumpDist::sample_size_biased(Rng& rng) const {
    return std::visit(
        [&rng, this](const auto& d) -> double {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, Exponential>) {
                // size-biased exponential is Erlang(2)
                return rng.exponential(d.rate) + rng.exponential(d.rate);
            }
            if constexpr (std::is_same_v<T, Uniform>) {
                // inverse CDF of density x / E J on [lo,hi]
                const double u = rng.uniform01();
                return std::sqrt(d.lo * d.lo + u * (d.hi * d.hi - d.lo * d.lo));
            }
            if constexpr (std::is_same_v<T, Deterministic>) return d.value;
            if constexpr (std::is_same_v<T, Atoms>) {
                const double m = mean();
                double u = rng.uniform01() * m;
                for (const auto& [x, p] : d.points) {
                    const double w = p * x;
                    if (u < w) return x;
                    u -= w;
                }
                return d.points.back().first;
            }
        },
        spec_);
}

}  // namespace levyrate
