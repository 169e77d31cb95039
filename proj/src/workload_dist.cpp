#include "levyrate/workload_dist.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "levyrate/quadrature.hpp"

namespace levyrate {
namespace {

// Erlang(shape, rate) CDF, shape <= 4 here.
double erlang_cdf(double x, int shape, double rate) {
    if (x <= 0) return 0.0;
    const double t = rate * x;
    double term = 1.0, tail = 1.0;
    for (int k = 1; k < shape; ++k) {
        term *= t / k;
        tail += term;
    }
    return 1.0 - std::exp(-t) * tail;
}

double factorial(int k) {
    double f = 1;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
}

}  // namespace

WorkloadDist::WorkloadDist(Spec spec) : spec_(std::move(spec)) {}

WorkloadDist WorkloadDist::exponential(double rate) {
    if (!(rate > 0)) throw std::invalid_argument("workload exponential: rate must be > 0");
    return WorkloadDist(Exponential{rate});
}

WorkloadDist WorkloadDist::uniform(double lo, double hi) {
    if (!(lo >= 0) || !(hi > lo))
        throw std::invalid_argument("workload uniform: need 0 <= lo < hi");
    return WorkloadDist(Uniform{lo, hi});
}

WorkloadDist WorkloadDist::atoms(std::vector<std::pair<double, double>> points) {
    if (points.empty()) throw std::invalid_argument("workload atoms: empty support");
    double total = 0;
    for (const auto& [v, p] : points) {
        if (!(v > 0)) throw std::invalid_argument("workload atoms: support must be > 0");
        if (p < 0) throw std::invalid_argument("workload atoms: negative probability");
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-12)
        throw std::invalid_argument("workload atoms: probabilities must sum to 1");
    std::sort(points.begin(), points.end());
    return WorkloadDist(Atoms{std::move(points)});
}

WorkloadDist WorkloadDist::empirical(std::vector<double> samples) {
    if (samples.empty()) throw std::invalid_argument("workload empirical: no samples");
    for (double v : samples)
        if (!(v > 0)) throw std::invalid_argument("workload empirical: samples must be > 0");
    std::sort(samples.begin(), samples.end());
    return WorkloadDist(Empirical{std::move(samples)});
}

double WorkloadDist::mean_inverse() const {
    return std::visit(
        [](const auto& d) -> double {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, Exponential>)
                return std::numeric_limits<double>::infinity();
            if constexpr (std::is_same_v<T, Uniform>) {
                if (d.lo == 0) return std::numeric_limits<double>::infinity();
                return std::log(d.hi / d.lo) / (d.hi - d.lo);
            }
            if constexpr (std::is_same_v<T, Atoms>) {
                double s = 0;
                for (const auto& [v, p] : d.points) s += p / v;
                return s;
            }
            if constexpr (std::is_same_v<T, Empirical>) {
                double s = 0;
                for (double v : d.samples) s += 1.0 / v;
                return s / static_cast<double>(d.samples.size());
            }
        },
        spec_);
}

double WorkloadDist::partial_moment(int k, double lo, double hi) const {
    if (k < 0 || k > 3) throw std::invalid_argument("partial_moment: k in 0..3");
    if (!(hi > lo)) return 0.0;
    return std::visit(
        [k, lo, hi](const auto& d) -> double {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, Exponential>) {
                // int_s^t v^k rate e^{-rate v} dv = (k!/rate^k)(Erl(t,k+1)-Erl(s,k+1))
                const double scale = factorial(k) / std::pow(d.rate, k);
                return scale * (erlang_cdf(hi, k + 1, d.rate) -
                                erlang_cdf(std::max(lo, 0.0), k + 1, d.rate));
            }
            if constexpr (std::is_same_v<T, Uniform>) {
                const double l = std::clamp(lo, d.lo, d.hi);
                const double u = std::clamp(hi, d.lo, d.hi);
                if (!(u > l)) return 0.0;
                return (std::pow(u, k + 1) - std::pow(l, k + 1)) /
                       ((k + 1) * (d.hi - d.lo));
            }
            if constexpr (std::is_same_v<T, Atoms>) {
                double s = 0;
                for (const auto& [v, p] : d.points)
                    if (v > lo && v <= hi) s += p * std::pow(v, k);
                return s;
            }
            if constexpr (std::is_same_v<T, Empirical>) {
                double s = 0;
                for (double v : d.samples)
                    if (v > lo && v <= hi) s += std::pow(v, k);
                return s / static_cast<double>(d.samples.size());
            }
        },
        spec_);
}

double WorkloadDist::essential_inf() const {
    return std::visit(
        [](const auto& d) -> double {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, Exponential>) return 0.0;
            if constexpr (std::is_same_v<T, Uniform>) return d.lo;
            if constexpr (std::is_same_v<T, Atoms>) return d.points.front().first;
            if constexpr (std::is_same_v<T, Empirical>) return d.samples.front();
        },
        spec_);
}

double WorkloadDist::quantile(double q) const {
    if (!(q >= 0) || !(q < 1)) throw std::invalid_argument("quantile: q in [0,1)");
    return std::visit(
        [q](const auto& d) -> double {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, Exponential>)
                return -std::log1p(-q) / d.rate;
            if constexpr (std::is_same_v<T, Uniform>)
                return d.lo + q * (d.hi - d.lo);
            if constexpr (std::is_same_v<T, Atoms>) {
                double acc = 0;
                for (const auto& [v, p] : d.points) {
                    acc += p;
                    if (acc >= q) return v;
                }
                return d.points.back().first;
            }
            if constexpr (std::is_same_v<T, Empirical>) {
                const auto n = d.samples.size();
                auto idx = static_cast<std::size_t>(q * static_cast<double>(n));
                if (idx >= n) idx = n - 1;
                return d.samples[idx];
            }
        },
        spec_);
}

double WorkloadDist::essential_sup_hint() const {
    return std::visit(
        [](const auto& d) -> double {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, Exponential>)
                return 46.0 / d.rate;  // residual mass ~1e-20
            if constexpr (std::is_same_v<T, Uniform>) return d.hi;
            if constexpr (std::is_same_v<T, Atoms>) return d.points.back().first;
            if constexpr (std::is_same_v<T, Empirical>) return d.samples.back();
        },
        spec_);
}

double WorkloadDist::expectation(const std::function<double(double)>& f) const {
    return std::visit(
        [&f, this](const auto& d) -> double {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, Exponential>) {
                const auto g = [&f, &d](double v) {
                    return f(v) * d.rate * std::exp(-d.rate * v);
                };
                return integrate(g, 0.0, essential_sup_hint());
            }
            if constexpr (std::is_same_v<T, Uniform>) {
                const double w = d.hi - d.lo;
                const auto g = [&f, w](double v) { return f(v) / w; };
                return integrate(g, d.lo, d.hi);
            }
            if constexpr (std::is_same_v<T, Atoms>) {
                double s = 0;
                for (const auto& [v, p] : d.points) s += p * f(v);
                return s;
            }
            if constexpr (std::is_same_v<T, Empirical>) {
                double s = 0;
                for (double v : d.samples) s += f(v);
                return s / static_cast<double>(d.samples.size());
            }
        },
        spec_);
}

double WorkloadDist::sample(Rng& rng) const {
    return std::visit(
        [&rng](const auto& d) -> double {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, Exponential>) return rng.exponential(d.rate);
            if constexpr (std::is_same_v<T, Uniform>) return rng.uniform(d.lo, d.hi);
            if constexpr (std::is_same_v<T, Atoms>) {
                double u = rng.uniform01();
                for (const auto& [v, p] : d.points) {
                    if (u < p) return v;
                    u -= p;
                }
                return d.points.back().first;
            }
            if constexpr (std::is_same_v<T, Empirical>) {
                const auto n = d.samples.size();
                auto idx = static_cast<std::size_t>(rng.uniform01() * static_cast<double>(n));
                if (idx >= n) idx = n - 1;
                return d.samples[idx];
            }
        },
        spec_);
}

bool WorkloadDist::is_discrete() const {
    return std::holds_alternative<Atoms>(spec_) ||
           std::holds_alternative<Empirical>(spec_);
}

std::vector<std::pair<double, double>> WorkloadDist::atom_view() const {
    if (const auto* a = std::get_if<Atoms>(&spec_)) return a->points;
    if (const auto* e = std::get_if<Empirical>(&spec_)) {
        const double p = 1.0 / static_cast<double>(e->samples.size());
        std::vector<std::pair<double, double>> out;
        out.reserve(e->samples.size());
        for (double v : e->samples) out.emplace_back(v, p);
        return out;
    }
    throw std::logic_error("atom_view: continuous workload law");
}

}  // namespace levyrate
