#include "levyrate/commands.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>

#include "levyrate/partial_info.hpp"
#include "levyrate/steady_state.hpp"
#include "levyrate/waterfill.hpp"

namespace levyrate {
namespace {

class CsvWriter {
public:
    explicit CsvWriter(const std::string& path) : out_(path, std::ios::binary) {
        if (!out_) throw std::runtime_error("cannot open output file " + path);
    }

    void row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out_ << ',';
            out_ << cells[i];
        }
        out_ << '\n';
    }

    void blank() { out_ << '\n'; }

private:
    std::ofstream out_;
};

std::vector<double> linspace(double lo, double hi, int count) {
    std::vector<double> out;
    out.reserve(count);
    if (count == 1 || hi == lo) {
        out.push_back(lo);
        return out;
    }
    for (int i = 0; i < count; ++i)
        out.push_back(lo + (hi - lo) * i / (count - 1));
    return out;
}

std::vector<double> default_v_grid(const ModelFile& model, const WorkloadDist& v) {
    if (model.solver.v_grid) {
        const auto& g = *model.solver.v_grid;
        return linspace(g.lo, g.hi, g.count);
    }
    const double lo = std::max(v.quantile(0.005), 1e-9);
    const double hi = std::max(v.quantile(0.995), lo);
    return linspace(lo, hi, 100);
}

RatePolicy parse_policy_spec(const ModelFile& model, const std::string& spec) {
    if (spec == "optimal") {
        const WorkloadDist v = resolved_workload(model);
        const ProblemConstants constants = resolved_constants(model);
        return solve_with_constants(constants, v, model.costs.min_rate,
                                    model.solver.backend)
            .policy;
    }
    const auto colon = spec.find(':');
    if (colon != std::string::npos) {
        const std::string kind = spec.substr(0, colon);
        const std::string arg = spec.substr(colon + 1);
        char* end = nullptr;
        const double value = std::strtod(arg.c_str(), &end);
        if (end && *end == '\0') {
            if (kind == "constant") return RatePolicy::constant(value);
            if (kind == "affine") return RatePolicy::affine(value);
        }
    }
    throw SchemaError("--policy: expected constant:<R>, affine:<s> or optimal, got '" +
                      spec + "'");
}

}  // namespace

std::string format_double(double x) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

void cmd_solve(const ModelFile& model, const std::string& out_path) {
    const WorkloadDist v = resolved_workload(model);
    const ProblemConstants constants = resolved_constants(model);
    const SolveResult solved = solve_with_constants(
        constants, v, model.costs.min_rate, model.solver.backend);
    const double lambda_star = GCurve(constants, v).search_bound();

    CsvWriter csv(out_path);
    csv.row({"lambda_min", "G_min", "error_bound", "K1", "K2", "K3", "rho", "mu",
             "lambda_star"});
    csv.row({format_double(solved.search.lambda_min),
             format_double(solved.search.g_min),
             format_double(solved.search.error_bound), format_double(constants.k1),
             format_double(constants.k2), format_double(constants.k3),
             format_double(constants.rho), format_double(constants.mu),
             format_double(lambda_star)});
    csv.blank();
    csv.row({"v", "R"});
    for (double w : default_v_grid(model, v))
        csv.row({format_double(w),
                 format_double(solved.policy.rate(w, constants.rho))});
}

void cmd_sweep(const ModelFile& model, const std::string& param,
               const std::vector<double>& values,
               std::optional<LambdaGrid> grid, const std::string& out_path) {
    if (model.solver.constants_override)
        throw InfeasibleModel("sweep needs constants derived from primitives");
    if (model.costs.min_rate)
        throw InfeasibleModel("sweep does not support models with r_min");
    if (!model.input || !model.off)
        throw InfeasibleModel("sweep needs input and off sections");
    if (values.empty()) throw SchemaError("--values: need at least one value");
    if (param != "K" && param != "h" && param != "d")
        throw SchemaError("--param must be one of K, h, d");

    const WorkloadDist v = resolved_workload(model);

    struct Point {
        double value;
        ProblemConstants constants;
        SearchResult search;
    };
    std::vector<Point> points;
    for (double x : values) {
        CostParams costs = model.costs;
        if (param == "K")
            costs.setup = x;
        else if (param == "h")
            costs.holding = x;
        else
            costs.capacity = x;
        const ProblemConstants constants =
            constants_from_primitives(*model.input, v, *model.off, costs);
        const SolveResult solved =
            solve_with_constants(constants, v, {}, model.solver.backend);
        points.push_back({x, constants, solved.search});
    }

    LambdaGrid g{0.0, 0.0, 200};
    if (grid) {
        g = *grid;
        if (g.count < 2 || !(g.hi > g.lo))
            throw SchemaError("--lambda-grid: need lo < hi and count >= 2");
    } else {
        for (const auto& p : points) g.hi = std::max(g.hi, 1.1 * p.search.bracket_hi);
        if (g.hi == 0) g.hi = 1.0;
    }

    CsvWriter csv(out_path);
    csv.row({"param", "param_value", "lambda", "G"});
    for (const auto& p : points) {
        GCurve curve(p.constants, v, model.solver.backend);
        for (double lam : linspace(g.lo, g.hi, g.count))
            csv.row({param, format_double(p.value), format_double(lam),
                     format_double(curve.value(lam))});
    }
    csv.blank();
    csv.row({"param", "param_value", "lambda_min", "G_min"});
    for (const auto& p : points)
        csv.row({param, format_double(p.value), format_double(p.search.lambda_min),
                 format_double(p.search.g_min)});
}

void cmd_simulate(const ModelFile& model, const std::string& policy_spec,
                  const std::string& out_path, int max_threads) {
    if (!model.input || !model.off || !model.sim)
        throw InfeasibleModel("simulate needs input, off and sim sections");

    SimConfig config{*model.input,
                     *model.off,
                     parse_policy_spec(model, policy_spec),
                     model.costs,
                     model.sim->n_cycles,
                     model.sim->seed,
                     model.sim->batch_count,
                     model.sim->lst_alphas,
                     max_threads};
    const double rho = config.input.mean_rate();
    {
        // unreachable rates are a distinct exit code at the CLI level
        const WorkloadDist v = resolved_workload(model);
        const double probe = std::max(v.essential_inf(), v.quantile(0.001));
        if (!(config.policy.rate(probe, rho) > std::max(rho, config.input.drift())))
            throw UnstablePolicy("policy rate does not exceed max(rho, drift)");
    }
    const SimReport report = run(config);

    CsvWriter csv(out_path);
    csv.row({"metric", "estimate", "half_width"});
    const auto metric = [&](const std::string& name, const Estimate& e) {
        csv.row({name, format_double(e.value), format_double(e.half_width)});
    };
    metric("avg_cost", report.avg_cost);
    metric("mean_workload", report.mean_workload);
    metric("on_fraction", report.on_fraction);
    metric("busy_mean", report.busy_mean);
    for (const auto& [alpha, e] : report.lst)
        metric("lst_" + format_double(alpha), e);
    metric("mean_cycle_length", report.mean_cycle_length);
    metric("mean_V", report.mean_v);
    csv.row({"mean_T_on", format_double(report.mean_t_on), ""});
    csv.row({"mean_off_area", format_double(report.mean_off_area), ""});
    csv.row({"cost_jackknife_bias", format_double(report.cost_jackknife_bias), ""});
    csv.row({"n_cycles", std::to_string(report.cycles), ""});

    // analytic counterparts where the declared workload law admits them
    csv.blank();
    csv.row({"metric", "analytic", "estimate", "z_score"});
    const WorkloadDist v = resolved_workload(model);
    const double t_factor = t_quantile_975(config.batch_count - 1);
    const auto compare = [&](const std::string& name, double analytic,
                             const Estimate& e) {
        const double se = e.half_width / t_factor;
        const double z = se > 0 ? (e.value - analytic) / se : 0.0;
        csv.row({name, format_double(analytic), format_double(e.value),
                 format_double(z)});
    };

    compare("avg_cost",
            steady_cost(*model.input, v, config.policy, *model.off, model.costs),
            report.avg_cost);
    const double on_weight = expected_v_over_gap(*model.input, v, config.policy);
    const double cycle_len = model.off->mean_tau + on_weight;
    compare("on_fraction", on_weight / cycle_len, report.on_fraction);
    compare("mean_cycle_length", cycle_len, report.mean_cycle_length);
    compare("mean_V", v.mean(), report.mean_v);
    try {
        compare("busy_mean", busy_mean(*model.input, v, config.policy),
                report.busy_mean);
    } catch (const std::domain_error&) {
        // divergent on-period mean (affine policy with E[1/V] = infinity)
    }
    const bool degenerate_off =
        std::holds_alternative<FirstJump>(model.off->rule) &&
        model.input->drift() == 0;
    if (degenerate_off) {
        for (const auto& [alpha, e] : report.lst) {
            const double analytic =
                workload_lst(*model.input, v, config.policy, *model.off,
                             [](double) { return 1.0; }, alpha);
            compare("lst_" + format_double(alpha), analytic, e);
        }
    }
}

void cmd_partial(const ModelFile& model, const std::string& out_path) {
    if (!model.partial) throw InfeasibleModel("partial needs a partial_info section");
    if (!model.input || !model.off)
        throw InfeasibleModel("partial needs input and off sections");

    std::vector<std::pair<double, double>> count_atoms;
    for (std::size_t i = 0; i < model.partial->count_probs.size(); ++i)
        if (model.partial->count_probs[i] > 0)
            count_atoms.emplace_back(static_cast<double>(i + 1),
                                     model.partial->count_probs[i]);
    PartialInfoModel pim{WorkloadDist::atoms(std::move(count_atoms)),
                         model.partial->delta,
                         model.partial->sigma2,
                         *model.input,
                         *model.off,
                         model.costs};
    const PartialSolution sol = solve_partial(pim);
    const auto& c = sol.reduced.constants;
    const double lambda_star = GCurve(c, sol.reduced.workload).search_bound();

    CsvWriter csv(out_path);
    csv.row({"K1_eff", "K2_eff", "K3_eff", "rho", "mu", "delta", "lambda_min",
             "G_min", "lambda_star"});
    csv.row({format_double(c.k1), format_double(c.k2), format_double(c.k3),
             format_double(c.rho), format_double(c.mu),
             format_double(pim.mean_piece), format_double(sol.search.lambda_min),
             format_double(sol.search.g_min), format_double(lambda_star)});
    csv.blank();
    csv.row({"segment", "lo", "hi", "S", "T", "U", "Q", "W"});
    int index = 0;
    for (const auto& seg :
         discrete_segments(c, sol.reduced.workload, lambda_star)) {
        csv.row({std::to_string(index++), format_double(seg.lo),
                 format_double(seg.hi), format_double(seg.s), format_double(seg.t),
                 format_double(seg.u), format_double(seg.q), format_double(seg.w)});
    }
    csv.blank();
    csv.row({"n", "R"});
    for (const auto& [n, r] : sol.rate_table)
        csv.row({format_double(n), format_double(r)});
}

}  // namespace levyrate
