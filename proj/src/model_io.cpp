#include "levyrate/model_io.hpp"

#include <cmath>
#include <fstream>
#include <limits>

#include <json.hpp>

namespace levyrate {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw SchemaError(path + ": " + what);
}

void reject_unknown(const json& obj, const std::string& path,
                    std::initializer_list<const char*> allowed) {
    for (const auto& [key, value] : obj.items()) {
        bool ok = false;
        for (const char* a : allowed)
            if (key == a) ok = true;
        if (!ok) fail(path + "." + key, "unknown key");
    }
}

const json& require(const json& obj, const std::string& path, const char* key) {
    if (!obj.contains(key)) fail(path + "." + key, "missing required key");
    return obj.at(key);
}

double number(const json& j, const std::string& path) {
    if (!j.is_number()) fail(path, "expected a number");
    return j.get<double>();
}

double number_or(const json& obj, const std::string& path, const char* key,
                 double fallback) {
    if (!obj.contains(key)) return fallback;
    return number(obj.at(key), path + "." + key);
}

std::string text(const json& j, const std::string& path) {
    if (!j.is_string()) fail(path, "expected a string");
    return j.get<std::string>();
}

std::vector<double> number_array(const json& j, const std::string& path) {
    if (!j.is_array()) fail(path, "expected an array of numbers");
    std::vector<double> out;
    out.reserve(j.size());
    for (std::size_t i = 0; i < j.size(); ++i)
        out.push_back(number(j.at(i), path + "[" + std::to_string(i) + "]"));
    return out;
}

std::vector<std::pair<double, double>> atom_pairs(const json& obj,
                                                  const std::string& path) {
    const auto values = number_array(require(obj, path, "values"), path + ".values");
    const auto probs = number_array(require(obj, path, "probs"), path + ".probs");
    if (values.size() != probs.size())
        fail(path, "values and probs must have the same length");
    std::vector<std::pair<double, double>> out;
    for (std::size_t i = 0; i < values.size(); ++i)
        out.emplace_back(values[i], probs[i]);
    return out;
}

JumpDist parse_jump(const json& j, const std::string& path) {
    if (!j.is_object()) fail(path, "expected an object");
    reject_unknown(j, path, {"type", "params"});
    const std::string type = text(require(j, path, "type"), path + ".type");
    const json& params = require(j, path, "params");
    const std::string ppath = path + ".params";
    if (!params.is_object()) fail(ppath, "expected an object");
    if (type == "exponential") {
        reject_unknown(params, ppath, {"rate"});
        return JumpDist::exponential(number(require(params, ppath, "rate"), ppath + ".rate"));
    }
    if (type == "uniform") {
        reject_unknown(params, ppath, {"a", "b"});
        return JumpDist::uniform(number(require(params, ppath, "a"), ppath + ".a"),
                                 number(require(params, ppath, "b"), ppath + ".b"));
    }
    if (type == "deterministic") {
        reject_unknown(params, ppath, {"value"});
        return JumpDist::deterministic(
            number(require(params, ppath, "value"), ppath + ".value"));
    }
    if (type == "atoms") {
        reject_unknown(params, ppath, {"values", "probs"});
        return JumpDist::atoms(atom_pairs(params, ppath));
    }
    fail(path + ".type", "unknown jump type '" + type + "'");
}

WorkloadDist parse_workload(const json& j, const std::string& path) {
    if (!j.is_object()) fail(path, "expected an object or \"from_input_first_jump\"");
    reject_unknown(j, path, {"type", "params"});
    const std::string type = text(require(j, path, "type"), path + ".type");
    const json& params = require(j, path, "params");
    const std::string ppath = path + ".params";
    if (!params.is_object()) fail(ppath, "expected an object");
    if (type == "exponential") {
        reject_unknown(params, ppath, {"rate"});
        return WorkloadDist::exponential(
            number(require(params, ppath, "rate"), ppath + ".rate"));
    }
    if (type == "uniform") {
        reject_unknown(params, ppath, {"a", "b"});
        return WorkloadDist::uniform(number(require(params, ppath, "a"), ppath + ".a"),
                                     number(require(params, ppath, "b"), ppath + ".b"));
    }
    if (type == "deterministic") {
        reject_unknown(params, ppath, {"value"});
        return WorkloadDist::single_atom(
            number(require(params, ppath, "value"), ppath + ".value"));
    }
    if (type == "atoms") {
        reject_unknown(params, ppath, {"values", "probs"});
        return WorkloadDist::atoms(atom_pairs(params, ppath));
    }
    if (type == "empirical") {
        reject_unknown(params, ppath, {"samples"});
        return WorkloadDist::empirical(
            number_array(require(params, ppath, "samples"), ppath + ".samples"));
    }
    fail(path + ".type", "unknown workload type '" + type + "'");
}

TauRule parse_rule(const json& j, const std::string& path) {
    if (!j.is_object()) fail(path, "expected an object");
    const std::string type = text(require(j, path, "type"), path + ".type");
    if (type == "first_jump") {
        reject_unknown(j, path, {"type"});
        return FirstJump{};
    }
    if (type == "fixed_time") {
        reject_unknown(j, path, {"type", "T"});
        return FixedTime{number(require(j, path, "T"), path + ".T")};
    }
    if (type == "exp_timer") {
        reject_unknown(j, path, {"type", "rate"});
        return ExpTimer{number(require(j, path, "rate"), path + ".rate")};
    }
    fail(path + ".type", "unknown off rule '" + type + "'");
}

}  // namespace

ModelFile load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError(path + ": cannot open file");
    json root;
    try {
        root = json::parse(in);
    } catch (const json::parse_error& e) {
        throw SchemaError(path + ": " + e.what());
    }
    if (!root.is_object()) throw SchemaError(path + ": top level must be an object");

    try {
        reject_unknown(root, "$",
                       {"input", "workload_V", "off", "costs", "solver", "sim",
                        "partial_info"});

        ModelFile model;

        if (root.contains("input")) {
            const json& in_j = root.at("input");
            if (!in_j.is_object()) fail("$.input", "expected an object");
            reject_unknown(in_j, "$.input", {"drift", "poisson_rate", "jump"});
            const double drift = number_or(in_j, "$.input", "drift", 0.0);
            if (in_j.contains("jump")) {
                const double nu =
                    number(require(in_j, "$.input", "poisson_rate"), "$.input.poisson_rate");
                model.input = LevyExponent(
                    drift, nu, parse_jump(in_j.at("jump"), "$.input.jump"));
            } else {
                if (in_j.contains("poisson_rate"))
                    fail("$.input.poisson_rate", "given without a jump law");
                model.input = LevyExponent::pure_drift(drift);
            }
        }

        const json& wl = require(root, "$", "workload_V");
        if (wl.is_string()) {
            if (wl.get<std::string>() != "from_input_first_jump")
                fail("$.workload_V", "unknown workload keyword");
            model.workload_from_first_jump = true;
        } else {
            model.workload = parse_workload(wl, "$.workload_V");
        }

        const json& costs_j = require(root, "$", "costs");
        if (!costs_j.is_object()) fail("$.costs", "expected an object");
        reject_unknown(costs_j, "$.costs", {"h", "K", "d", "r", "r_min"});
        model.costs.holding = number(require(costs_j, "$.costs", "h"), "$.costs.h");
        model.costs.setup = number(require(costs_j, "$.costs", "K"), "$.costs.K");
        model.costs.capacity = number(require(costs_j, "$.costs", "d"), "$.costs.d");
        const json& r_j = require(costs_j, "$.costs", "r");
        model.costs.max_rate = r_j.is_string() && r_j.get<std::string>() == "inf"
                                   ? std::numeric_limits<double>::infinity()
                                   : number(r_j, "$.costs.r");
        if (costs_j.contains("r_min"))
            model.costs.min_rate = number(costs_j.at("r_min"), "$.costs.r_min");
        model.costs.validate();

        if (root.contains("off")) {
            const json& off_j = root.at("off");
            if (!off_j.is_object()) fail("$.off", "expected an object");
            reject_unknown(off_j, "$.off", {"mean_tau", "rule", "injected_hEtauEZ"});
            OffPeriodSpec off;
            off.mean_tau =
                number(require(off_j, "$.off", "mean_tau"), "$.off.mean_tau");
            // the injected scalar is h * (E tau * E Ztilde); store it h-free
            off.mean_off_area =
                number_or(off_j, "$.off", "injected_hEtauEZ", 0.0) / model.costs.holding;
            if (off_j.contains("rule")) off.rule = parse_rule(off_j.at("rule"), "$.off.rule");
            off.validate();
            model.off = off;
        }

        if (root.contains("solver")) {
            const json& s = root.at("solver");
            if (!s.is_object()) fail("$.solver", "expected an object");
            reject_unknown(s, "$.solver",
                           {"lambda_tol", "backend", "v_grid", "constants_override"});
            model.solver.rel_width_tol = number_or(s, "$.solver", "lambda_tol", 1e-8);
            if (!(model.solver.rel_width_tol > 0))
                fail("$.solver.lambda_tol", "must be > 0");
            if (s.contains("backend")) {
                const std::string b = text(s.at("backend"), "$.solver.backend");
                if (b == "quadrature")
                    model.solver.backend = Backend::Quadrature;
                else if (b != "auto")
                    fail("$.solver.backend", "expected \"auto\" or \"quadrature\"");
            }
            if (s.contains("v_grid")) {
                const json& g = s.at("v_grid");
                if (!g.is_object()) fail("$.solver.v_grid", "expected an object");
                reject_unknown(g, "$.solver.v_grid", {"min", "max", "count"});
                VGridSpec grid;
                grid.lo = number(require(g, "$.solver.v_grid", "min"), "$.solver.v_grid.min");
                grid.hi = number(require(g, "$.solver.v_grid", "max"), "$.solver.v_grid.max");
                const double cnt =
                    number(require(g, "$.solver.v_grid", "count"), "$.solver.v_grid.count");
                grid.count = static_cast<int>(cnt);
                if (grid.count < 1 || !(grid.hi >= grid.lo) || !(grid.lo > 0))
                    fail("$.solver.v_grid", "need 0 < min <= max and count >= 1");
                model.solver.v_grid = grid;
            }
            if (s.contains("constants_override")) {
                const json& c = s.at("constants_override");
                if (!c.is_object()) fail("$.solver.constants_override", "expected an object");
                const std::string cp = "$.solver.constants_override";
                reject_unknown(c, cp, {"K1", "K2", "K3", "mu", "rho"});
                ConstantsOverride o;
                o.k1 = number(require(c, cp, "K1"), cp + ".K1");
                o.k2 = number(require(c, cp, "K2"), cp + ".K2");
                o.k3 = number(require(c, cp, "K3"), cp + ".K3");
                o.mu = number(require(c, cp, "mu"), cp + ".mu");
                o.rho = number(require(c, cp, "rho"), cp + ".rho");
                if (!(o.k3 > 0) || !(o.mu > 0) || !(o.rho > 0))
                    fail(cp, "need K3 > 0, mu > 0, rho > 0");
                model.solver.constants_override = o;
            }
        }

        if (root.contains("sim")) {
            const json& s = root.at("sim");
            if (!s.is_object()) fail("$.sim", "expected an object");
            reject_unknown(s, "$.sim", {"n_cycles", "seed", "batch_count", "lst_alphas"});
            SimOptions sim;
            sim.n_cycles = static_cast<std::uint64_t>(
                number(require(s, "$.sim", "n_cycles"), "$.sim.n_cycles"));
            sim.seed = static_cast<std::uint64_t>(
                number(require(s, "$.sim", "seed"), "$.sim.seed"));
            sim.batch_count =
                static_cast<int>(number_or(s, "$.sim", "batch_count", 32));
            if (s.contains("lst_alphas")) {
                sim.lst_alphas = number_array(s.at("lst_alphas"), "$.sim.lst_alphas");
                for (double a : sim.lst_alphas)
                    if (!(a > 0)) fail("$.sim.lst_alphas", "alphas must be > 0");
            }
            model.sim = sim;
        }

        if (root.contains("partial_info")) {
            const json& p = root.at("partial_info");
            if (!p.is_object()) fail("$.partial_info", "expected an object");
            reject_unknown(p, "$.partial_info", {"p", "delta", "sigma2"});
            PartialInfoSection section;
            section.count_probs = number_array(require(p, "$.partial_info", "p"),
                                               "$.partial_info.p");
            section.delta =
                number(require(p, "$.partial_info", "delta"), "$.partial_info.delta");
            section.sigma2 = number_or(p, "$.partial_info", "sigma2", 0.0);
            if (!(section.delta > 0)) fail("$.partial_info.delta", "must be > 0");
            if (!(section.sigma2 >= 0)) fail("$.partial_info.sigma2", "must be >= 0");
            model.partial = section;
        }

        return model;
    } catch (const std::invalid_argument& e) {
        // parameter-range failures from the domain constructors are schema
        // errors of the file, not runtime conditions
        throw SchemaError(path + ": " + e.what());
    }
}

WorkloadDist resolved_workload(const ModelFile& model) {
    if (model.workload) return *model.workload;
    if (!model.input)
        throw InfeasibleModel("workload_V = from_input_first_jump needs an input section");
    if (!model.input->has_jumps() || model.input->drift() != 0)
        throw InfeasibleModel(
            "workload_V = from_input_first_jump needs a pure-jump input (drift 0)");
    const JumpDist& j = model.input->jumps();
    if (const auto* e = std::get_if<JumpDist::Exponential>(&j.spec()))
        return WorkloadDist::exponential(e->rate);
    if (const auto* u = std::get_if<JumpDist::Uniform>(&j.spec()))
        return WorkloadDist::uniform(u->lo, u->hi);
    if (const auto* d = std::get_if<JumpDist::Deterministic>(&j.spec()))
        return WorkloadDist::single_atom(d->value);
    return WorkloadDist::atoms(std::get<JumpDist::Atoms>(j.spec()).points);
}

ProblemConstants resolved_constants(const ModelFile& model) {
    if (model.solver.constants_override) {
        const auto& o = *model.solver.constants_override;
        ProblemConstants c;
        c.k1 = o.k1;
        c.k2 = o.k2;
        c.k3 = o.k3;
        c.mu = o.mu;
        c.rho = o.rho;
        c.max_rate = model.costs.max_rate;
        c.holding = model.costs.holding;
        if (!(c.max_rate > c.rho))
            throw InfeasibleModel("infeasible: max rate must exceed rho");
        return c;
    }
    if (!model.input || !model.off)
        throw InfeasibleModel(
            "constants need input and off sections (or a constants_override)");
    return constants_from_primitives(*model.input, resolved_workload(model),
                                     *model.off, model.costs);
}

}  // namespace levyrate
