// Integration checks for the levyrate CLI: exit codes, CSV schema round
// trips, and cross-command consistency. argv: binary, models dir, work dir.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "levyrate/model_io.hpp"

namespace {

int failures = 0;
std::string g_binary, g_models, g_work;

void check(bool ok, const std::string& what) {
    std::printf("%s: %s\n", ok ? "ok" : "FAIL", what.c_str());
    if (!ok) ++failures;
}

int run_cli(const std::string& args, const std::string& env = "") {
    const std::string cmd = env + (env.empty() ? "" : " ") + g_binary + " " + args +
                            " 2>/dev/null";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

using Section = std::vector<std::vector<std::string>>;

// Documented CSV layout: sections separated by one blank line, each section a
// header row plus data rows, comma separators, no quoting.
std::vector<Section> parse_csv(const std::string& text) {
    std::vector<Section> sections(1);
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) {
            if (!sections.back().empty()) sections.emplace_back();
            continue;
        }
        std::vector<std::string> cells;
        std::size_t pos = 0;
        while (true) {
            const auto comma = line.find(',', pos);
            cells.push_back(line.substr(pos, comma == std::string::npos
                                                 ? std::string::npos
                                                 : comma - pos));
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        sections.back().push_back(std::move(cells));
    }
    if (sections.back().empty()) sections.pop_back();
    return sections;
}

bool rectangular(const Section& s) {
    if (s.empty()) return false;
    for (const auto& row : s)
        if (row.size() != s.front().size()) return false;
    return true;
}

double cell(const Section& s, std::size_t row, const std::string& column) {
    for (std::size_t c = 0; c < s.front().size(); ++c)
        if (s.front()[c] == column) return std::stod(s[row][c]);
    throw std::runtime_error("missing column " + column);
}

void check_solve() {
    const std::string out = g_work + "/solve.csv";
    check(run_cli("solve " + g_models + "/mm1.json --out " + out) == 0,
          "solve exits 0 on a valid model");
    const auto sections = parse_csv(slurp(out));
    check(sections.size() == 2, "solve CSV has the two documented sections");
    check(rectangular(sections[0]) && rectangular(sections[1]),
          "solve CSV sections are rectangular");
    check(sections[0].front() ==
              std::vector<std::string>{"lambda_min", "G_min", "error_bound", "K1",
                                       "K2", "K3", "rho", "mu", "lambda_star"},
          "solve summary header is stable");
    check(sections[1].front() == std::vector<std::string>{"v", "R"},
          "solve rate-table header is stable");
    check(sections[1].size() == 101, "solve rate table has 100 grid rows");

    const double lambda_min = cell(sections[0], 1, "lambda_min");
    const double lambda_star = cell(sections[0], 1, "lambda_star");
    check(lambda_min >= 0 && lambda_min <= lambda_star + 1e-9,
          "solve minimizer sits inside the bracket");
    double prev = 0;
    bool monotone = true, all_max = true;
    for (std::size_t i = 1; i < sections[1].size(); ++i) {
        const double r = std::stod(sections[1][i][1]);
        if (r < prev - 1e-10) monotone = false;
        if (r != 2.0) all_max = false;
        prev = r;
    }
    check(monotone, "solve rate table is nondecreasing");
    // this model has lambda_star = 0: the full rate is optimal everywhere
    check(lambda_star == 0.0 && lambda_min == 0.0 && all_max,
          "zero bracket pins the rate table at the maximal rate");

    const std::string out2 = g_work + "/solve_again.csv";
    run_cli("solve " + g_models + "/mm1.json --out " + out2);
    check(slurp(out) == slurp(out2), "solve output is byte-stable across runs");

    // stated-constants model drives the solver without an input section
    const std::string out3 = g_work + "/solve_stated.csv";
    check(run_cli("solve " + g_models + "/uniform_stated.json --out " + out3) == 0,
          "solve accepts a constants override without an input section");
    const auto stated = parse_csv(slurp(out3));
    check(cell(stated[0], 1, "K1") == 201.625, "override constants pass through");

    // end-to-end self-consistency: the emitted minimum re-evaluates on the
    // curve rebuilt from the model's primitives
    const std::string out4 = g_work + "/solve_k5.csv";
    run_cli("solve " + g_models + "/mm1_k5.json --out " + out4);
    const auto k5 = parse_csv(slurp(out4));
    const levyrate::ModelFile model = levyrate::load_model(g_models + "/mm1_k5.json");
    const levyrate::GCurve curve(levyrate::resolved_constants(model),
                                 levyrate::resolved_workload(model));
    const double lm = cell(k5[0], 1, "lambda_min");
    const double gm = cell(k5[0], 1, "G_min");
    check(lm > 0, "interior minimizer on the setup-heavy model");
    check(std::abs(curve.value(lm) - gm) <= 1e-7 * gm,
          "emitted G_min re-evaluates on the rebuilt curve");
}

void check_exit_codes() {
    check(run_cli("solve " + g_models + "/bad_schema.json --out " + g_work +
                  "/x.csv") == 2,
          "unknown keys exit 2");
    check(run_cli("solve " + g_models + "/bad_value.json --out " + g_work +
                  "/x.csv") == 2,
          "out-of-range parameter values exit 2");
    check(run_cli("solve " + g_models + "/infeasible.json --out " + g_work +
                  "/x.csv") == 3,
          "max rate below the input rate exits 3");
    check(run_cli("simulate " + g_models + "/mm1.json --policy constant:0.9 --out " +
                  g_work + "/x.csv") == 4,
          "a rate the input outruns exits 4");
    check(run_cli("simulate " + g_models + "/mm1.json --policy nonsense --out " +
                  g_work + "/x.csv") == 2,
          "a malformed policy spec exits 2");
}

void check_sweep() {
    const std::string out = g_work + "/sweep.csv";
    check(run_cli("sweep " + g_models + "/mm1.json --param K --values 1,75,200 "
                  "--out " + out) == 0,
          "sweep exits 0");
    const auto sections = parse_csv(slurp(out));
    check(sections.size() == 2 && rectangular(sections[0]) && rectangular(sections[1]),
          "sweep CSV has curve and summary sections");
    check(sections[1].size() == 4, "sweep summary has one row per value");
    const double l1 = cell(sections[1], 1, "lambda_min");
    const double l2 = cell(sections[1], 2, "lambda_min");
    const double l3 = cell(sections[1], 3, "lambda_min");
    check(l1 <= l2 + 1e-9 && l2 <= l3 + 1e-9,
          "sweep minimizers ordered with the setup cost");

    // uniform workload: the emitted curve crosses the half-support seam smoothly
    const std::string out2 = g_work + "/sweep_uniform.csv";
    check(run_cli("sweep " + g_models + "/uniform_sweep.json --param h --values 1 "
                  "--lambda-grid 0.0:1.3:131 --out " + out2) == 0,
          "uniform sweep exits 0");
    const auto uni = parse_csv(slurp(out2));
    std::vector<double> g_vals;
    for (std::size_t r = 1; r < uni[0].size(); ++r)
        g_vals.push_back(cell(uni[0], r, "G"));
    double max_diff = 0;
    std::vector<double> diffs;
    for (std::size_t i = 0; i + 1 < g_vals.size(); ++i) {
        diffs.push_back(std::abs(g_vals[i + 1] - g_vals[i]));
        max_diff = std::max(max_diff, diffs.back());
    }
    std::sort(diffs.begin(), diffs.end());
    const double median_diff = diffs[diffs.size() / 2];
    check(max_diff <= 10.0 * median_diff + 1e-9,
          "uniform sweep curve has no jump at the seam");

    // a one-value sweep degenerates to the solve summary
    const std::string sout = g_work + "/solve_uniform.csv";
    run_cli("solve " + g_models + "/uniform_sweep.json --out " + sout);
    const auto solved = parse_csv(slurp(sout));
    check(std::abs(cell(uni[1], 1, "lambda_min") -
                   cell(solved[0], 1, "lambda_min")) <= 1e-12 &&
              std::abs(cell(uni[1], 1, "G_min") - cell(solved[0], 1, "G_min")) <=
                  1e-12,
          "one-value sweep summary equals the solve summary");
}

void check_simulate() {
    const std::string out = g_work + "/sim.csv";
    check(run_cli("simulate " + g_models + "/mm1.json --policy constant:2 --out " +
                  out) == 0,
          "simulate exits 0");
    const auto sections = parse_csv(slurp(out));
    check(sections.size() == 2 && rectangular(sections[0]) && rectangular(sections[1]),
          "simulate CSV has estimate and comparison sections");
    check(sections[0].front() ==
              std::vector<std::string>{"metric", "estimate", "half_width"},
          "simulate estimate header is stable");
    check(sections[1].front() ==
              std::vector<std::string>{"metric", "analytic", "estimate", "z_score"},
          "simulate comparison header is stable");
    // every comparison row carries a finite z-score
    bool z_ok = sections[1].size() > 5;
    int small_z = 0;
    for (std::size_t r = 1; r < sections[1].size(); ++r) {
        const double z = std::stod(sections[1][r][3]);
        if (!(std::abs(z) < 1e6)) z_ok = false;
        if (std::abs(z) <= 3.0) ++small_z;
    }
    check(z_ok, "simulate z-scores are finite");
    check(small_z >= static_cast<int>(sections[1].size()) - 2,
          "simulate z-scores are overwhelmingly within 3 SE");

    check(run_cli("simulate " + g_models + "/mm1.json --policy optimal --out " +
                  g_work + "/sim_opt.csv") == 0,
          "simulate accepts the optimal policy");

    const std::string again = g_work + "/sim_again.csv";
    run_cli("simulate " + g_models + "/mm1.json --policy constant:2 --out " + again);
    check(slurp(out) == slurp(again), "repeated seeds give identical CSV bytes");
}

void check_partial() {
    const std::string out = g_work + "/partial.csv";
    check(run_cli("partial " + g_models + "/partial.json --out " + out) == 0,
          "partial exits 0");
    const auto sections = parse_csv(slurp(out));
    check(sections.size() == 3, "partial CSV has constants, segments and rates");
    check(sections[1].front() ==
              std::vector<std::string>{"segment", "lo", "hi", "S", "T", "U", "Q", "W"},
          "partial segment header is stable");
    bool monotone = true;
    double prev = 0;
    for (std::size_t r = 1; r < sections[2].size(); ++r) {
        const double rate = std::stod(sections[2][r][1]);
        if (rate < prev - 1e-10) monotone = false;
        prev = rate;
    }
    check(monotone, "partial rate table is nondecreasing in the count");

    // a single-count model matches the equivalent one-atom full solve
    const std::string pout = g_work + "/partial_one.csv";
    const std::string sout = g_work + "/solve_equiv.csv";
    run_cli("partial " + g_models + "/partial_one.json --out " + pout);
    run_cli("solve " + g_models + "/atom_equiv.json --out " + sout);
    const auto p = parse_csv(slurp(pout));
    const auto s = parse_csv(slurp(sout));
    const double lp = cell(p[0], 1, "lambda_min");
    const double ls = cell(s[0], 1, "lambda_min");
    const double gp = cell(p[0], 1, "G_min");
    const double gs = cell(s[0], 1, "G_min");
    check(std::abs(gp - gs) <= 1e-9 * std::abs(gs) && std::abs(lp - ls) <= 1e-6,
          "single-count reduction matches the one-atom solve");

    check(run_cli("partial " + g_models + "/mm1.json --out " + g_work + "/x.csv") ==
              3,
          "partial without a partial_info section exits 3");
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 4) {
        std::fprintf(stderr, "usage: cli_checks <binary> <models-dir> <work-dir>\n");
        return 2;
    }
    g_binary = argv[1];
    g_models = argv[2];
    g_work = argv[3];
    std::filesystem::create_directories(g_work);

    check_solve();
    check_exit_codes();
    check_sweep();
    check_simulate();
    check_partial();

    if (failures) std::printf("%d CLI check(s) failed\n", failures);
    return failures == 0 ? 0 : 1;
}
