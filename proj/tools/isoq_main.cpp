#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "isoq/asymmetry.hpp"
#include "isoq/constants.hpp"
#include "isoq/harness.hpp"
#include "isoq/measures.hpp"
#include "isoq/shape_io.hpp"
#include "isoq/symmetrization.hpp"

using ordered = nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitCheckFailed = 2;

std::string timestamp_now() {
    auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

void emit(const std::string& text, const std::string& output_path) {
    if (output_path.empty()) {
        std::cout << text << "\n";
        return;
    }
    // write-then-rename: an interrupted run never leaves a torn report
    std::string tmp = output_path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write output file: " + output_path);
        out << text;
    }
    if (std::rename(tmp.c_str(), output_path.c_str()) != 0)
        throw std::runtime_error("cannot finalize output file: " + output_path);
}

std::vector<double> parse_eps_spec(const std::string& spec) {
    // "<from>:<to>:log:<count>" or a comma-separated list
    std::vector<double> grid;
    if (spec.find(':') == std::string::npos) {
        std::stringstream ss(spec);
        std::string tok;
        while (std::getline(ss, tok, ',')) grid.push_back(std::stod(tok));
        return grid;
    }
    std::stringstream ss(spec);
    std::string from_s, to_s, mode, count_s;
    std::getline(ss, from_s, ':');
    std::getline(ss, to_s, ':');
    std::getline(ss, mode, ':');
    std::getline(ss, count_s, ':');
    double from = std::stod(from_s), to = std::stod(to_s);
    int count = std::stoi(count_s);
    if (mode != "log" || count < 1) throw std::invalid_argument("bad --eps spec: " + spec);
    for (int i = 0; i < count; ++i) {
        // endpoints exactly, interior points log spaced
        if (i == 0) {
            grid.push_back(from);
        } else if (i == count - 1) {
            grid.push_back(to);
        } else {
            double t = double(i) / (count - 1);
            grid.push_back(std::exp(std::log(from) + t * (std::log(to) - std::log(from))));
        }
    }
    return grid;
}

ordered vec_to_json(const isoq::Vec& v) {
    ordered a = ordered::array();
    for (int i = 0; i < v.dim(); ++i) a.push_back(v[i]);
    return a;
}

ordered summary_to_json(const isoq::GeometricSummary& s) {
    ordered j;
    j["volume"] = s.volume;
    j["perimeter"] = s.perimeter;
    j["barycenter"] = vec_to_json(s.barycenter);
    j["diameter"] = s.diameter;
    j["method"] = s.method == isoq::Method::exact ? "exact" : "grid";
    ordered e;
    e["volume"] = s.error_bound.volume;
    e["perimeter"] = s.error_bound.perimeter;
    e["barycenter"] = s.error_bound.barycenter;
    e["diameter"] = s.error_bound.diameter;
    j["error_bound"] = e;
    if (s.touching_warning) j["touching_warning"] = true;
    return j;
}

ordered step_to_json(const isoq::SymmetrizationStep& st) {
    ordered j;
    j["axis"] = st.axis + 1;
    switch (st.branch) {
        case isoq::StepBranch::symmetric_fixed_point: j["branch"] = "symmetric_fixed_point"; break;
        case isoq::StepBranch::main: j["branch"] = "main"; break;
        case isoq::StepBranch::epsilon_large: j["branch"] = "epsilon_large"; break;
        case isoq::StepBranch::degenerate: j["branch"] = "degenerate"; break;
    }
    j["epsilon"] = st.split.epsilon;
    j["moment"] = vec_to_json(st.split.moment);
    j["moment_projected"] = vec_to_json(st.split.moment_projected);
    j["eta"] = st.split.eta;
    j["eta_prime"] = st.eta_prime;
    j["eta_dprime"] = st.eta_dprime;
    j["volume_prime"] = st.vol_prime;
    j["volume_dprime"] = st.vol_dprime;
    j["perimeter_prime"] = st.perimeter_prime;
    j["perimeter_dprime"] = st.perimeter_dprime;
    j["lambda0"] = st.lambda0;
    j["lambda0_prime"] = st.lambda0_prime;
    j["lambda0_dprime"] = st.lambda0_dprime;
    j["deficit"] = st.deficit_in;
    j["deficit_prime"] = st.deficit_prime;
    j["deficit_dprime"] = st.deficit_dprime;
    j["chosen"] = st.chose_prime ? "prime" : "dprime";
    j["fraenkel_lambda"] = st.fraenkel_lambda;
    j["fraenkel_center"] = vec_to_json(st.fraenkel_center);
    ordered slacks;
    slacks["eps_vs_sqrt_deficit"] = st.slacks.eps_vs_sqrt_deficit;
    if (st.slacks.eta_sum_bound) slacks["eta_sum_bound"] = *st.slacks.eta_sum_bound;
    if (st.slacks.eta_sandwich_low) slacks["eta_sandwich_low"] = *st.slacks.eta_sandwich_low;
    if (st.slacks.eta_sandwich_high) slacks["eta_sandwich_high"] = *st.slacks.eta_sandwich_high;
    slacks["perimeter_pair_bound"] = st.slacks.perimeter_pair_bound;
    slacks["deficit_split"] = st.slacks.deficit_split;
    if (st.slacks.epsilon_large_bound)
        slacks["epsilon_large_bound"] = *st.slacks.epsilon_large_bound;
    j["slacks"] = slacks;
    if (st.trilem.applicable) {
        ordered t;
        t["sym_diff_fraenkel"] = st.trilem.sym_diff_fraenkel;
        t["sym_diff_matched"] = st.trilem.sym_diff_matched;
        t["bar_distance"] = st.trilem.bar_distance;
        t["d_prime"] = st.trilem.d_prime;
        t["lhs_ok"] = st.trilem.lhs_ok;
        t["rhs_ok"] = st.trilem.rhs_ok;
        t["lhs_slack"] = st.trilem.lhs_slack;
        t["rhs_slack"] = st.trilem.rhs_slack;
        j["nested_triple"] = t;
    }
    if (st.moment_bound.applicable) {
        ordered m;
        m["lhs"] = st.moment_bound.lhs;
        m["q"] = st.moment_bound.q;
        m["eta_over_d"] = st.moment_bound.eta_over_d;
        m["factor7_ok"] = st.moment_bound.factor7_ok;
        m["reciprocal_ok"] = st.moment_bound.reciprocal_ok;
        m["eta_factor7_ok"] = st.moment_bound.eta_factor7_ok;
        m["eta_reciprocal_ok"] = st.moment_bound.eta_reciprocal_ok;
        j["moment_bound"] = m;
    }
    return j;
}

struct CommonFlags {
    std::string output;
    std::string format = "json";
    bool no_timestamp = false;
};

void add_common(CLI::App* cmd, CommonFlags& flags, bool allow_both = false) {
    cmd->add_option("--output", flags.output, "write the report to this path (default stdout)");
    std::vector<std::string> formats{"json", "csv"};
    if (allow_both) formats.push_back("both");
    cmd->add_option("--format", flags.format,
                    allow_both ? "report format: json, csv, or both (both needs --output)"
                               : "report format: json or csv")
        ->check(CLI::IsMember(formats));
    cmd->add_flag("--no-timestamp", flags.no_timestamp,
                  "omit timestamps and timing so reruns compare byte for byte");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"isoperimetric deficit, asymmetry and reflection-symmetrization toolkit"};
    app.require_subcommand(1);

    // measure
    auto* measure_cmd = app.add_subcommand("measure", "geometric summary of a shape file");
    std::string measure_input;
    double measure_grid = 0;
    bool measure_normalized = false;
    CommonFlags measure_flags;
    measure_cmd->add_option("--input", measure_input, "shape document")->required();
    measure_cmd->add_option("--grid", measure_grid, "quadrature spacing override");
    measure_cmd->add_flag("--normalized", measure_normalized,
                          "normalize to unit volume and centered barycenter first");
    add_common(measure_cmd, measure_flags);

    // asymmetry
    auto* asym_cmd = app.add_subcommand("asymmetry", "deficit and asymmetries of a shape file");
    std::string asym_input;
    long asym_budget = 2000;
    int asym_grid_res = 17;
    double asym_tol = 1e-9, asym_grid = 0;
    CommonFlags asym_flags;
    asym_cmd->add_option("--input", asym_input, "shape document")->required();
    asym_cmd->add_option("--budget", asym_budget, "optimizer evaluation budget");
    asym_cmd->add_option("--grid-resolution", asym_grid_res, "coarse scan resolution per axis");
    asym_cmd->add_option("--tolerance", asym_tol, "optimizer convergence tolerance");
    asym_cmd->add_option("--grid", asym_grid, "quadrature spacing override");
    add_common(asym_cmd, asym_flags);

    // symmetrize
    auto* symm_cmd = app.add_subcommand("symmetrize", "full reflection-symmetrization trace");
    std::string symm_input;
    double symm_cf = 0, symm_d = 0, symm_grid = 0;
    long symm_budget = 2000;
    std::string symm_floor = "lower";
    CommonFlags symm_flags;
    symm_cmd->add_option("--input", symm_input, "shape document")->required();
    symm_cmd->add_option("--cf", symm_cf, "quantitative isoperimetric constant")->required();
    symm_cmd->add_option("--d", symm_d, "diameter bound override");
    symm_cmd->add_option("--budget", symm_budget, "optimizer evaluation budget");
    symm_cmd->add_option("--grid", symm_grid, "quadrature spacing override");
    symm_cmd->add_option("--d-floor", symm_floor, "diameter floor: lower (isodiametric) or upper")
        ->check(CLI::IsMember({"lower", "upper"}));
    add_common(symm_cmd, symm_flags);

    // constants
    auto* const_cmd = app.add_subcommand("constants", "evaluate the explicit constants");
    int const_n = 2;
    double const_cf = 0, const_d = 0;
    std::string const_floor = "lower";
    CommonFlags const_flags;
    const_cmd->add_option("--n", const_n, "dimension")->required();
    const_cmd->add_option("--cf", const_cf, "quantitative isoperimetric constant")->required();
    const_cmd->add_option("--d", const_d, "diameter bound (clamped to the floor)");
    const_cmd->add_option("--d-floor", const_floor, "diameter floor: lower (isodiametric) or upper")
        ->check(CLI::IsMember({"lower", "upper"}));
    add_common(const_cmd, const_flags);

    // verify
    auto* verify_cmd = app.add_subcommand("verify", "batch inequality verification on a corpus");
    std::string verify_family = "perturbed_ball";
    int verify_count = 20, verify_n = 2, verify_workers = 1;
    uint64_t verify_seed = 1;
    double verify_cf = 0, verify_grid = 0;
    long verify_budget = 2000;
    CommonFlags verify_flags;
    verify_cmd->add_option("--family", verify_family,
                           "corpus family (perturbed_ball, two_ball, dumbbell, random_polygon, "
                           "k_symmetric_random, all)");
    verify_cmd->add_option("--count", verify_count, "items per family");
    verify_cmd->add_option("--seed", verify_seed, "corpus seed")->required();
    verify_cmd->add_option("--cf", verify_cf, "quantitative isoperimetric constant")->required();
    verify_cmd->add_option("--n", verify_n, "dimension");
    verify_cmd->add_option("--workers", verify_workers, "worker threads");
    verify_cmd->add_option("--budget", verify_budget, "optimizer evaluation budget");
    verify_cmd->add_option("--grid", verify_grid, "quadrature spacing override");
    add_common(verify_cmd, verify_flags, /*allow_both=*/true);

    // sweep
    auto* sweep_cmd = app.add_subcommand("sweep", "diameter sweep of the two-ball family");
    int sweep_n = 2;
    std::string sweep_eps = "1e-1:1e-4:log:8";
    CommonFlags sweep_flags;
    sweep_cmd->add_option("--n", sweep_n, "dimension");
    sweep_cmd->add_option("--eps", sweep_eps, "grid: <from>:<to>:log:<count> or a comma list");
    add_common(sweep_cmd, sweep_flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (measure_cmd->parsed()) {
            isoq::Shape s = isoq::load_shape_file(measure_input);
            if (measure_normalized) s = isoq::normalize(s).shape;
            isoq::MeasureOptions opts;
            if (measure_grid > 0) opts.quadrature_spacing = measure_grid;
            isoq::GeometricSummary sum = isoq::measure(s, opts);
            ordered j = summary_to_json(sum);
            if (!measure_flags.no_timestamp) j["generated_at"] = timestamp_now();
            if (measure_flags.format == "csv") {
                std::ostringstream out;
                out.precision(17);
                out << "volume,perimeter,diameter,method\n"
                    << sum.volume << "," << sum.perimeter << "," << sum.diameter << ","
                    << (sum.method == isoq::Method::exact ? "exact" : "grid") << "\n";
                emit(out.str(), measure_flags.output);
            } else {
                emit(j.dump(2), measure_flags.output);
            }
            return kExitOk;
        }

        if (asym_cmd->parsed()) {
            isoq::Shape s = isoq::load_shape_file(asym_input);
            isoq::OptimizerSettings settings;
            settings.budget = asym_budget;
            settings.coarse_resolution = asym_grid_res;
            settings.tolerance = asym_tol;
            isoq::MeasureOptions opts;
            if (asym_grid > 0) opts.quadrature_spacing = asym_grid;
            isoq::AsymmetryReport rep = isoq::asymmetry_report(s, settings, opts);
            ordered j;
            j["deficit"] = rep.deficit;
            j["lambda0"] = rep.lambda0;
            j["fraenkel"] = rep.fraenkel;
            j["fraenkel_center"] = vec_to_json(rep.fraenkel_center);
            j["epsilon_f"] = rep.epsilon_f;
            j["optimizer_evals"] = rep.optimizer_evals;
            j["budget_exhausted"] = rep.budget_exhausted;
            j["tolerance"] = rep.tolerance;
            if (!asym_flags.no_timestamp) j["generated_at"] = timestamp_now();
            emit(j.dump(2), asym_flags.output);
            return kExitOk;
        }

        if (symm_cmd->parsed()) {
            if (!(symm_cf > 0)) {
                std::cerr << "error: --cf must be positive\n";
                return kExitUsage;
            }
            isoq::Shape s = isoq::load_shape_file(symm_input);
            auto floor_mode = symm_floor == "lower" ? isoq::DiameterFloor::isodiametric
                                                    : isoq::DiameterFloor::alternate;
            double d = symm_d;
            if (d <= 0) {
                double vol = isoq::volume(s);
                d = isoq::diameter(s) / std::pow(vol, 1.0 / s.dim);
            }
            isoq::ConstantsTable table = isoq::make_constants(s.dim, d, symm_cf, floor_mode);
            isoq::OptimizerSettings settings;
            settings.budget = symm_budget;
            isoq::MeasureOptions opts;
            if (symm_grid > 0) opts.quadrature_spacing = symm_grid;
            isoq::SymmetrizationTrace trace = isoq::symmetrize_full(s, table, settings, opts);
            ordered j;
            j["config"] = ordered::parse(isoq::constants_to_json(table));
            ordered steps = ordered::array();
            for (const auto& st : trace.steps) steps.push_back(step_to_json(st));
            j["steps"] = steps;
            j["final_symmetry_defect"] = trace.final_symmetry_defect;
            if (!symm_flags.no_timestamp) j["generated_at"] = timestamp_now();
            emit(j.dump(2), symm_flags.output);
            return kExitOk;
        }

        if (const_cmd->parsed()) {
            if (!(const_cf > 0)) {
                std::cerr << "error: --cf must be positive\n";
                return kExitUsage;
            }
            auto floor_mode = const_floor == "lower" ? isoq::DiameterFloor::isodiametric
                                                     : isoq::DiameterFloor::alternate;
            double d = const_d > 0 ? const_d : isoq::diameter_floor(const_n, floor_mode);
            isoq::ConstantsTable t = isoq::make_constants(const_n, d, const_cf, floor_mode);
            ordered j = ordered::parse(isoq::constants_to_json(t));
            if (!const_flags.no_timestamp) j["generated_at"] = timestamp_now();
            emit(j.dump(2), const_flags.output);
            return kExitOk;
        }

        if (verify_cmd->parsed()) {
            if (!(verify_cf > 0)) {
                std::cerr << "error: --cf must be positive\n";
                return kExitUsage;
            }
            isoq::VerifyRunConfig config;
            config.n = verify_n;
            config.count = verify_count;
            config.seed = verify_seed;
            config.c_f = verify_cf;
            config.workers = verify_workers;
            config.optimizer.budget = verify_budget;
            if (verify_grid > 0) config.measure.quadrature_spacing = verify_grid;
            if (verify_family == "all") {
                config.families = {isoq::Family::perturbed_ball, isoq::Family::two_ball,
                                   isoq::Family::random_polygon, isoq::Family::k_symmetric_random};
                if (verify_n >= 3) config.families.push_back(isoq::Family::dumbbell);
            } else {
                config.families = {isoq::family_from_name(verify_family)};
            }
            isoq::VerifyRunResult result = isoq::run_verification(config);
            isoq::ConstantsTable table =
                isoq::make_constants(config.n, isoq::diameter_floor(config.n), config.c_f);
            auto render_json = [&]() {
                std::string text =
                    isoq::reports_to_json(result, table, !verify_flags.no_timestamp);
                if (!verify_flags.no_timestamp) {
                    ordered j = ordered::parse(text);
                    j["generated_at"] = timestamp_now();
                    text = j.dump(2);
                }
                return text;
            };
            if (verify_flags.format == "both") {
                if (verify_flags.output.empty()) {
                    std::cerr << "error: --format both requires --output\n";
                    return kExitUsage;
                }
                emit(render_json(), verify_flags.output + ".json");
                emit(isoq::reports_to_csv(result), verify_flags.output + ".csv");
            } else if (verify_flags.format == "csv") {
                emit(isoq::reports_to_csv(result), verify_flags.output);
            } else {
                emit(render_json(), verify_flags.output);
            }
            return result.all_passed ? kExitOk : kExitCheckFailed;
        }

        if (sweep_cmd->parsed()) {
            std::vector<double> grid = parse_eps_spec(sweep_eps);
            isoq::SweepResult r = isoq::d_sweep(sweep_n, grid);
            std::string text =
                sweep_flags.format == "csv" ? isoq::sweep_to_csv(r) : isoq::sweep_to_json(r);
            emit(text, sweep_flags.output);
            return kExitOk;
        }
    } catch (const isoq::ShapeParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
