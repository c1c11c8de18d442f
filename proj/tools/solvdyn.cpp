#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "solvdyn/criticality.hpp"
#include "solvdyn/observables.hpp"
#include "solvdyn/pde.hpp"
#include "solvdyn/run_config.hpp"
#include "solvdyn/sde.hpp"
#include "solvdyn/tabular.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace solvdyn;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;
constexpr int kExitComparison = 4;

void print_reason(const std::string& kind, const std::string& reason) {
    json line;
    line["error"] = kind;
    line["reason"] = reason;
    std::cerr << line.dump() << "\n";
}

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

// Optional per-field overrides; values the user passed on the command line
// win over the config file.
struct Overrides {
    std::optional<double> d0, alpha, k, epsilon0, sigma;
    std::optional<double> eps_min, eps_max;
    std::optional<int> n;
    std::optional<double> dt, t_end, theta, tol_mass;
    std::optional<int> stride;
    std::optional<double> delta, fit_lo, fit_hi;
    std::optional<int> max_moment;
    std::optional<double> alpha_min, alpha_max, k_min, k_max, tol_eps, bracket_hi;
    std::optional<int> alpha_points, k_points;
    std::optional<long long> n_traj;
    std::optional<double> dt_sde;
    std::optional<unsigned long long> seed;
};

struct CommonArgs {
    std::string config_path;
    std::string out_dir = ".";
    int workers = 0;
    Overrides over;
};

void add_common_options(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "JSON run configuration file");
    cmd->add_option("--out", args.out_dir, "output directory (created if missing)");
    cmd->add_option("--workers", args.workers, "worker threads (0 = hardware)");

    Overrides& o = args.over;
    cmd->add_option("--d0", o.d0, "baseline diffusivity");
    cmd->add_option("--alpha", o.alpha, "diffusion inhomogeneity strength");
    cmd->add_option("--k", o.k, "restoring strength");
    cmd->add_option("--epsilon0", o.epsilon0, "initial energy-gap center");
    cmd->add_option("--sigma", o.sigma, "initial packet width");
    cmd->add_option("--eps-min", o.eps_min, "domain lower edge");
    cmd->add_option("--eps-max", o.eps_max, "domain upper edge");
    cmd->add_option("--n", o.n, "grid point count (odd)");
    cmd->add_option("--dt", o.dt, "PDE time step");
    cmd->add_option("--t-end", o.t_end, "time horizon");
    cmd->add_option("--theta", o.theta, "implicitness weight in [0.5, 1]");
    cmd->add_option("--stride", o.stride, "steps between snapshots");
    cmd->add_option("--tol-mass", o.tol_mass, "mass-drift tolerance");
    cmd->add_option("--delta", o.delta, "non-monotonicity threshold");
    cmd->add_option("--fit-lo", o.fit_lo, "rate-fit window lower bound");
    cmd->add_option("--fit-hi", o.fit_hi, "rate-fit window upper bound");
    cmd->add_option("--max-moment", o.max_moment, "highest moment order to emit");
    cmd->add_option("--alpha-min", o.alpha_min, "sweep alpha lower bound");
    cmd->add_option("--alpha-max", o.alpha_max, "sweep alpha upper bound");
    cmd->add_option("--alpha-points", o.alpha_points, "sweep alpha point count");
    cmd->add_option("--k-min", o.k_min, "sweep k lower bound");
    cmd->add_option("--k-max", o.k_max, "sweep k upper bound");
    cmd->add_option("--k-points", o.k_points, "sweep k point count");
    cmd->add_option("--tol-eps", o.tol_eps, "bisection tolerance on epsilon0_critical");
    cmd->add_option("--bracket-hi", o.bracket_hi, "upper end of the epsilon0 bracket");
    cmd->add_option("--n-traj", o.n_traj, "ensemble trajectory count");
    cmd->add_option("--dt-sde", o.dt_sde, "SDE step size");
    cmd->add_option("--seed", o.seed, "ensemble seed");
}

RunConfig resolve_config(const CommonArgs& args) {
    RunConfig config;
    if (!args.config_path.empty())
        config = RunConfig::from_json_file(args.config_path);

    const Overrides& o = args.over;
    auto set = [](auto& field, const auto& opt) {
        if (opt)
            field = *opt;
    };
    set(config.physics.d0, o.d0);
    set(config.physics.alpha, o.alpha);
    set(config.physics.k, o.k);
    set(config.physics.epsilon0, o.epsilon0);
    set(config.physics.sigma, o.sigma);
    set(config.grid.eps_min, o.eps_min);
    set(config.grid.eps_max, o.eps_max);
    set(config.grid.n, o.n);
    set(config.solver.dt, o.dt);
    set(config.solver.t_end, o.t_end);
    set(config.solver.theta, o.theta);
    set(config.solver.snapshot_stride, o.stride);
    set(config.solver.tol_mass, o.tol_mass);
    set(config.analysis.delta, o.delta);
    set(config.analysis.fit_lo, o.fit_lo);
    set(config.analysis.fit_hi, o.fit_hi);
    set(config.analysis.max_moment, o.max_moment);
    set(config.sweep.alpha_min, o.alpha_min);
    set(config.sweep.alpha_max, o.alpha_max);
    set(config.sweep.alpha_points, o.alpha_points);
    set(config.sweep.k_min, o.k_min);
    set(config.sweep.k_max, o.k_max);
    set(config.sweep.k_points, o.k_points);
    set(config.sweep.tol_eps, o.tol_eps);
    set(config.sweep.bracket_hi, o.bracket_hi);
    set(config.oracle.n_traj, o.n_traj);
    set(config.oracle.dt_sde, o.dt_sde);
    set(config.oracle.seed, o.seed);
    return config;
}

fs::path prepare_out_dir(const std::string& out_dir) {
    fs::path dir(out_dir);
    fs::create_directories(dir);
    return dir;
}

json classification_to_json(const RelaxationClassification& c) {
    json j;
    j["label"] = c.label == RelaxationLabel::NonMonotonic ? "NonMonotonic" : "Monotonic";
    j["s_max"] = c.s_max;
    j["t_max"] = c.t_max;
    if (c.rate)
        j["rate"] = *c.rate;
    return j;
}

json mass_to_json(const EvolveResult& result) {
    json j;
    j["times"] = result.mass_times;
    j["values"] = result.mass_values;
    j["max_drift"] = result.max_mass_drift;
    j["leak"] = result.mass_leak;
    return j;
}

void write_meta(const fs::path& path, json meta) {
    std::ofstream out(path, std::ios::binary);
    out << meta.dump(2) << "\n";
}

std::vector<double> snapshot_times(const SolverConfig& solver) {
    const long n_steps = std::lround(solver.t_end / solver.dt);
    std::vector<double> times{0.0};
    for (long s = solver.snapshot_stride; s <= n_steps; s += solver.snapshot_stride)
        times.push_back(static_cast<double>(s) * solver.dt);
    if (std::lround(times.back() / solver.dt) != n_steps)
        times.push_back(static_cast<double>(n_steps) * solver.dt);
    return times;
}

struct SolveOutput {
    ObservableSeries s;
    std::vector<ObservableSeries> moments;
    EvolveResult evolution;
};

SolveOutput run_solve(const RunConfig& config) {
    SolveOutput out;
    out.s.kind = ObservableSeries::Kind::SolvationS;
    out.moments.resize(config.analysis.max_moment);
    for (int m = 1; m <= config.analysis.max_moment; ++m) {
        out.moments[m - 1].kind = ObservableSeries::Kind::RawMoment;
        out.moments[m - 1].order = m;
    }
    out.evolution = evolve_streaming(
        config.packet(), config.profile(), config.potential(), config.grid.to_grid(), config.solver,
        [&](const DensityField& field) {
            const double mean = raw_moment(field, 1);
            out.s.times.push_back(field.time);
            out.s.values.push_back(mean / config.physics.epsilon0);
            for (int m = 1; m <= config.analysis.max_moment; ++m) {
                out.moments[m - 1].times.push_back(field.time);
                out.moments[m - 1].values.push_back(m == 1 ? mean : raw_moment(field, m));
            }
        });
    return out;
}

int cmd_solve(const CommonArgs& args) {
    const RunConfig config = resolve_config(args);
    config.validate();
    const fs::path dir = prepare_out_dir(args.out_dir);

    Timer timer;
    SolveOutput out;
    try {
        out = run_solve(config);
    } catch (const SolveFailure& e) {
        print_reason("solver", e.what());
        return kExitSolver;
    }

    write_series_csv((dir / "s_of_t.csv").string(), out.s);
    write_moments_csv((dir / "moments.csv").string(), out.moments);

    json meta;
    meta["config"] = json::parse(config.to_json_text());
    meta["mass"] = mass_to_json(out.evolution);
    try {
        meta["classification"] = classification_to_json(classify_relaxation(
            out.s, config.analysis.delta, 0.0, config.analysis.fit_lo, config.analysis.fit_hi));
    } catch (const Error& e) {
        meta["classification"] = json{{"error", e.what()}};
    }
    meta["wall_seconds"] = timer.seconds();
    meta["outputs"] = {"s_of_t.csv", "moments.csv"};
    write_meta(dir / "solve_meta.json", std::move(meta));
    return 0;
}

int cmd_portrait(const CommonArgs& args) {
    const RunConfig config = resolve_config(args);
    config.validate();
    const fs::path dir = prepare_out_dir(args.out_dir);

    const std::vector<double> alphas =
        linspace(config.sweep.alpha_min, config.sweep.alpha_max, config.sweep.alpha_points);
    const std::vector<double> ks = linspace(config.sweep.k_min, config.sweep.k_max, config.sweep.k_points);

    Timer timer;
    const PhasePortrait portrait = sweep_portrait(alphas, ks, config.criticality(args.workers));
    write_portrait_csv((dir / "portrait.csv").string(), portrait);

    int failed_cells = 0;
    for (const std::string& s : portrait.status)
        if (s != "ok")
            ++failed_cells;

    json meta;
    meta["config"] = json::parse(config.to_json_text());
    meta["cells"] = portrait.critical.size();
    meta["failed_cells"] = failed_cells;
    meta["wall_seconds"] = timer.seconds();
    meta["outputs"] = {"portrait.csv"};
    write_meta(dir / "portrait_meta.json", std::move(meta));

    if (failed_cells == static_cast<int>(portrait.critical.size())) {
        print_reason("solver", "every sweep cell failed");
        return kExitSolver;
    }
    return 0;
}

int cmd_smax_curve(const CommonArgs& args, double eps0_min, double eps0_max, int eps0_points) {
    const RunConfig config = resolve_config(args);
    config.validate();
    if (!(eps0_min > 0.0) || eps0_min > eps0_max || eps0_points < 1)
        throw ConfigError("curve samples must satisfy 0 < eps0-min <= eps0-max and points >= 1");
    const fs::path dir = prepare_out_dir(args.out_dir);

    Timer timer;
    const std::vector<double> samples = linspace(eps0_min, eps0_max, eps0_points);
    const SMaxCurve curve =
        s_max_curve(config.physics.alpha, config.physics.k, samples, config.criticality(args.workers));
    write_smax_csv((dir / "smax_curve.csv").string(), std::span(&curve, 1));

    json meta;
    meta["config"] = json::parse(config.to_json_text());
    meta["wall_seconds"] = timer.seconds();
    meta["outputs"] = {"smax_curve.csv"};
    write_meta(dir / "smax_curve_meta.json", std::move(meta));
    return 0;
}

int cmd_oracle(const CommonArgs& args, const std::string& compare_path, bool flip_spurious) {
    const RunConfig config = resolve_config(args);
    config.validate();
    if (!compare_path.empty() && config.oracle.n_traj < 10000)
        throw ConfigError("comparison runs need oracle.n_traj >= 10000");
    const fs::path dir = prepare_out_dir(args.out_dir);

    EnsembleConfig ensemble;
    ensemble.n_traj = config.oracle.n_traj;
    ensemble.dt_sde = config.oracle.dt_sde;
    ensemble.seed = config.oracle.seed;
    ensemble.workers = args.workers;
    ensemble.tail_bound = config.grid.eps_max;
    ensemble.flip_spurious_drift = flip_spurious;

    std::vector<ObservableSeries> pde_moments;
    if (compare_path.empty()) {
        ensemble.record_times = snapshot_times(config.solver);
    } else {
        pde_moments = read_moments_csv(compare_path);
        if (pde_moments.empty())
            throw ConfigError("comparison file '" + compare_path + "' holds no series");
        ensemble.record_times = pde_moments.front().times;
    }
    ensemble.t_end = ensemble.record_times.back();

    Timer timer;
    const EnsembleResult result =
        simulate_ensemble(config.profile(), config.potential(), config.packet(), ensemble);
    write_oracle_csv((dir / "oracle_moments.csv").string(), result);

    json meta;
    meta["config"] = json::parse(config.to_json_text());
    meta["n_traj"] = ensemble.n_traj;
    meta["seed"] = ensemble.seed;
    meta["max_tail_fraction"] =
        *std::max_element(result.tail_fraction.begin(), result.tail_fraction.end());
    meta["wall_seconds"] = timer.seconds();
    meta["outputs"] = {"oracle_moments.csv"};

    int exit_code = 0;
    if (!compare_path.empty()) {
        const ComparisonReport report = compare_with_pde(pde_moments, result);
        json cmp;
        cmp["max_abs_z"] = report.max_abs_z;
        cmp["fraction_within_3sigma"] = report.fraction_within;
        cmp["pass"] = report.pass;
        meta["comparison"] = cmp;
        if (!report.pass) {
            print_reason("comparison", "PDE and ensemble moments disagree beyond 3 sigma");
            exit_code = kExitComparison;
        }
    }
    write_meta(dir / "oracle_meta.json", std::move(meta));
    return exit_code;
}

// ---- figures ---------------------------------------------------------------

struct FigureRecipe {
    std::string name;
    std::string recipe; // file under --recipes
};

const std::vector<FigureRecipe> kFigures = {
    {"fig1a", "fig1a.json"}, {"fig1c", "fig1c.json"}, {"fig2", "fig2.json"},
    {"fig3", "fig3.json"},   {"fig4", "fig4.json"},   {"fig5-coarse", "fig5-coarse.json"},
};

RunConfig load_recipe(const fs::path& recipes, const FigureRecipe& figure) {
    const fs::path path = recipes / figure.recipe;
    if (!fs::exists(path))
        throw ConfigError("missing figure recipe '" + path.string() + "'");
    RunConfig config = RunConfig::from_json_file(path.string());
    config.validate();
    return config;
}

std::string tag(double value) {
    std::string t = std::to_string(value);
    t.erase(t.find_last_not_of('0') + 1);
    if (!t.empty() && t.back() == '.')
        t.pop_back();
    for (char& c : t)
        if (c == '.')
            c = 'p';
    return t;
}

void run_figure(const std::string& name, const fs::path& recipes, const fs::path& out_root,
                int workers) {
    const auto it = std::find_if(kFigures.begin(), kFigures.end(),
                                 [&](const FigureRecipe& f) { return f.name == name; });
    if (it == kFigures.end())
        throw ConfigError("unknown figure '" + name + "'");
    RunConfig config = load_recipe(recipes, *it);
    const fs::path dir = out_root / name;
    fs::create_directories(dir);

    json meta;
    meta["figure"] = name;
    meta["config"] = json::parse(config.to_json_text());
    Timer timer;

    if (name == "fig1a" || name == "fig1c") {
        const std::vector<double> eps0s =
            name == "fig1a" ? std::vector<double>{1, 2, 3, 4} : std::vector<double>{0.5, 1, 2, 3};
        json runs = json::array();
        for (double e0 : eps0s) {
            RunConfig run = config;
            run.physics.epsilon0 = e0;
            const SolveOutput out = run_solve(run);
            const std::string file = "s_eps0_" + tag(e0) + ".csv";
            write_series_csv((dir / file).string(), out.s);
            json entry;
            entry["epsilon0"] = e0;
            entry["file"] = file;
            entry["mass_max_drift"] = out.evolution.max_mass_drift;
            entry["mass_leak"] = out.evolution.mass_leak;
            try {
                entry["classification"] = classification_to_json(
                    classify_relaxation(out.s, run.analysis.delta, 0.0, run.analysis.fit_lo,
                                        run.analysis.fit_hi));
            } catch (const Error& e) {
                entry["classification"] = json{{"error", e.what()}};
            }
            runs.push_back(entry);
        }
        meta["runs"] = runs;
    } else if (name == "fig2") {
        json runs = json::array();
        for (double alpha : {1.0, 4.0, 7.0, 10.0}) {
            RunConfig run = config;
            run.physics.alpha = alpha;
            const SolveOutput out = run_solve(run);
            const std::string file = "moments_alpha_" + tag(alpha) + ".csv";
            write_moments_csv((dir / file).string(), out.moments);
            runs.push_back(json{{"alpha", alpha}, {"file", file}});
        }
        meta["runs"] = runs;
    } else if (name == "fig3") {
        json runs = json::array();
        for (double alpha : {1.0, 4.0, 7.0, 10.0})
            for (double e0 : {0.2, 0.5, 0.8, 1.3}) {
                RunConfig run = config;
                run.physics.alpha = alpha;
                run.physics.epsilon0 = e0;
                const SolveOutput out = run_solve(run);
                const std::string file = "s_alpha_" + tag(alpha) + "_eps0_" + tag(e0) + ".csv";
                write_series_csv((dir / file).string(), out.s);
                runs.push_back(json{{"alpha", alpha}, {"epsilon0", e0}, {"file", file}});
            }
        meta["runs"] = runs;
    } else if (name == "fig4") {
        std::vector<SMaxCurve> curves;
        const std::vector<double> samples = linspace(0.25, 2.0, 8);
        for (double alpha : {1.0, 3.0, 5.0, 7.0})
            for (double k : {0.0, 0.5, 1.0, 4.0})
                curves.push_back(s_max_curve(alpha, k, samples, config.criticality(workers)));
        write_smax_csv((dir / "smax_curve.csv").string(), curves);
        meta["outputs"] = {"smax_curve.csv"};
    } else if (name == "fig5-coarse") {
        const std::vector<double> alphas =
            linspace(config.sweep.alpha_min, config.sweep.alpha_max, config.sweep.alpha_points);
        const std::vector<double> ks =
            linspace(config.sweep.k_min, config.sweep.k_max, config.sweep.k_points);
        const PhasePortrait portrait = sweep_portrait(alphas, ks, config.criticality(workers));
        write_portrait_csv((dir / "portrait.csv").string(), portrait);
        meta["outputs"] = {"portrait.csv"};
    }

    meta["wall_seconds"] = timer.seconds();
    write_meta(dir / "figure_meta.json", std::move(meta));
}

int cmd_figures(const std::string& recipes, const std::string& out_dir,
                const std::vector<std::string>& only, int workers) {
    const fs::path out_root = prepare_out_dir(out_dir);
    std::vector<std::string> names;
    if (only.empty())
        for (const FigureRecipe& f : kFigures)
            names.push_back(f.name);
    else
        names = only;
    for (const std::string& name : names) {
        std::cout << "running " << name << "...\n";
        run_figure(name, recipes, out_root, workers);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"1-D reaction-coordinate relaxation solver suite: conservative "
                 "Smoluchowski PDE with quadratic position-dependent diffusivity, "
                 "Monte Carlo cross-check, and criticality sweeps"};
    app.require_subcommand(1);

    CommonArgs solve_args, portrait_args, smax_args, oracle_args;

    CLI::App* solve = app.add_subcommand("solve", "evolve one density and emit S(t) + moment CSVs");
    add_common_options(solve, solve_args);

    CLI::App* portrait = app.add_subcommand("portrait", "sweep (alpha, k) and emit the phase portrait");
    add_common_options(portrait, portrait_args);

    CLI::App* smax = app.add_subcommand("smax-curve", "S_Max as a function of the initial gap");
    add_common_options(smax, smax_args);
    double eps0_min = 0.1, eps0_max = 2.0;
    int eps0_points = 20;
    smax->add_option("--eps0-min", eps0_min, "lowest initial gap sample");
    smax->add_option("--eps0-max", eps0_max, "highest initial gap sample");
    smax->add_option("--eps0-points", eps0_points, "sample count");

    CLI::App* oracle = app.add_subcommand("oracle", "Monte Carlo moments, optionally vs a solve run");
    add_common_options(oracle, oracle_args);
    std::string compare_path;
    bool flip_spurious = false;
    oracle->add_option("--compare", compare_path, "moments.csv from a matching solve run");
    oracle->add_flag("--flip-ito-correction", flip_spurious,
                     "negative control: flip the sign of the D'(eps) drift term");

    CLI::App* figures = app.add_subcommand("figures", "run the bundled figure recipes end to end");
    std::string recipes_dir = "configs";
    std::string figures_out = "figures_out";
    std::vector<std::string> only;
    int figures_workers = 0;
    figures->add_option("--recipes", recipes_dir, "directory holding the figure recipe configs");
    figures->add_option("--out", figures_out, "output directory");
    figures->add_option("--only", only, "run only the named figures (repeatable)");
    figures->add_option("--workers", figures_workers, "worker threads (0 = hardware)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve->parsed())
            return cmd_solve(solve_args);
        if (portrait->parsed())
            return cmd_portrait(portrait_args);
        if (smax->parsed())
            return cmd_smax_curve(smax_args, eps0_min, eps0_max, eps0_points);
        if (oracle->parsed())
            return cmd_oracle(oracle_args, compare_path, flip_spurious);
        if (figures->parsed())
            return cmd_figures(recipes_dir, figures_out, only, figures_workers);
    } catch (const ConfigError& e) {
        print_reason("config", e.what());
        return kExitConfig;
    } catch (const Error& e) {
        print_reason("solver", e.what());
        return kExitSolver;
    } catch (const std::exception& e) {
        print_reason("internal", e.what());
        return kExitSolver;
    }
    return 0;
}
