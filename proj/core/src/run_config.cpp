#include "solvdyn/run_config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace solvdyn {

namespace {

using nlohmann::json;

// Pulls known keys out of a section object and rejects everything else, so a
// typo in a config file fails loudly instead of silently using a default.
class SectionReader {
public:
    SectionReader(const json& j, std::string section) : obj_(j), section_(std::move(section)) {
        if (!obj_.is_object())
            throw ConfigError("section '" + section_ + "' must be an object");
        for (auto it = obj_.begin(); it != obj_.end(); ++it)
            unseen_.push_back(it.key());
    }

    template <typename T>
    void get(const char* key, T& out) {
        if (!obj_.contains(key))
            return;
        try {
            out = obj_.at(key).get<T>();
        } catch (const json::exception&) {
            throw ConfigError("bad value for '" + section_ + "." + key + "'");
        }
        std::erase(unseen_, key);
    }

    void finish() const {
        if (!unseen_.empty())
            throw ConfigError("unknown key '" + section_ + "." + unseen_.front() + "'");
    }

private:
    const json& obj_;
    std::string section_;
    std::vector<std::string> unseen_;
};

json physics_to_json(const PhysicsConfig& c) {
    return {{"d0", c.d0}, {"alpha", c.alpha}, {"k", c.k}, {"epsilon0", c.epsilon0}, {"sigma", c.sigma}};
}

json grid_to_json(const GridConfig& c) {
    return {{"eps_min", c.eps_min}, {"eps_max", c.eps_max}, {"n", c.n}};
}

json solver_to_json(const SolverConfig& c) {
    return {{"dt", c.dt},
            {"t_end", c.t_end},
            {"theta", c.theta},
            {"snapshot_stride", c.snapshot_stride},
            {"tol_mass", c.tol_mass}};
}

json analysis_to_json(const AnalysisConfig& c) {
    return {{"delta", c.delta}, {"fit_lo", c.fit_lo}, {"fit_hi", c.fit_hi}, {"max_moment", c.max_moment}};
}

json sweep_to_json(const SweepRangeConfig& c) {
    return {{"alpha_min", c.alpha_min}, {"alpha_max", c.alpha_max}, {"alpha_points", c.alpha_points},
            {"k_min", c.k_min},         {"k_max", c.k_max},         {"k_points", c.k_points},
            {"tol_eps", c.tol_eps},     {"bracket_hi", c.bracket_hi}};
}

json oracle_to_json(const OracleConfig& c) {
    return {{"n_traj", c.n_traj}, {"dt_sde", c.dt_sde}, {"seed", c.seed}};
}

} // namespace

void RunConfig::validate() const {
    if (!(physics.d0 > 0.0))
        throw ConfigError("physics.d0 must be > 0");
    if (!(physics.alpha >= 0.0))
        throw ConfigError("physics.alpha must be >= 0");
    if (!(physics.k >= 0.0))
        throw ConfigError("physics.k must be >= 0");
    if (!(physics.epsilon0 > 0.0))
        throw ConfigError("physics.epsilon0 must be > 0");
    if (!(physics.sigma > 0.0))
        throw ConfigError("physics.sigma must be > 0");

    if (grid.n < 51)
        throw ConfigError("grid too coarse");
    if (grid.n % 2 == 0)
        throw ConfigError("grid point count must be odd");
    if (!(grid.eps_min < 0.0 && 0.0 < grid.eps_max))
        throw ConfigError("grid must straddle eps = 0");

    solver.validate();

    if (grid.eps_max - physics.epsilon0 < 6.0 * physics.sigma
        || physics.epsilon0 - grid.eps_min < 6.0 * physics.sigma)
        throw ConfigError("packet too close to the domain edge");

    if (!(analysis.delta > 0.0))
        throw ConfigError("analysis.delta must be > 0");
    if (!(0.0 < analysis.fit_lo && analysis.fit_lo < analysis.fit_hi && analysis.fit_hi < 1.0))
        throw ConfigError("analysis fit window must satisfy 0 < fit_lo < fit_hi < 1");
    if (analysis.max_moment < 1)
        throw ConfigError("analysis.max_moment must be >= 1");

    if (sweep.alpha_points < 1 || sweep.k_points < 1)
        throw ConfigError("sweep needs at least one point per axis");
    if (!(sweep.alpha_min >= 0.0) || sweep.alpha_min > sweep.alpha_max)
        throw ConfigError("sweep alpha range must satisfy 0 <= alpha_min <= alpha_max");
    if (!(sweep.k_min >= 0.0) || sweep.k_min > sweep.k_max)
        throw ConfigError("sweep k range must satisfy 0 <= k_min <= k_max");
    if (!(sweep.tol_eps > 0.0))
        throw ConfigError("sweep.tol_eps must be > 0");
    if (!(sweep.bracket_hi > 0.0))
        throw ConfigError("sweep.bracket_hi must be > 0");

    if (oracle.n_traj < 2)
        throw ConfigError("oracle.n_traj must be >= 2");
    if (!(oracle.dt_sde > 0.0))
        throw ConfigError("oracle.dt_sde must be > 0");
    if (oracle.dt_sde > solver.dt * (1.0 + 1e-12))
        throw ConfigError("oracle.dt_sde must not exceed solver.dt");
}

CriticalityConfig RunConfig::criticality(int workers) const {
    CriticalityConfig c;
    c.d0 = physics.d0;
    c.sigma = physics.sigma;
    c.grid = grid.to_grid();
    c.solver = solver;
    c.delta = analysis.delta;
    c.fit_lo = analysis.fit_lo;
    c.fit_hi = analysis.fit_hi;
    c.tol_eps = sweep.tol_eps;
    c.bracket_hi = sweep.bracket_hi;
    c.workers = workers;
    return c;
}

std::string RunConfig::to_json_text() const {
    json j;
    j["physics"] = physics_to_json(physics);
    j["grid"] = grid_to_json(grid);
    j["solver"] = solver_to_json(solver);
    j["analysis"] = analysis_to_json(analysis);
    j["sweep"] = sweep_to_json(sweep);
    j["oracle"] = oracle_to_json(oracle);
    return j.dump(2) + "\n";
}

RunConfig RunConfig::from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object())
        throw ConfigError("config root must be an object");

    RunConfig config;
    std::vector<std::string> sections;
    for (auto it = j.begin(); it != j.end(); ++it)
        sections.push_back(it.key());

    auto take_section = [&](const char* name) -> const json* {
        std::erase(sections, name);
        return j.contains(name) ? &j.at(name) : nullptr;
    };

    if (const json* s = take_section("physics")) {
        SectionReader r(*s, "physics");
        r.get("d0", config.physics.d0);
        r.get("alpha", config.physics.alpha);
        r.get("k", config.physics.k);
        r.get("epsilon0", config.physics.epsilon0);
        r.get("sigma", config.physics.sigma);
        r.finish();
    }
    if (const json* s = take_section("grid")) {
        SectionReader r(*s, "grid");
        r.get("eps_min", config.grid.eps_min);
        r.get("eps_max", config.grid.eps_max);
        r.get("n", config.grid.n);
        r.finish();
    }
    if (const json* s = take_section("solver")) {
        SectionReader r(*s, "solver");
        r.get("dt", config.solver.dt);
        r.get("t_end", config.solver.t_end);
        r.get("theta", config.solver.theta);
        r.get("snapshot_stride", config.solver.snapshot_stride);
        r.get("tol_mass", config.solver.tol_mass);
        r.finish();
    }
    if (const json* s = take_section("analysis")) {
        SectionReader r(*s, "analysis");
        r.get("delta", config.analysis.delta);
        r.get("fit_lo", config.analysis.fit_lo);
        r.get("fit_hi", config.analysis.fit_hi);
        r.get("max_moment", config.analysis.max_moment);
        r.finish();
    }
    if (const json* s = take_section("sweep")) {
        SectionReader r(*s, "sweep");
        r.get("alpha_min", config.sweep.alpha_min);
        r.get("alpha_max", config.sweep.alpha_max);
        r.get("alpha_points", config.sweep.alpha_points);
        r.get("k_min", config.sweep.k_min);
        r.get("k_max", config.sweep.k_max);
        r.get("k_points", config.sweep.k_points);
        r.get("tol_eps", config.sweep.tol_eps);
        r.get("bracket_hi", config.sweep.bracket_hi);
        r.finish();
    }
    if (const json* s = take_section("oracle")) {
        SectionReader r(*s, "oracle");
        r.get("n_traj", config.oracle.n_traj);
        r.get("dt_sde", config.oracle.dt_sde);
        r.get("seed", config.oracle.seed);
        r.finish();
    }
    if (!sections.empty())
        throw ConfigError("unknown section '" + sections.front() + "'");
    return config;
}

RunConfig RunConfig::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream text;
    text << in.rdbuf();
    return from_json_text(text.str());
}

void RunConfig::save_json_file(const std::string& path) const {
    std::ofstream out(path);
    if (!out)
        throw ConfigError("cannot write config file '" + path + "'");
    out << to_json_text();
}

} // namespace solvdyn
