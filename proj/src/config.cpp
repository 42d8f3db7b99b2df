#include "rydspec/config.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <json.hpp>
#include <set>
#include <sstream>

namespace rydspec {

using nlohmann::json;

std::string to_string(Command c) {
    switch (c) {
        case Command::spectra: return "spectra";
        case Command::spacing: return "spacing";
        case Command::transition: return "transition";
        case Command::locator: return "locator";
        case Command::tabulate_analytic: return "tabulate-analytic";
        case Command::compare: return "compare";
        case Command::merge: return "merge";
    }
    return "?";
}

Command parse_command(const std::string& name) {
    for (Command c : {Command::spectra, Command::spacing, Command::transition, Command::locator,
                      Command::tabulate_analytic, Command::compare, Command::merge})
        if (to_string(c) == name) return c;
    throw ConfigError("command", "unknown command '" + name + "'");
}

namespace {

bool uses_ensemble(Command c) {
    return c == Command::spectra || c == Command::spacing || c == Command::transition;
}

// Typed accessors that report the key on failure.
class Reader {
  public:
    explicit Reader(const json& j) : j_(j) {
        if (!j.is_object()) throw ConfigError("<root>", "config must be a JSON object");
    }

    template <class T>
    void get(const std::string& key, T& out) {
        seen_.insert(key);
        auto it = j_.find(key);
        if (it == j_.end()) return;
        try {
            if constexpr (std::is_unsigned_v<T> && !std::is_same_v<T, bool>) {
                if (!it->is_number_integer() || it->template get<long long>() < 0) throw ConfigError(key, "expected a non-negative integer");
            } else if constexpr (std::is_integral_v<T> && !std::is_same_v<T, bool>) {
                if (!it->is_number_integer()) throw ConfigError(key, "expected an integer");
            } else if constexpr (std::is_floating_point_v<T>) {
                if (!it->is_number()) throw ConfigError(key, "expected a number");
            }
            out = it->template get<T>();
        } catch (const json::exception& e) {
            throw ConfigError(key, std::string("wrong type (") + e.what() + ")");
        }
    }

    bool has(const std::string& key) const { return j_.contains(key); }

    void reject_unknown() const {
        for (auto it = j_.begin(); it != j_.end(); ++it)
            if (!seen_.count(it.key())) throw ConfigError(it.key(), "unknown key");
    }

  private:
    const json& j_;
    std::set<std::string> seen_;
};

void require(bool ok, const std::string& field, const std::string& what) {
    if (!ok) throw ConfigError(field, what);
}

}  // namespace

void RunConfig::validate() const {
    require(schema_version == kSchemaVersion, "schema_version", "expected " + std::to_string(kSchemaVersion));
    if (uses_ensemble(command)) {
        require(realizations >= 1, "realizations", "must be >= 1");
        try {
            ensemble.validate();
        } catch (const std::invalid_argument& e) {
            // EnsembleSpec::validate messages already lead with "ensemble.<field>".
            const std::string msg = e.what();
            const auto colon = msg.find(' ');
            throw ConfigError(msg.substr(0, colon), msg.substr(colon + 1));
        }
    }
    require(workers >= 0, "workers", "must be >= 0");
    require(!output_dir.empty(), "output_dir", "must not be empty");
    require(dos.lin_lo < dos.lin_hi, "dos.lin_hi", "must exceed dos.lin_lo");
    require(dos.lin_bins >= 1, "dos.lin_bins", "must be >= 1");
    require(dos.log_lo > 0.0 && dos.log_lo < dos.log_hi, "dos.log_lo", "need 0 < dos.log_lo < dos.log_hi");
    require(dos.bins_per_decade >= 1, "dos.bins_per_decade", "must be >= 1");
    require(tail_lo > 0.0 && tail_lo < tail_hi, "tail.lo", "need 0 < tail.lo < tail.hi");
    require(spacing.window_lo > 0.0 && spacing.window_lo < spacing.window_hi, "spacing.window_lo",
            "need 0 < spacing.window_lo < spacing.window_hi");
    require(spacing.windows_per_sign >= 1, "spacing.windows_per_sign", "must be >= 1");
    require(spacing.knots_per_decade >= 1, "spacing.knots_per_decade", "must be >= 1");
    require(spacing.binning.s_max > 0.0, "spacing.s_max", "must be > 0");
    require(spacing.binning.bins >= 1, "spacing.bins", "must be >= 1");
    require(spacing.transition.degree >= 1, "transition.degree", "must be >= 1");
    require(spacing.transition.min_windows > spacing.transition.degree, "transition.min_windows",
            "must exceed transition.degree");
    if (command == Command::locator) {
        require(locator_method == "low" || locator_method == "high", "locator.method", "expected 'low' or 'high'");
        require(locator_order == 1 || locator_order == 2, "locator.order", "expected 1 or 2");
        require(ensemble.blockade_radius >= 0.0, "blockade_radius", "must be >= 0");
        if (locator_method == "high") require(ensemble.blockade_radius > 0.0, "blockade_radius", "high-concentration method needs > 0");
        require(locator_half_range >= 0.0, "locator.half_range", "must be >= 0");
        try {
            solver.validate();
        } catch (const std::invalid_argument& e) {
            const std::string msg = e.what();
            const auto colon = msg.find(' ');
            throw ConfigError(msg.substr(0, colon), msg.substr(colon + 1));
        }
        require(solver.f2.directions >= 1, "solver.f2_directions", "must be >= 1");
        require(solver.f2.replicates >= 1, "solver.f2_replicates", "must be >= 1");
        require(solver.high.x_max > 0.0, "solver.k_max_rb", "must be > 0");
        require(solver.high.u_nodes >= 2, "solver.u_nodes", "must be >= 2");
    }
    if (command == Command::tabulate_analytic) {
        static const std::set<std::string> known{"coupling_pdf", "pair_distance_pdf", "spacing_references", "semicircle"};
        require(known.count(table_quantity) == 1, "table.quantity", "unknown quantity '" + table_quantity + "'");
        require(table_points >= 2, "table.points", "must be >= 2");
        require(table_lo <= table_hi, "table.hi", "must be >= table.lo");
        if (table_quantity != "spacing_references") require(ensemble.n_atoms >= 2, "n_atoms", "must be >= 2");
        require(ensemble.blockade_radius >= 0.0, "blockade_radius", "must be >= 0");
        if (table_quantity == "semicircle")
            require(ensemble.blockade_radius > 0.0, "blockade_radius", "semicircle needs > 0 (variance diverges at 0)");
    }
    if (command == Command::compare) require(inputs.size() == 2, "inputs", "compare needs exactly two CSV files");
    if (command == Command::merge) require(!inputs.empty(), "inputs", "merge needs at least one run directory");
}

RunConfig parse_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("<root>", std::string("invalid JSON: ") + e.what());
    }
    Reader r(j);
    RunConfig c;
    require(r.has("schema_version"), "schema_version", "missing");
    r.get("schema_version", c.schema_version);
    std::string command;
    require(r.has("command"), "command", "missing");
    r.get("command", command);
    c.command = parse_command(command);

    std::string kind = "rydberg";
    r.get("ensemble", kind);
    try {
        c.ensemble.kind = parse_ensemble_kind(kind);
    } catch (const std::exception&) {
        throw ConfigError("ensemble", "unknown ensemble '" + kind + "'");
    }
    r.get("n_atoms", c.ensemble.n_atoms);
    r.get("blockade_radius", c.ensemble.blockade_radius);
    if (r.has("goe_sigma")) {
        double s = 0.0;
        r.get("goe_sigma", s);
        c.ensemble.goe_sigma = s;
    } else {
        r.get("goe_sigma", kind);  // mark as seen
    }
    r.get("max_attempts", c.ensemble.max_attempts);
    r.get("realizations", c.realizations);
    r.get("seed", c.seed);
    r.get("first_index", c.first_index);
    r.get("workers", c.workers);
    r.get("output_dir", c.output_dir);
    r.get("save_eigenvalues", c.save_eigenvalues);

    r.get("dos.lin_lo", c.dos.lin_lo);
    r.get("dos.lin_hi", c.dos.lin_hi);
    r.get("dos.lin_bins", c.dos.lin_bins);
    r.get("dos.log_lo", c.dos.log_lo);
    r.get("dos.log_hi", c.dos.log_hi);
    r.get("dos.bins_per_decade", c.dos.bins_per_decade);
    r.get("tail.lo", c.tail_lo);
    r.get("tail.hi", c.tail_hi);

    r.get("spacing.window_lo", c.spacing.window_lo);
    r.get("spacing.window_hi", c.spacing.window_hi);
    r.get("spacing.windows_per_sign", c.spacing.windows_per_sign);
    r.get("spacing.knots_per_decade", c.spacing.knots_per_decade);
    r.get("spacing.s_max", c.spacing.binning.s_max);
    r.get("spacing.bins", c.spacing.binning.bins);
    r.get("transition.min_windows", c.spacing.transition.min_windows);
    r.get("transition.min_spacings", c.spacing.transition.min_spacings);
    r.get("transition.degree", c.spacing.transition.degree);

    r.get("locator.method", c.locator_method);
    r.get("locator.order", c.locator_order);
    r.get("locator.half_range", c.locator_half_range);
    r.get("locator.grid", c.locator_grid);
    r.get("solver.epsilon_schedule", c.solver.epsilon_schedule);
    r.get("solver.residual_tolerance", c.solver.residual_tolerance);
    r.get("solver.stability_tolerance", c.solver.stability_tolerance);
    r.get("solver.population", c.solver.cmaes.population);
    r.get("solver.max_iterations", c.solver.cmaes.max_iterations);
    r.get("solver.f2_directions", c.solver.f2.directions);
    r.get("solver.f2_replicates", c.solver.f2.replicates);
    r.get("solver.k_max_rb", c.solver.high.x_max);
    r.get("solver.u_nodes", c.solver.high.u_nodes);

    r.get("table.quantity", c.table_quantity);
    r.get("table.lo", c.table_lo);
    r.get("table.hi", c.table_hi);
    r.get("table.points", c.table_points);

    r.get("inputs", c.inputs);
    r.reject_unknown();
    c.validate();
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("--config", "cannot read '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

namespace {

json to_json(const RunConfig& c, bool with_plumbing) {
    json j;
    j["schema_version"] = c.schema_version;
    j["command"] = to_string(c.command);
    j["ensemble"] = std::string(to_string(c.ensemble.kind));
    j["n_atoms"] = c.ensemble.n_atoms;
    j["blockade_radius"] = c.ensemble.blockade_radius;
    if (c.ensemble.goe_sigma) j["goe_sigma"] = *c.ensemble.goe_sigma;
    j["max_attempts"] = c.ensemble.max_attempts;
    j["realizations"] = c.realizations;
    j["seed"] = c.seed;
    j["first_index"] = c.first_index;
    j["dos.lin_lo"] = c.dos.lin_lo;
    j["dos.lin_hi"] = c.dos.lin_hi;
    j["dos.lin_bins"] = c.dos.lin_bins;
    j["dos.log_lo"] = c.dos.log_lo;
    j["dos.log_hi"] = c.dos.log_hi;
    j["dos.bins_per_decade"] = c.dos.bins_per_decade;
    j["tail.lo"] = c.tail_lo;
    j["tail.hi"] = c.tail_hi;
    j["spacing.window_lo"] = c.spacing.window_lo;
    j["spacing.window_hi"] = c.spacing.window_hi;
    j["spacing.windows_per_sign"] = c.spacing.windows_per_sign;
    j["spacing.knots_per_decade"] = c.spacing.knots_per_decade;
    j["spacing.s_max"] = c.spacing.binning.s_max;
    j["spacing.bins"] = c.spacing.binning.bins;
    j["transition.min_windows"] = c.spacing.transition.min_windows;
    j["transition.min_spacings"] = c.spacing.transition.min_spacings;
    j["transition.degree"] = c.spacing.transition.degree;
    j["locator.method"] = c.locator_method;
    j["locator.order"] = c.locator_order;
    j["locator.half_range"] = c.locator_half_range;
    j["locator.grid"] = c.locator_grid;
    j["solver.epsilon_schedule"] = c.solver.epsilon_schedule;
    j["solver.residual_tolerance"] = c.solver.residual_tolerance;
    j["solver.stability_tolerance"] = c.solver.stability_tolerance;
    j["solver.population"] = c.solver.cmaes.population;
    j["solver.max_iterations"] = c.solver.cmaes.max_iterations;
    j["solver.f2_directions"] = c.solver.f2.directions;
    j["solver.f2_replicates"] = c.solver.f2.replicates;
    j["solver.k_max_rb"] = c.solver.high.x_max;
    j["solver.u_nodes"] = c.solver.high.u_nodes;
    j["table.quantity"] = c.table_quantity;
    j["table.lo"] = c.table_lo;
    j["table.hi"] = c.table_hi;
    j["table.points"] = c.table_points;
    j["inputs"] = c.inputs;
    if (with_plumbing) {
        j["workers"] = c.workers;
        j["output_dir"] = c.output_dir;
        j["save_eigenvalues"] = c.save_eigenvalues;
    }
    return j;
}

}  // namespace

std::string dump_config(const RunConfig& config) { return to_json(config, true).dump(2); }

std::string config_hash(const RunConfig& config) {
    // FNV-1a over the canonical dump; keys are sorted by the JSON library.
    const std::string text = to_json(config, false).dump();
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001b3ull;
    }
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << h;
    return os.str();
}

std::map<std::string, std::string> physics_params(const RunConfig& c) {
    auto num = [](double x) {
        std::ostringstream os;
        os << std::setprecision(12) << x;
        return os.str();
    };
    std::map<std::string, std::string> p;
    p["blockade_radius"] = num(c.ensemble.blockade_radius);
    if (uses_ensemble(c.command) || c.command == Command::tabulate_analytic) {
        if (c.command != Command::tabulate_analytic) p["ensemble"] = std::string(to_string(c.ensemble.kind));
        if (c.ensemble.n_atoms > 0) p["n_atoms"] = std::to_string(c.ensemble.n_atoms);
        if (c.ensemble.kind == EnsembleKind::goe && uses_ensemble(c.command) && c.ensemble.goe_sigma)
            p["goe_sigma"] = num(*c.ensemble.goe_sigma);
    }
    return p;
}

}  // namespace rydspec
