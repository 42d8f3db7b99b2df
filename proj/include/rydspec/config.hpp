#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "rydspec/campaign.hpp"
#include "rydspec/ensembles.hpp"
#include "rydspec/locator.hpp"
#include "rydspec/spectra.hpp"

namespace rydspec {

inline constexpr int kSchemaVersion = 1;

// Validation failure; the message starts with the offending field path.
class ConfigError : public std::invalid_argument {
  public:
    ConfigError(const std::string& field, const std::string& what)
        : std::invalid_argument(field + ": " + what), field_(field) {}
    const std::string& field() const { return field_; }

  private:
    std::string field_;
};

enum class Command { spectra, spacing, transition, locator, tabulate_analytic, compare, merge };

std::string to_string(Command c);
Command parse_command(const std::string& name);

// A flat, versioned document. Grouped settings use dotted keys such as
// "solver.epsilon_schedule"; unknown keys are rejected.
struct RunConfig {
    int schema_version = kSchemaVersion;
    Command command = Command::spectra;

    EnsembleSpec ensemble;
    std::size_t realizations = 1;
    std::uint64_t seed = 1;
    std::size_t first_index = 0;  // shard offset into the realization sequence
    int workers = 0;              // 0: all available threads
    std::string output_dir = "out";
    bool save_eigenvalues = true;

    DosBinning dos;
    double tail_lo = 31.622776601683793;  // 10^1.5
    double tail_hi = 1e3;
    SpacingOptions spacing;

    std::string locator_method = "low";  // low | high
    int locator_order = 1;
    double locator_half_range = 0.0;     // 0: default per r_b
    std::vector<double> locator_grid;    // overrides the default grid
    SolverSettings solver;

    std::string table_quantity = "coupling_pdf";  // coupling_pdf | pair_distance_pdf | spacing_references | semicircle
    double table_lo = 0.0;
    double table_hi = 0.0;  // lo == hi: default range for the quantity
    std::size_t table_points = 2001;

    std::vector<std::string> inputs;  // compare: two CSV files; merge: run directories

    // Throws ConfigError naming the field.
    void validate() const;
};

RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);
// Canonical flat JSON text of the config.
std::string dump_config(const RunConfig& config);

// Hex digest over every field that affects published numbers (output
// location and worker count excluded).
std::string config_hash(const RunConfig& config);

// Physical parameters stamped on output files, e.g. "ensemble=rydberg n_atoms=1000 blockade_radius=0.5".
std::map<std::string, std::string> physics_params(const RunConfig& config);

}  // namespace rydspec
