#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "rydspec/campaign.hpp"
#include "rydspec/config.hpp"

namespace rydspec {

// Ordered key=value summary, written as summary.txt.
struct RunSummary {
    std::map<std::string, std::string> entries;
    std::vector<std::string> warnings;

    const std::string& at(const std::string& key) const { return entries.at(key); }
    std::string text() const;
};

class MergeMismatch : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

class CompareMismatch : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

// Executes one command and writes its artifacts under config.output_dir.
RunSummary run(const RunConfig& config);

// Merges finished ensemble runs (directories holding config.json and
// eigenvalues.bin) and re-derives every statistic from the union.
RunSummary merge_runs(const std::vector<std::string>& run_dirs, const std::string& output_dir);

// Raw spectra as written next to each ensemble run.
void write_spectra(const std::filesystem::path& path, const EnsembleRun& run);
EnsembleRun read_spectra(const std::filesystem::path& path);

// A CSV written by this tool: "# key=value ..." comment lines, then a header.
struct CsvTable {
    std::map<std::string, std::string> meta;
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    std::size_t column(const std::string& name) const;
};
CsvTable read_csv(const std::filesystem::path& path);

}  // namespace rydspec
