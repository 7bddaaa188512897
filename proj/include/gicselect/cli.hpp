#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace gicselect {

enum class ExitCode : int { Ok = 0, Usage = 1, Computation = 2 };

class UsageError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

struct RunConfig
{
    std::string command;  // fit | path | select | simulate | diagnose | profile
    std::string family = "gaussian";
    std::string penalty = "scad";
    std::vector<std::string> penalties{"scad"};
    std::string criteria = "gic_lll";
    std::string phi = "known:1";
    std::filesystem::path data;
    std::filesystem::path response;
    std::filesystem::path scores;
    std::filesystem::path labels;
    std::filesystem::path out_dir = ".";
    std::string format;          // csv | tsv; empty infers from the extension
    bool header = false;
    bool intercept = false;
    bool precision = false;
    std::optional<double> lambda;
    int grid = 200;
    int reps = 100;
    std::uint64_t seed = 0;
    std::vector<int> n_grid{100, 140, 180, 220, 260, 300, 340, 380, 420, 460, 500};
    std::string model = "linear";
    int threads = 0;             // 0: GICSELECT_THREADS, then hardware concurrency
    double scad_a = 3.7;
    double mcp_gamma = 3.0;
};

// Checks every option; throws UsageError before any computation.
void validate(const RunConfig& config);

// Executes a validated configuration, writing artifacts under config.out_dir.
ExitCode run(const RunConfig& config, std::ostream& out);

// Parses argv and runs; prints usage errors to err.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gicselect
