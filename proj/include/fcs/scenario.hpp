#pragma once

// Scenario configuration, the staged pipeline and report emission.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "fcs/io.hpp"
#include "fcs/markov_extension.hpp"

namespace fcs {

struct ScenarioConfig {
    std::string name;
    Index d = 0;
    io::Json map;                        // {"choi": ...} or {"kraus": [...]}
    std::optional<Matrix> rho;           // nullopt: solve for the invariant state
    std::vector<Matrix> generators;      // gauge group generators; empty: trivial group
    Index n_max = 4;
    Index k_max = 2;
    std::vector<Index> bound_n;          // volumes for the lower-bound functional
    Index chain_length = 0;              // length of the exported distribution (0: n_max)
    std::optional<Matrix> projection_basis;  // columns p_a
    Tolerances tol;
    std::uint64_t word_cap = kDefaultWordCap;
    Index max_dim = kDefaultMaxDim;
    std::filesystem::path output_dir = "fcs_report";
    std::vector<std::string> formats{"json", "csv", "markdown"};
    std::string hash;                    // FNV-1a of the canonical config JSON
};

/// Validates against the shipped schema (unknown keys, types, ranges, d
/// consistency) and throws InputError on the first violation.
ScenarioConfig parse_scenario(const io::Json& j);
ScenarioConfig load_scenario(const std::filesystem::path& path);

enum class Stage { Validate, Entropy, Gauge, Extend, Bounds, Report };

Stage stage_from_string(const std::string& s);
std::string to_string(Stage s);

struct RunOptions {
    Stage stage = Stage::Report;
    bool bits = false;
    std::optional<Index> max_dim;  // overrides the config
};

/// An inequality stated in the report together with its residual
/// (rhs - lhs; non-negative when it holds).
struct Inequality {
    std::string name;
    std::string statement;
    double lhs = 0.0;
    double rhs = 0.0;
    double residual = 0.0;
    bool holds = true;
    bool asserted = true;  // false: observed property, reported only
};

struct Report {
    std::string scenario;
    Stage stage = Stage::Report;
    io::Json data;
    std::vector<io::CsvTable> tables;
    std::vector<Inequality> inequalities;
    std::vector<std::string> warnings;

    bool all_asserted_hold() const;
};

/// Runs validate followed by the stages implied by opt.stage. Validation
/// failures raise NotCpError or InputError; caps raise ResourceError.
Report run_scenario(const ScenarioConfig& config, const RunOptions& opt = {});

/// Writes report.json, one CSV per table and report.md as requested.
/// Returns the written paths in order.
std::vector<std::filesystem::path> emit_report(const Report& r, const std::filesystem::path& dir,
                                               const std::vector<std::string>& formats);

std::string render_json(const Report& r);
std::string render_markdown(const Report& r);

/// 0 success, 2 validation failure, 3 resource cap, 1 anything else.
int exit_code_for(const std::exception& e);

}  // namespace fcs
