#pragma once

// JSON and CSV serialisation. Output is byte-stable: object keys are sorted,
// floats are written as %.12e and complex numbers as [re, im] pairs.

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "fcs/cp_map.hpp"
#include "fcs/gauge_group.hpp"

namespace fcs::io {

using Json = nlohmann::json;

/// Nested rows; each entry a number or an [re, im] pair. Expected dimensions
/// of -1 are not checked. Throws InputError on malformed input.
Matrix matrix_from_json(const Json& j, Index rows = -1, Index cols = -1);
Json matrix_to_json(const Matrix& m);

/// {"choi": matrix} or {"kraus": [matrix, ...]}. Kraus operators of shape
/// d^2 x d^2 are read in the packed form, d^2 x d as standard operators.
CpMap cp_map_from_json(const Json& j, Index d);
Json cp_map_to_json(const CpMap& e);

/// {"d": int, "generators": [matrix, ...]}; the group is the generated closure.
GaugeGroup gauge_group_from_json(const Json& j, std::size_t max_size = 256);
Json gauge_group_to_json(const GaugeGroup& g);

Json read_json_file(const std::filesystem::path& path);

std::string format_double(double x);
/// Two-space indented dump with sorted keys and %.12e floats.
std::string dump_stable(const Json& j);

/// 64-bit FNV-1a as 16 hex digits.
std::string fnv1a_hex(const std::string& bytes);

struct CsvTable {
    std::string name;  // file stem
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    void add_row(std::vector<std::string> row) { rows.push_back(std::move(row)); }
    std::string render() const;
};

std::string cell(double x);
std::string cell(long long x);
std::string cell(const std::string& s);

void write_text_file(const std::filesystem::path& path, const std::string& contents);

}  // namespace fcs::io
