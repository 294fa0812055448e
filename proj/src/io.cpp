#include "fcs/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace fcs::io {

namespace {

Complex entry_from_json(const Json& e) {
    if (e.is_number()) return {e.get<double>(), 0.0};
    if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number())
        return {e[0].get<double>(), e[1].get<double>()};
    throw InputError("matrix entry must be a number or an [re, im] pair");
}

void dump_value(const Json& j, std::ostringstream& os, int indent) {
    const std::string pad(static_cast<std::size_t>(indent + 2), ' ');
    const std::string close(static_cast<std::size_t>(indent), ' ');
    switch (j.type()) {
        case Json::value_t::object: {
            if (j.empty()) {
                os << "{}";
                return;
            }
            os << "{\n";
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) os << ",\n";
                first = false;
                os << pad << Json(it.key()).dump() << ": ";
                dump_value(it.value(), os, indent + 2);
            }
            os << "\n" << close << "}";
            return;
        }
        case Json::value_t::array: {
            if (j.empty()) {
                os << "[]";
                return;
            }
            // Arrays of scalars stay on one line.
            bool flat = true;
            for (const Json& e : j) flat = flat && !e.is_structured();
            if (flat) {
                os << "[";
                for (std::size_t i = 0; i < j.size(); ++i) {
                    if (i) os << ", ";
                    dump_value(j[i], os, indent);
                }
                os << "]";
                return;
            }
            os << "[\n";
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i) os << ",\n";
                os << pad;
                dump_value(j[i], os, indent + 2);
            }
            os << "\n" << close << "]";
            return;
        }
        case Json::value_t::number_float:
            os << format_double(j.get<double>());
            return;
        default:
            os << j.dump();
    }
}

}  // namespace

Matrix matrix_from_json(const Json& j, Index rows, Index cols) {
    if (!j.is_array() || j.empty()) throw InputError("matrix must be a non-empty array of rows");
    const auto r = static_cast<Index>(j.size());
    if (!j[0].is_array() || j[0].empty()) throw InputError("matrix rows must be non-empty arrays");
    const auto c = static_cast<Index>(j[0].size());
    if ((rows >= 0 && r != rows) || (cols >= 0 && c != cols)) {
        std::ostringstream os;
        os << "matrix has shape " << r << "x" << c << ", expected " << rows << "x" << cols;
        throw InputError(os.str());
    }
    Matrix m(r, c);
    for (Index i = 0; i < r; ++i) {
        const Json& row = j[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<Index>(row.size()) != c) throw InputError("matrix rows have unequal length");
        for (Index k = 0; k < c; ++k) m(i, k) = entry_from_json(row[static_cast<std::size_t>(k)]);
    }
    return m;
}

Json matrix_to_json(const Matrix& m) {
    Json rows = Json::array();
    for (Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Index k = 0; k < m.cols(); ++k) row.push_back(Json::array({m(i, k).real(), m(i, k).imag()}));
        rows.push_back(std::move(row));
    }
    return rows;
}

CpMap cp_map_from_json(const Json& j, Index d) {
    if (!j.is_object()) throw InputError("map must be an object with a \"choi\" or \"kraus\" field");
    const Index d2 = d * d;
    if (j.contains("choi")) return CpMap(d, matrix_from_json(j.at("choi"), d2 * d, d2 * d));
    if (!j.contains("kraus")) throw InputError("map needs a \"choi\" or \"kraus\" field");
    const Json& ks = j.at("kraus");
    if (!ks.is_array() || ks.empty()) throw InputError("\"kraus\" must be a non-empty list of matrices");
    std::vector<Matrix> ops;
    for (const Json& k : ks) ops.push_back(matrix_from_json(k));
    const Index cols = ops.front().cols();
    for (const Matrix& k : ops)
        if (k.rows() != d2 || k.cols() != cols) throw InputError("Kraus operators must all be d^2 x d^2 or all d^2 x d");
    if (cols == d) return choi_from_standard_kraus(d, ops);
    if (cols != d2) throw InputError("Kraus operators must be d^2 x d^2 or d^2 x d");
    KrausPacked pf;
    pf.d = d;
    pf.kraus = std::move(ops);
    return choi_from_kraus(pf);
}

Json cp_map_to_json(const CpMap& e) { return Json{{"choi", matrix_to_json(e.choi())}}; }

GaugeGroup gauge_group_from_json(const Json& j, std::size_t max_size) {
    if (!j.is_object() || !j.contains("d")) throw InputError("gauge group needs \"d\" and \"generators\"");
    const Index d = j.at("d").get<Index>();
    if (d < 1) throw InputError("gauge group dimension must be positive");
    std::vector<Matrix> gens;
    if (j.contains("generators"))
        for (const Json& g : j.at("generators")) gens.push_back(matrix_from_json(g, d, d));
    return group_closure(d, gens, max_size);
}

Json gauge_group_to_json(const GaugeGroup& g) {
    Json gens = Json::array();
    for (const Matrix& m : g.generators) gens.push_back(matrix_to_json(m));
    return Json{{"d", g.d()}, {"generators", gens}, {"order", g.size()}};
}

Json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path.string());
    try {
        return Json::parse(in);
    } catch (const Json::exception& e) {
        throw InputError(path.string() + ": " + e.what());
    }
}

std::string format_double(double x) {
    if (std::isnan(x)) return "\"nan\"";
    if (std::isinf(x)) return x > 0 ? "\"inf\"" : "\"-inf\"";
    if (x == 0.0) x = 0.0;  // no negative zero
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12e", x);
    return buf;
}

std::string dump_stable(const Json& j) {
    std::ostringstream os;
    dump_value(j, os, 0);
    os << "\n";
    return os.str();
}

std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string CsvTable::render() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
    os << "\n";
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
        os << "\n";
    }
    return os.str();
}

std::string cell(double x) {
    std::string s = format_double(x);
    if (!s.empty() && s.front() == '"') s = s.substr(1, s.size() - 2);
    return s;
}

std::string cell(long long x) { return std::to_string(x); }

std::string cell(const std::string& s) { return s; }

void write_text_file(const std::filesystem::path& path, const std::string& contents) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << contents;
    if (!out) throw Error("write failed for " + path.string());
}

}  // namespace fcs::io
