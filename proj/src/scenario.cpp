#include "fcs/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#ifndef FCS_VERSION
#define FCS_VERSION "0.0.0"
#endif

namespace fcs {

namespace {

using io::Json;

void require(bool ok, const std::string& what) {
    if (!ok) throw InputError("config: " + what);
}

void check_keys(const Json& j, const std::set<std::string>& allowed, const std::string& where) {
    require(j.is_object(), where + " must be an object");
    for (auto it = j.begin(); it != j.end(); ++it)
        require(allowed.count(it.key()) > 0, "unknown key \"" + it.key() + "\" in " + where);
}

Index positive_int(const Json& j, const std::string& key) {
    require(j.is_number_integer() && j.get<long long>() >= 1, "\"" + key + "\" must be a positive integer");
    return j.get<Index>();
}

double positive_number(const Json& j, const std::string& key) {
    require(j.is_number() && j.get<double>() > 0.0, "\"" + key + "\" must be a positive number");
    return j.get<double>();
}

Index power(Index d, Index n) {
    Index out = 1;
    for (Index k = 0; k < n; ++k) out *= d;
    return out;
}

void check_dim(Index d, Index n, Index max_dim, const std::string& what) {
    if (static_cast<double>(n) * std::log(static_cast<double>(d)) > std::log(static_cast<double>(max_dim)) + 1e-12) {
        std::ostringstream os;
        os << what << ": dimension " << d << "^" << n << " exceeds the cap " << max_dim;
        throw ResourceError(os.str());
    }
}

bool runs(Stage stage, std::initializer_list<Stage> set) {
    return std::find(set.begin(), set.end(), stage) != set.end();
}

class Builder {
public:
    Builder(Report& r, double unit) : r_(r), unit_(unit) {}

    // holds is decided in nats; the stored numbers are scaled when entropic.
    void add(const std::string& name, const std::string& statement, double lhs, double rhs, bool entropic,
             bool asserted = true) {
        const double s = entropic ? unit_ : 1.0;
        Inequality q{name, statement, lhs * s, rhs * s, (rhs - lhs) * s, lhs <= rhs, asserted};
        r_.inequalities.push_back(q);
    }

    double e(double nats) const { return nats * unit_; }

private:
    Report& r_;
    double unit_;
};

Json inequality_json(const Inequality& q) {
    return Json{{"name", q.name}, {"statement", q.statement}, {"lhs", q.lhs}, {"rhs", q.rhs},
                {"residual", q.residual}, {"holds", q.holds}, {"asserted", q.asserted}};
}

}  // namespace

ScenarioConfig parse_scenario(const Json& j) {
    check_keys(j,
               {"name", "d", "map", "rho", "group", "n_max", "k_max", "bounds", "chain_length", "projection_basis",
                "tolerances", "word_cap", "max_dim", "output"},
               "scenario");
    ScenarioConfig c;
    require(j.contains("d") && j.contains("map") && j.contains("rho"), "\"d\", \"map\" and \"rho\" are required");
    c.hash = io::fnv1a_hex(j.dump());
    c.name = j.value("name", std::string("scenario"));
    c.d = positive_int(j.at("d"), "d");
    c.map = j.at("map");
    check_keys(c.map, {"choi", "kraus"}, "map");
    (void)io::cp_map_from_json(c.map, c.d);  // shape and Hermiticity

    const Json& rho = j.at("rho");
    if (rho.is_string()) {
        require(rho.get<std::string>() == "solve", "\"rho\" must be a matrix or \"solve\"");
    } else {
        c.rho = io::matrix_from_json(rho, c.d, c.d);
    }
    if (j.contains("group")) {
        const Json& g = j.at("group");
        check_keys(g, {"d", "generators"}, "group");
        if (g.contains("d")) require(g.at("d") == c.d, "group dimension differs from \"d\"");
        if (g.contains("generators")) {
            require(g.at("generators").is_array(), "\"generators\" must be a list of matrices");
            for (const Json& m : g.at("generators")) c.generators.push_back(io::matrix_from_json(m, c.d, c.d));
        }
    }
    if (j.contains("n_max")) c.n_max = positive_int(j.at("n_max"), "n_max");
    if (j.contains("k_max")) c.k_max = positive_int(j.at("k_max"), "k_max");
    if (j.contains("bounds")) {
        const Json& b = j.at("bounds");
        check_keys(b, {"n"}, "bounds");
        require(b.contains("n") && b.at("n").is_array(), "\"bounds.n\" must be a list of volumes");
        for (const Json& n : b.at("n")) c.bound_n.push_back(positive_int(n, "bounds.n"));
    } else {
        for (Index n = 1; n <= c.n_max; ++n) c.bound_n.push_back(n);
    }
    if (j.contains("chain_length")) c.chain_length = positive_int(j.at("chain_length"), "chain_length");
    if (j.contains("projection_basis")) c.projection_basis = io::matrix_from_json(j.at("projection_basis"), c.d, c.d);
    if (j.contains("tolerances")) {
        const Json& t = j.at("tolerances");
        check_keys(t, {"psd", "herm", "trace", "inv", "weight", "rank"}, "tolerances");
        if (t.contains("psd")) c.tol.psd = positive_number(t.at("psd"), "tolerances.psd");
        if (t.contains("herm")) c.tol.herm = positive_number(t.at("herm"), "tolerances.herm");
        if (t.contains("trace")) c.tol.trace = positive_number(t.at("trace"), "tolerances.trace");
        if (t.contains("inv")) c.tol.inv = positive_number(t.at("inv"), "tolerances.inv");
        if (t.contains("weight")) c.tol.weight = positive_number(t.at("weight"), "tolerances.weight");
        if (t.contains("rank")) c.tol.rank = positive_number(t.at("rank"), "tolerances.rank");
    }
    if (j.contains("word_cap")) c.word_cap = static_cast<std::uint64_t>(positive_int(j.at("word_cap"), "word_cap"));
    if (j.contains("max_dim")) c.max_dim = positive_int(j.at("max_dim"), "max_dim");
    if (j.contains("output")) {
        const Json& o = j.at("output");
        check_keys(o, {"dir", "formats"}, "output");
        if (o.contains("dir")) {
            require(o.at("dir").is_string(), "\"output.dir\" must be a string");
            c.output_dir = o.at("dir").get<std::string>();
        }
        if (o.contains("formats")) {
            c.formats.clear();
            for (const Json& f : o.at("formats")) {
                require(f.is_string(), "\"output.formats\" entries must be strings");
                const std::string s = f.get<std::string>();
                require(s == "json" || s == "csv" || s == "markdown", "unknown output format \"" + s + "\"");
                c.formats.push_back(s);
            }
        }
    }
    return c;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) { return parse_scenario(io::read_json_file(path)); }

Stage stage_from_string(const std::string& s) {
    if (s == "validate") return Stage::Validate;
    if (s == "entropy") return Stage::Entropy;
    if (s == "gauge") return Stage::Gauge;
    if (s == "extend") return Stage::Extend;
    if (s == "bounds") return Stage::Bounds;
    if (s == "report") return Stage::Report;
    throw InputError("unknown stage " + s);
}

std::string to_string(Stage s) {
    switch (s) {
        case Stage::Validate: return "validate";
        case Stage::Entropy: return "entropy";
        case Stage::Gauge: return "gauge";
        case Stage::Extend: return "extend";
        case Stage::Bounds: return "bounds";
        case Stage::Report: return "report";
    }
    return "report";
}

bool Report::all_asserted_hold() const {
    return std::all_of(inequalities.begin(), inequalities.end(), [](const Inequality& q) { return q.holds || !q.asserted; });
}

Report run_scenario(const ScenarioConfig& c, const RunOptions& opt) {
    Report r;
    r.scenario = c.name;
    r.stage = opt.stage;
    const double unit = opt.bits ? 1.0 / std::log(2.0) : 1.0;
    Builder q(r, unit);
    const Index max_dim = opt.max_dim.value_or(c.max_dim);
    const Index d = c.d;
    const Stage st = opt.stage;

    const bool do_entropy = runs(st, {Stage::Entropy, Stage::Bounds, Stage::Report});
    const bool do_gauge = runs(st, {Stage::Gauge, Stage::Report});
    const bool do_extend = runs(st, {Stage::Extend, Stage::Bounds, Stage::Report});
    const bool do_bounds = runs(st, {Stage::Bounds, Stage::Report});

    if (do_entropy || do_gauge) check_dim(d, c.n_max, max_dim, "n_max");
    if (do_bounds)
        for (Index n : c.bound_n) check_dim(d, n, max_dim, "bounds.n");

    r.data["provenance"] = Json{{"config_hash", c.hash}, {"version", FCS_VERSION}, {"scenario", c.name},
                                {"stage", to_string(st)}, {"units", opt.bits ? "bits" : "nats"}};

    // validate
    const CpMap map = io::cp_map_from_json(c.map, d);
    const double cp_violation = std::max(0.0, -min_eigenvalue(map.choi()));
    if (cp_violation > c.tol.inv) {
        std::ostringstream os;
        os << "complete positivity violated: the Choi matrix has eigenvalue " << -cp_violation << " < 0";
        throw NotCpError(os.str());
    }
    const double unital = operator_norm(map.unit_image() - Matrix::Identity(d, d));
    if (unital > c.tol.inv) {
        std::ostringstream os;
        os << "unitality violated: |E(1 (x) 1) - 1| = " << unital;
        throw InputError(os.str());
    }
    Index fixed_dim = 0;
    std::string rho_source = "given";
    std::optional<DensityMatrix> w;
    if (c.rho) {
        w.emplace(*c.rho, c.tol);
    } else {
        InvariantState inv = invariant_state(map, c.tol);
        fixed_dim = inv.fixed_space_dim;
        rho_source = "solved";
        if (fixed_dim > 1)
            r.warnings.push_back("the transfer map has a " + std::to_string(fixed_dim) +
                                 "-dimensional fixed space; the Cesaro limit from I/d was used");
        w.emplace(inv.W);
    }
    const FCState s{map, *w};
    const FcsDiagnostics diag = check_fcs_conditions(s);
    if (diag.invariance_violation > c.tol.inv) {
        std::ostringstream os;
        os << "invariance violated: |rho(E(1 (x) C)) - rho(C)| = " << diag.invariance_violation;
        throw InputError(os.str());
    }
    q.add("cp", "max(0, -lambda_min(Choi)) <= tol_inv", diag.cp_violation, c.tol.inv, false);
    q.add("unitality", "|E(1) - 1| <= tol_inv", diag.unitality_violation, c.tol.inv, false);
    q.add("invariance", "max_C |rho(E(1 (x) C)) - rho(C)| <= tol_inv", diag.invariance_violation, c.tol.inv, false);

    const GaugeGroup g = c.generators.empty() ? GaugeGroup::trivial(d) : group_closure(d, c.generators);
    const CovarianceCheck cov = check_g_covariance(map, g);
    if (!cov.pass) r.warnings.push_back("E is not covariant under the gauge group; bound assertions are reported only");

    r.data["fcs"] = Json{{"d", d},
                         {"rho", io::matrix_to_json(s.W.matrix())},
                         {"rho_source", rho_source},
                         {"fixed_space_dim", fixed_dim},
                         {"cp_violation", diag.cp_violation},
                         {"unitality_violation", diag.unitality_violation},
                         {"invariance_violation", diag.invariance_violation},
                         {"accepted", diag.accepted(c.tol.inv)}};
    r.data["group"] = Json{{"order", g.size()}, {"covariant", cov.pass}, {"covariance_violation", cov.max_violation}};

    // entropies
    std::optional<EntropySequence> ambient;
    MeanEntropyEstimate mean;
    if (do_entropy) {
        ambient = entropy_sequence(s, c.n_max, max_dim);
        if (c.n_max >= 2) {
            mean = mean_entropy_estimate(*ambient);
        } else {
            mean.cesaro = mean.increment = ambient->at(1);
        }
        const double stat = check_stationarity(s, c.n_max, max_dim);
        Json seq = Json::array();
        for (double v : ambient->values) seq.push_back(q.e(v));
        r.data["entropy"] = Json{{"S_n", seq},
                                 {"mean_entropy", q.e(mean.increment)},
                                 {"mean_entropy_cesaro", q.e(mean.cesaro)},
                                 {"spread", q.e(mean.spread)},
                                 {"stationarity_residual", stat}};
        q.add("stationarity", "|phi_[1,n] reduced to sites 1..n-1 - phi_[1,n-1]|_1 <= tol_inv", stat, c.tol.inv, false);
        for (Index n = 2; n <= c.n_max; ++n)
            q.add("subadditivity_n" + std::to_string(n), "S_n <= S_{n-1} + S_1 + 1e-9", ambient->at(n),
                  ambient->at(n - 1) + ambient->at(1) + 1e-9, true);
    }

    // gauge restriction
    std::optional<RestrictedEntropyReport> gauge;
    if (do_gauge) {
        gauge = restricted_entropy_sequence(s, g, c.n_max, max_dim);
        if (!ambient) ambient = gauge->ambient;
        const std::vector<GrowthRow> growth = growth_table(g, 1, c.n_max, max_dim);
        io::CsvTable gt{"growth",
                        {"n", "k", "max_multiplicity", "sum_dim_squared", "character_sum", "ambient_dim",
                         "sum_dim_multiplicity"},
                        {}};
        Json rows = Json::array();
        for (const GrowthRow& row : growth) {
            gt.add_row({io::cell(static_cast<long long>(row.n)), io::cell(static_cast<long long>(row.k)),
                        io::cell(static_cast<long long>(row.max_multiplicity)),
                        io::cell(static_cast<long long>(row.sum_dim_squared)), io::cell(row.character_sum),
                        io::cell(static_cast<long long>(row.ambient_dim)),
                        io::cell(static_cast<long long>(row.sum_dim_multiplicity))});
            rows.push_back(Json{{"n", row.n},
                                {"k", row.k},
                                {"max_multiplicity", row.max_multiplicity},
                                {"sum_dim_squared", row.sum_dim_squared},
                                {"character_sum", row.character_sum},
                                {"ambient_dim", row.ambient_dim},
                                {"sum_dim_multiplicity", row.sum_dim_multiplicity}});
            q.add("checksum_dim_n" + std::to_string(row.n), "sum d_i m_i = d^n",
                  static_cast<double>(std::abs(row.sum_dim_multiplicity - row.ambient_dim)), 0.0, false);
            q.add("checksum_character_n" + std::to_string(row.n), "|sum d_i^2 - (1/|G|) sum |Tr g|^{2n}| <= 1e-9",
                  std::abs(static_cast<double>(row.sum_dim_squared) - row.character_sum), 1e-9, false);
        }
        r.tables.push_back(std::move(gt));
        Json restricted = Json::array();
        for (Index n = 1; n <= c.n_max; ++n) {
            const auto i = static_cast<std::size_t>(n - 1);
            const double sr = gauge->restricted.at(n);
            const double sa = gauge->ambient.at(n);
            const double penalty = std::log(static_cast<double>(gauge->k[i])) +
                                   std::log(static_cast<double>(gauge->max_multiplicity[i]));
            restricted.push_back(q.e(sr));
            q.add("multiplicity_bound_n" + std::to_string(n), "S_n(phi) <= S_n(phi~) + log k(n) + log max m(n) + 1e-9",
                  sr, sa + penalty + 1e-9, true);
            q.add("restriction_lower_n" + std::to_string(n), "S_n(phi~) <= S_n(phi) + 1e-9 (observed)", sa, sr + 1e-9,
                  true, false);
        }
        Json ks = Json::array(), ms = Json::array();
        for (Index k : gauge->k) ks.push_back(k);
        for (Index m : gauge->max_multiplicity) ms.push_back(m);
        r.data["gauge"] = Json{{"S_n_restricted", restricted}, {"k", ks}, {"max_multiplicity", ms}, {"growth", rows}};
    }

    if (ambient) {
        io::CsvTable et{"entropy", {"n", "S_ambient", "S_gauge", "increment"}, {}};
        for (Index n = 1; n <= ambient->n_max(); ++n)
            et.add_row({io::cell(static_cast<long long>(n)), io::cell(q.e(ambient->at(n))),
                        gauge ? io::cell(q.e(gauge->restricted.at(n))) : std::string(),
                        io::cell(q.e(ambient->increment(n)))});
        r.tables.insert(r.tables.begin(), std::move(et));
    }

    // labelled extension and classical chain
    std::optional<ExtendedChain> x;
    std::optional<ChainEntropyRate> rates;
    if (do_extend) {
        std::optional<std::vector<Matrix>> projections;
        if (c.projection_basis) {
            projections.emplace();
            for (Index a = 0; a < d; ++a)
                projections->push_back(c.projection_basis->col(a) * c.projection_basis->col(a).adjoint());
        }
        x = build_extension(s, projections, c.tol);
        const double label_res = label_sum_residual(*x);
        q.add("label_sum", "max |sum_j Ebar(A (x) e_j (x) B) - E(A (x) B)| <= 1e-9", label_res, 1e-9, false);

        // consistency of the extension with the original state on matrix-unit words of length <= 2
        double consistency = 0.0;
        const std::vector<Complex> full(static_cast<std::size_t>(x->labels()), Complex(1.0));
        for (Index len = 1; len <= 2; ++len) {
            const Index units = d * d;
            for (Index w = 0; w < power(units, len); ++w) {
                std::vector<Matrix> ops;
                std::vector<BarFactor> word;
                Index rest = w;
                for (Index t = 0; t < len; ++t) {
                    const Index u = rest % units;
                    rest /= units;
                    ops.push_back(matrix_unit(d, u / d, u % d));
                    word.push_back({ops.back(), full});
                }
                consistency = std::max(consistency, std::abs(bar_state_value(*x, word) - evaluate_word(s, ops)));
            }
        }
        q.add("extension_consistency", "max |phibar(A_1 (x) 1 ... ) - phi~(A_1 (x) ...)| <= 1e-9", consistency, 1e-9,
              false);

        Index depth = c.chain_length > 0 ? c.chain_length : c.n_max;
        if (do_bounds)
            for (Index n : c.bound_n) depth = std::max(depth, n * c.k_max);
        rates = chain_entropy_rate(*x, depth, c.word_cap);
        const Index dist_len = c.chain_length > 0 ? c.chain_length : c.n_max;
        const ChainDistribution dist = chain_distribution(*x, dist_len, c.word_cap);
        double min_weight = 1.0;
        io::CsvTable dt{"chain_distribution", {"word", "weight"}, {}};
        for (std::size_t i = 0; i < dist.weights.size(); ++i) {
            min_weight = std::min(min_weight, dist.weights[i].second);
            dt.add_row({format_word(dist.word(i), d, x->labels()), io::cell(dist.weights[i].second)});
        }
        const double total = dist.total();
        q.add("chain_normalisation", "|sum_J mu(J) - 1| <= 1e-9", std::abs(total - 1.0), 1e-9, false);
        q.add("chain_positivity", "-min_J mu(J) <= 1e-12", -min_weight, 1e-12, false);

        io::CsvTable ct{"chain_entropy", {"n", "H_n", "H_n_per_site", "increment"}, {}};
        Json hs = Json::array();
        for (Index n = 1; n <= rates->n_max(); ++n) {
            ct.add_row({io::cell(static_cast<long long>(n)), io::cell(q.e(rates->h(n))), io::cell(q.e(rates->cesaro(n))),
                        io::cell(q.e(rates->increment(n)))});
            hs.push_back(q.e(rates->h(n)));
        }
        r.tables.push_back(std::move(ct));
        r.tables.push_back(std::move(dt));
        r.data["extension"] = Json{{"labels", x->labels()},
                                   {"alphabet", x->alphabet()},
                                   {"projection_basis", io::matrix_to_json(x->basis)},
                                   {"label_sum_residual", label_res},
                                   {"consistency_error", consistency},
                                   {"chain",
                                    Json{{"H_n", hs},
                                         {"distribution_length", dist_len},
                                         {"support", dist.weights.size()},
                                         {"total_weight", total},
                                         {"min_weight", min_weight},
                                         {"rate_increment", q.e(rates->increment(rates->n_max()))},
                                         {"rate_cesaro", q.e(rates->cesaro(rates->n_max()))}}}};
    }

    // lower-bound functional
    if (do_bounds) {
        io::CsvTable bt{"bounds",
                        {"n", "k", "third_term", "restricted_per_site", "conditional_per_site", "lower_bound",
                         "mean_entropy", "gap"},
                        {}};
        Json rows = Json::array();
        for (Index n : c.bound_n) {
            const EntropyLowerBound pb = entropy_lower_bound(*x, g, n, c.k_max, c.word_cap, max_dim);
            const double nn = static_cast<double>(n);
            const double third = third_term(*rates, n, c.k_max);
            const std::string tag = "_n" + std::to_string(n) + "_k" + std::to_string(c.k_max);
            bt.add_row({io::cell(static_cast<long long>(n)), io::cell(static_cast<long long>(c.k_max)),
                        io::cell(q.e(third)), io::cell(q.e(pb.restricted_entropy / nn)),
                        io::cell(q.e(pb.conditional_weighted / nn)), io::cell(q.e(pb.value)),
                        io::cell(q.e(mean.increment)), io::cell(q.e(mean.increment - pb.value))});
            rows.push_back(Json{{"n", n},
                                {"k", c.k_max},
                                {"third_term", q.e(third)},
                                {"fourth_terms", Json::array({q.e(pb.restricted_entropy / nn),
                                                              q.e(-pb.conditional_weighted / nn)})},
                                {"conditional_sites", q.e(pb.conditional_sites)},
                                {"conditional_max", q.e(pb.conditional_max)},
                                {"conditional_bound", q.e(pb.conditional_bound)},
                                {"lower_bound", q.e(pb.value)},
                                {"mean_entropy", q.e(mean.increment)}});
            q.add("third_term" + tag, "(H_nk - k H_n) / kn <= 1e-9", third, 1e-9, true);
            q.add("conditional_entropy" + tag, "max_I S(conditional state | gauge algebra) <= bound + 1e-8",
                  pb.conditional_max, pb.conditional_bound + 1e-8, true);
            q.add("lower_bound" + tag, "lower bound <= mean entropy estimate + 1e-6", pb.value, mean.increment + 1e-6,
                  true, cov.pass);
        }
        r.tables.push_back(std::move(bt));
        r.data["bounds"] = rows;
    }

    Json ineq = Json::array();
    io::CsvTable it{"inequalities", {"name", "lhs", "rhs", "residual", "holds", "asserted"}, {}};
    for (const Inequality& iq : r.inequalities) {
        ineq.push_back(inequality_json(iq));
        it.add_row({iq.name, io::cell(iq.lhs), io::cell(iq.rhs), io::cell(iq.residual), iq.holds ? "true" : "false",
                    iq.asserted ? "true" : "false"});
    }
    r.tables.push_back(std::move(it));
    r.data["inequalities"] = ineq;
    r.data["warnings"] = r.warnings;
    return r;
}

std::string render_json(const Report& r) { return io::dump_stable(r.data); }

std::string render_markdown(const Report& r) {
    std::ostringstream os;
    const Json& prov = r.data.at("provenance");
    os << "# Scenario " << r.scenario << "\n\n";
    os << "- stage: " << prov.at("stage").get<std::string>() << "\n";
    os << "- units: " << prov.at("units").get<std::string>() << "\n";
    os << "- config hash: " << prov.at("config_hash").get<std::string>() << "\n";
    os << "- version: " << prov.at("version").get<std::string>() << "\n";
    if (r.data.contains("entropy"))
        os << "- mean entropy estimate: " << io::format_double(r.data.at("entropy").at("mean_entropy").get<double>())
           << "\n";
    os << "\n";
    for (const io::CsvTable& t : r.tables) {
        if (t.name == "chain_distribution" || t.name == "inequalities") continue;
        os << "## " << t.name << "\n\n|";
        for (const std::string& h : t.header) os << " " << h << " |";
        os << "\n|";
        for (std::size_t i = 0; i < t.header.size(); ++i) os << " --- |";
        os << "\n";
        for (const auto& row : t.rows) {
            os << "|";
            for (const std::string& v : row) os << " " << v << " |";
            os << "\n";
        }
        os << "\n";
    }
    os << "## Inequalities\n\n| name | statement | lhs | rhs | residual | holds |\n| --- | --- | --- | --- | --- | --- |\n";
    for (const Inequality& q : r.inequalities) {
        os << "| " << q.name << " | " << q.statement << " | " << io::cell(q.lhs) << " | " << io::cell(q.rhs) << " | "
           << io::cell(q.residual) << " | " << (q.holds ? "yes" : (q.asserted ? "NO" : "no (reported)")) << " |\n";
    }
    if (!r.warnings.empty()) {
        os << "\n## Warnings\n\n";
        for (const std::string& w : r.warnings) os << "- " << w << "\n";
    }
    return os.str();
}

std::vector<std::filesystem::path> emit_report(const Report& r, const std::filesystem::path& dir,
                                               const std::vector<std::string>& formats) {
    std::vector<std::filesystem::path> written;
    auto wants = [&](const char* f) { return std::find(formats.begin(), formats.end(), f) != formats.end(); };
    if (wants("json")) {
        written.push_back(dir / "report.json");
        io::write_text_file(written.back(), render_json(r));
    }
    if (wants("csv")) {
        for (const io::CsvTable& t : r.tables) {
            written.push_back(dir / (t.name + ".csv"));
            io::write_text_file(written.back(), t.render());
        }
    }
    if (wants("markdown")) {
        written.push_back(dir / "report.md");
        io::write_text_file(written.back(), render_markdown(r));
    }
    return written;
}

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const ResourceError*>(&e)) return 3;
    if (dynamic_cast<const InputError*>(&e) || dynamic_cast<const NotCpError*>(&e) ||
        dynamic_cast<const InvalidDensityError*>(&e) || dynamic_cast<const ShapeError*>(&e) ||
        dynamic_cast<const nlohmann::json::exception*>(&e))
        return 2;
    return 1;
}

}  // namespace fcs
