#include "aggkit/cli.hpp"

#include "aggkit/belief.hpp"
#include "aggkit/choice.hpp"
#include "aggkit/social.hpp"
#include "aggkit/testkit.hpp"
#include "io.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <set>

namespace aggkit::cli {

namespace {

struct Options {
    std::string command;
    std::string input;
    std::optional<double> tol;
    std::string axiom = "weighted";
    std::string format = "json";
    std::string out;
    std::optional<std::uint64_t> seed;
    std::string config;
};

struct Report {
    json body = json::object();
    int exit = Positive;
};

class Context {
public:
    Context(const Options& options, Tolerance tol, std::istream& in) : options(options), tol(tol), in_(in) {}

    json load() const { return load_json(options.input, in_); }
    std::string source() const { return options.input == "-" ? "<stdin>" : options.input; }

    const Options& options;
    Tolerance tol;

private:
    std::istream& in_;
};

json encode_check(const AxiomCheck& c)
{
    return json{{"a", encode(c.a)}, {"b", encode(c.b)}, {"lambda", c.lambda ? json(*c.lambda) : json(nullptr)},
        {"residual", c.residual}, {"collinear_outside", c.collinear_outside}, {"passed", c.passed}};
}

json encode_axiom(const AxiomReport& report)
{
    json checks = json::array();
    json violations = json::array();
    for (const auto& c : report.checks) {
        checks.push_back(encode_check(c));
    }
    for (const auto& c : report.violations) {
        violations.push_back(encode_check(c));
    }
    return json{{"mode", std::string(to_string(report.mode))}, {"satisfied", report.satisfied},
        {"checks", checks}, {"violations", violations}};
}

json encode_sets(const std::vector<FeatureSet>& sets)
{
    json out = json::array();
    for (const auto& s : sets) {
        out.push_back(encode(s));
    }
    return out;
}

json encode_representation(const Representation& rep)
{
    json features = json::object();
    for (const auto& [id, t] : rep.entries()) {
        features[id.str()] = json{{"weight", t.weight}, {"rank", t.rank}, {"outcome", encode(t.outcome)}};
    }
    return features;
}

json encode_weights(const WeightMap& weights)
{
    json out = json::object();
    for (const auto& [id, w] : weights) {
        out[id.str()] = w;
    }
    return out;
}

json encode_ranks(const RankMap& ranks)
{
    json out = json::object();
    for (const auto& [id, r] : ranks) {
        out[id.str()] = r;
    }
    return out;
}

json encode_certificate(const Certificate& c)
{
    return json{{"z", encode(c.z)}, {"z_a", c.z_a}, {"z_b", c.z_b}, {"z_ab", c.z_ab}, {"boundary", c.boundary}};
}

// Fills a report from a recovery outcome and returns the exit code.
int recovery_body(json& body, const RecoveryOutcome& outcome)
{
    if (const auto* rec = outcome.recovered()) {
        body["verdict"] = "recovered";
        body["single_class"] = rec->rep.single_class();
        body["representation"] = encode_representation(rec->rep);
        body["indeterminate_classes"] = rec->indeterminate_classes;
        body["max_residual"] = rec->max_residual;
        body["verification"] = encode_rows(rec->verification);
        return Positive;
    }
    if (const auto* bad = outcome.non_representable()) {
        body["verdict"] = "non_representable";
        body["witness"] = encode(bad->witness);
        body["verification"] = encode_rows(bad->verification);
        return Negative;
    }
    body["verdict"] = "missing_data";
    body["required"] = encode_sets(outcome.missing()->required);
    return MissingInput;
}

Report cmd_check(const Context& ctx)
{
    const auto file = parse_dataset(ctx.load(), ctx.source(), {"generic", "belief", "menu", "profile", "sdeu"});
    const Dataset data = file.dataset();
    const auto mode = parse_axiom_mode(ctx.options.axiom);
    const AxiomReport report = check_axiom(data, *mode, ctx.tol);
    Report r;
    r.body["verdict"] = report.satisfied ? "satisfied" : "violated";
    r.body["rich"] = check_richness(data, ctx.tol);
    r.body["axiom"] = encode_axiom(report);
    r.exit = report.satisfied ? Positive : Negative;
    return r;
}

Report cmd_recover(const Context& ctx)
{
    const auto file = parse_dataset(ctx.load(), ctx.source(), {"generic", "belief", "menu", "profile", "sdeu"});
    Report r;
    r.exit = recovery_body(r.body, recover(file.dataset(), RecoveryOptions{ctx.tol, {}}));
    return r;
}

Report cmd_eval(const Context& ctx)
{
    const json doc = ctx.load();
    Reader rd(doc, ctx.source());
    if (rd.string(rd.field(doc, "", "format_version"), "/format_version") != "1") {
        rd.fail("/format_version", "unsupported format version");
    }
    if (rd.string(rd.field(doc, "", "kind"), "/kind") != "representation") {
        rd.fail("/kind", "expected kind \"representation\"");
    }
    const json& dim = rd.field(doc, "", "dimension");
    if (!dim.is_number_integer() || dim.get<long long>() < 1) {
        rd.fail("/dimension", "expected a positive integer");
    }
    const auto dimension = dim.get<std::size_t>();
    std::map<FeatureId, FeatureTraits> entries;
    const json& features = rd.field(doc, "", "features");
    if (!features.is_object() || features.empty()) {
        rd.fail("/features", "expected a nonempty object");
    }
    for (const auto& [key, value] : features.items()) {
        const std::string where = "/features/" + key;
        FeatureTraits t;
        t.outcome = rd.point(rd.field(value, where, "outcome"), where + "/outcome", dimension);
        t.weight = rd.number(rd.field(value, where, "weight"), where + "/weight");
        if (!(t.weight > 0.0)) {
            rd.fail(where + "/weight", "weight must be positive");
        }
        const json& rank = rd.field(value, where, "rank");
        if (!rank.is_number_integer()) {
            rd.fail(where + "/rank", "expected an integer");
        }
        t.rank = rank.get<int>();
        try {
            entries.emplace(FeatureId(key), std::move(t));
        } catch (const Error& e) {
            rd.fail(where, e.what());
        }
    }
    const Representation rep(std::move(entries));
    std::set<FeatureSet> queries;
    const json& list = rd.field(doc, "", "queries");
    if (!list.is_array()) {
        rd.fail("/queries", "expected an array");
    }
    for (std::size_t n = 0; n < list.size(); ++n) {
        const std::string where = "/queries/" + std::to_string(n);
        FeatureSet set = rd.members(list[n], where);
        for (const auto& id : set) {
            if (!rep.entries().count(id)) {
                rd.fail(where, "feature \"" + id.str() + "\" is not declared in /features");
            }
        }
        queries.insert(std::move(set));
    }
    json rows = json::array();
    for (const auto& set : queries) {
        rows.push_back(json{{"set", encode(set)}, {"top", encode(top_set(rep, set))}, {"outcome", encode(evaluate(rep, set))}});
    }
    Report r;
    r.body["verdict"] = "evaluated";
    r.body["evaluations"] = rows;
    return r;
}

Report cmd_bayes(const Context& ctx)
{
    const auto file = parse_dataset(ctx.load(), ctx.source(), {"belief"});
    const BayesianVerdict v = check_bayesian(file.dataset(), ctx.tol);
    Report r;
    if (const auto* missing = v.recovery.missing()) {
        r.body["verdict"] = "missing_data";
        r.body["required"] = encode_sets(missing->required);
        r.exit = MissingInput;
        return r;
    }
    r.body["verdict"] = v.bayesian ? "bayesian" : "not_bayesian";
    r.body["status"] = v.bayesian ? (v.certified ? "certified" : "consistent_so_far") : "refuted";
    r.body["certified"] = v.certified;
    r.body["rich"] = v.rich;
    if (v.joint) {
        json table = json::array();
        for (Eigen::Index s = 0; s < v.joint->table().rows(); ++s) {
            table.push_back(encode(Point(v.joint->table().row(s).transpose())));
        }
        json ids = json::array();
        for (const auto& id : v.joint->features()) {
            ids.push_back(id.str());
        }
        r.body["joint"] = json{{"features", ids}, {"states", v.joint->states()}, {"table", table}};
    } else {
        r.body["joint"] = nullptr;
    }
    r.body["max_residual"] = v.max_residual;
    r.body["rows"] = encode_rows(v.rows);
    r.body["counterexample"] = v.counterexample ? encode(*v.counterexample) : json(nullptr);
    r.exit = v.bayesian ? Positive : Negative;
    return r;
}

Report cmd_cps(const Context& ctx)
{
    const auto file = parse_dataset(ctx.load(), ctx.source(), {"belief"});
    const Dataset data = file.dataset();
    Report r;
    const RecoveryOutcome outcome = recover(data, RecoveryOptions{ctx.tol, {}});
    const auto* rec = outcome.recovered();
    if (rec == nullptr) {
        r.exit = recovery_body(r.body, outcome);
        return r;
    }
    const auto events = data.features().size() <= 10 ? std::vector<FeatureSet>{} : data.sets();
    const ConditionalProbabilitySystem cps = build_cps(rec->rep, events);
    const CpsReport report = verify_cps(cps, ctx.tol);
    json beliefs = json::array();
    for (const auto& [set, table] : cps.conditionals) {
        beliefs.push_back(json{{"set", encode(set)}, {"belief", encode(cps.belief(set))}});
    }
    json violations = json::array();
    for (const auto& v : report.violations) {
        violations.push_back(json{{"property", std::string(to_string(v.property))}, {"a", encode(v.a)},
            {"b", v.b ? encode(*v.b) : json(nullptr)}, {"residual", v.residual}});
    }
    r.body["verdict"] = report.valid ? "valid_cps" : "invalid_cps";
    r.body["representation"] = encode_representation(rec->rep);
    r.body["events"] = beliefs;
    r.body["verification"] = json{{"valid", report.valid}, {"max_residual", report.max_residual},
        {"events_checked", report.events_checked}, {"pairs_checked", report.pairs_checked},
        {"violations", violations}};
    r.body["data_residual"] = rec->max_residual;
    r.exit = report.valid ? Positive : Negative;
    return r;
}

Report cmd_discount(const Context& ctx)
{
    const auto file = parse_dataset(ctx.load(), ctx.source(), {"belief"});
    const Dataset data = file.dataset();
    TimedOracle oracle = [&](const TimedQuery& q) -> std::optional<Point> {
        auto it = file.timed.find(q);
        if (it != file.timed.end()) {
            return it->second;
        }
        if (q == TimedQuery::uniform(q.members)) {
            return data.query(q.members);
        }
        return std::nullopt;
    };
    DiscountOptions options;
    options.tol = ctx.tol;
    for (const auto& entry : file.timed) {
        options.validation.push_back(entry.first);
        options.stationarity_probes.push_back(entry.first);
    }
    Report r;
    DiscountOutcome outcome;
    try {
        outcome = recover_discounted(oracle, data.features(), data.dimension(), options);
    } catch (const WitnessError&) {
        throw;
    } catch (const Error& e) {
        if (e.code() != ErrorCode::NotStationary && e.code() != ErrorCode::MultipleRankClasses
            && e.code() != ErrorCode::DegenerateLambda) {
            throw;
        }
        r.body["verdict"] = e.code() == ErrorCode::NotStationary ? "not_stationary" : "not_discounting";
        r.body["reason"] = e.message();
        r.exit = Negative;
        return r;
    }
    json rows = json::array();
    for (const auto& row : outcome.validation) {
        rows.push_back(json{{"query", encode(row.query)}, {"residual", row.residual}, {"passed", row.passed}});
    }
    json beliefs = json::object();
    for (const auto& [id, p] : outcome.beliefs) {
        beliefs[id.str()] = encode(p);
    }
    r.body["verdict"] = outcome.verified ? "identified" : "not_verified";
    r.body["q"] = outcome.q;
    r.body["lambda"] = outcome.lambda;
    r.body["identifying_query"] = encode(outcome.identifying_query);
    r.body["weights"] = encode_weights(outcome.weights);
    r.body["beliefs"] = beliefs;
    r.body["stationarity_checks"] = outcome.stationarity_checks;
    r.body["max_residual"] = outcome.max_residual;
    r.body["validation"] = rows;
    r.exit = outcome.verified ? Positive : Negative;
    return r;
}

json encode_luce(const LuceVerdict& v)
{
    return json{{"status", std::string(to_string(v.status))}, {"rich", v.rich}, {"weights", encode_weights(v.weights)},
        {"ranks", encode_ranks(v.ranks)},
        {"counterexample", v.counterexample ? encode(*v.counterexample) : json(nullptr)},
        {"required", encode_sets(v.missing)}};
}

Report cmd_luce(const Context& ctx)
{
    const auto file = parse_dataset(ctx.load(), ctx.source(), {"menu"});
    const Dataset data = file.dataset();
    const LuceVerdict one = recover_luce(data, ctx.tol);
    const TwoStageVerdict two = recover_two_stage_luce(data, ctx.tol);
    Report r;
    const bool two_ok = two.luce.status == LuceStatus::Rationalizable;
    bool multi_class = false;
    for (const auto& [id, rank] : two.luce.ranks) {
        multi_class = multi_class || rank != two.luce.ranks.begin()->second;
    }
    if (two.luce.status == LuceStatus::MissingData) {
        r.body["verdict"] = "missing_data";
        r.body["required"] = encode_sets(two.luce.missing);
        r.exit = MissingInput;
        return r;
    }
    if (one.status == LuceStatus::Rationalizable) {
        r.body["verdict"] = "luce";
    } else if (two_ok && multi_class) {
        r.body["verdict"] = "two_stage_luce";
    } else if (one.status == LuceStatus::RichnessFailure) {
        r.body["verdict"] = "richness_failure";
    } else {
        r.body["verdict"] = "not_rationalizable";
    }
    r.exit = one.status == LuceStatus::Rationalizable || (two_ok && multi_class) ? Positive : Negative;
    r.body["luce"] = encode_luce(one);
    json two_json = encode_luce(two.luce);
    two_json["strongly_rich"] = two.strongly_rich;
    r.body["two_stage"] = two_json;
    json probabilities = json::array();
    if (two_ok) {
        for (const auto& set : data.sets()) {
            const auto rho = choice_probabilities(two.luce.weights, two.luce.ranks, set);
            json probs = json::object();
            for (const auto& [id, p] : rho.probs) {
                probs[id.str()] = p;
            }
            probabilities.push_back(json{{"set", encode(set)}, {"probs", probs}});
        }
    }
    r.body["probabilities"] = probabilities;
    const FeasibilityReport feasibility = check_menu_feasibility(data, ctx.tol);
    json infeasible = json::array();
    for (const auto& row : feasibility.rows) {
        if (!row.feasible) {
            infeasible.push_back(encode(row.set));
        }
    }
    r.body["feasibility"] = json{{"feasible", feasibility.feasible}, {"infeasible", infeasible}};
    const BoundaryReport boundary = boundary_diagnostic(data, ctx.tol);
    json flagged = json::array();
    for (const auto& row : boundary.flagged) {
        flagged.push_back(json{{"set", encode(row.set)}, {"outside", row.outside}, {"on_boundary", row.on_boundary},
            {"contradiction", row.contradiction}});
    }
    r.body["boundary"] = json{{"strict_evidence", boundary.strict_evidence}, {"contradictions", boundary.contradictions},
        {"flagged", flagged}};
    return r;
}

Report cmd_pathindep(const Context& ctx)
{
    const json doc = ctx.load();
    const auto file = parse_dataset(doc, ctx.source(), {"menu"});
    Reader rd(doc, ctx.source());
    const json& oracle_doc = rd.field(doc, "", "oracle");
    const std::string type = rd.string(rd.field(oracle_doc, "/oracle", "type"), "/oracle/type");
    MenuOracle oracle;
    if (type == "luce") {
        std::vector<std::pair<Point, double>> known;
        const json& weights = rd.field(oracle_doc, "/oracle", "weights");
        for (const auto& [id, p] : file.features) {
            const std::string where = "/oracle/weights/" + id.str();
            const double w = rd.number(rd.field(weights, "/oracle/weights", id.str().c_str()), where);
            if (!(w > 0.0)) {
                rd.fail(where, "weight must be positive");
            }
            known.emplace_back(p, w);
        }
        double fresh = 1.0;
        if (const json* f = rd.optional_field(oracle_doc, "fresh_weight")) {
            fresh = rd.number(*f, "/oracle/fresh_weight");
            if (!(fresh > 0.0)) {
                rd.fail("/oracle/fresh_weight", "weight must be positive");
            }
        }
        oracle = make_luce_menu_oracle(std::move(known), fresh, ctx.tol);
    } else if (type == "dictatorial") {
        std::vector<std::pair<Point, int>> priority;
        const json& ranks = rd.field(oracle_doc, "/oracle", "priority");
        for (const auto& [id, p] : file.features) {
            const json& rank = rd.field(ranks, "/oracle/priority", id.str().c_str());
            if (!rank.is_number_integer()) {
                rd.fail("/oracle/priority/" + id.str(), "expected an integer");
            }
            priority.emplace_back(p, rank.get<int>());
        }
        oracle = make_dictatorial_oracle(std::move(priority), ctx.tol);
    } else {
        rd.fail("/oracle/type", "expected \"luce\" or \"dictatorial\"");
    }
    std::vector<std::pair<FeatureSet, FeatureSet>> pairs;
    const json& list = rd.field(doc, "", "pairs");
    if (!list.is_array()) {
        rd.fail("/pairs", "expected an array");
    }
    for (std::size_t n = 0; n < list.size(); ++n) {
        const std::string where = "/pairs/" + std::to_string(n);
        if (!list[n].is_array() || list[n].size() != 2) {
            rd.fail(where, "expected a pair of menus");
        }
        FeatureSet a = rd.members(list[n][0], where + "/0");
        FeatureSet b = rd.members(list[n][1], where + "/1");
        for (const auto* s : {&a, &b}) {
            for (const auto& id : *s) {
                if (!file.features.count(id)) {
                    rd.fail(where, "feature \"" + id.str() + "\" is not declared in /features");
                }
            }
        }
        if (!a.disjoint(b)) {
            rd.fail(where, "menus overlap");
        }
        pairs.emplace_back(std::move(a), std::move(b));
    }
    const PathIndependenceReport report = check_path_independence(oracle, file.features, pairs, ctx.tol);
    json rows = json::array();
    for (const auto& row : report.rows) {
        rows.push_back(json{{"a", encode(row.a)}, {"b", encode(row.b)}, {"direct", encode(row.direct)},
            {"composed", encode(row.composed)}, {"residual", row.residual}, {"passed", row.passed}});
    }
    Report r;
    r.body["verdict"] = report.satisfied ? "path_independent" : "path_dependent";
    r.body["oracle"] = type;
    r.body["max_residual"] = report.max_residual;
    r.body["rows"] = rows;
    r.exit = report.satisfied ? Positive : Negative;
    return r;
}

Report cmd_pareto(const Context& ctx)
{
    const auto file = parse_dataset(ctx.load(), ctx.source(), {"profile"});
    const ParetoReport report = check_extended_pareto(file.dataset(), *file.direction, ctx.tol);
    Report r;
    json violations = json::array();
    for (const auto& v : report.violations) {
        json entry = encode_check(v.check);
        entry["certificate"] = v.certificate ? encode_certificate(*v.certificate) : json(nullptr);
        violations.push_back(entry);
    }
    r.body["verdict"] = report.satisfied ? "extended_pareto" : "violated";
    r.body["checks"] = report.axiom.checks.size();
    r.body["violations"] = violations;
    if (report.recovery) {
        json rec = json::object();
        recovery_body(rec, *report.recovery);
        r.body["recovery"] = rec;
    } else {
        r.body["recovery"] = nullptr;
    }
    r.exit = report.satisfied ? Positive : Negative;
    return r;
}

Report cmd_gswf_verify(const Context& ctx)
{
    const json doc = ctx.load();
    const auto file = parse_dataset(doc, ctx.source(), {"profile"});
    Reader rd(doc, ctx.source());
    const Point& v = *file.direction;
    PreferenceLibrary library;
    const json& prefs = rd.field(doc, "", "preferences");
    if (!prefs.is_object() || prefs.empty()) {
        rd.fail("/preferences", "expected a nonempty object");
    }
    for (const auto& [id, u] : prefs.items()) {
        library[id] = rd.point(u, "/preferences/" + id, file.dimension);
    }
    GswfTable table;
    const json& weights = rd.field(doc, "", "weights");
    if (!weights.is_array()) {
        rd.fail("/weights", "expected an array");
    }
    for (std::size_t n = 0; n < weights.size(); ++n) {
        const std::string where = "/weights/" + std::to_string(n);
        const std::string pref = rd.string(rd.field(weights[n], where, "preference"), where + "/preference");
        if (!library.count(pref)) {
            rd.fail(where + "/preference", "unknown preference \"" + pref + "\"");
        }
        const double w = rd.number(rd.field(weights[n], where, "weight"), where + "/weight");
        if (!(w > 0.0)) {
            rd.fail(where + "/weight", "weight must be positive");
        }
        try {
            const FeatureId who(rd.string(rd.field(weights[n], where, "individual"), where + "/individual"));
            if (!table.emplace(std::make_pair(who, pref), w).second) {
                rd.fail(where, "duplicate table entry");
            }
        } catch (const InputError&) {
            throw;
        } catch (const Error& e) {
            rd.fail(where + "/individual", e.what());
        }
    }
    std::vector<std::pair<Assignment, UtilityVector>> observed;
    const json& coalitions = rd.field(doc, "", "coalitions");
    if (!coalitions.is_array()) {
        rd.fail("/coalitions", "expected an array");
    }
    for (std::size_t n = 0; n < coalitions.size(); ++n) {
        const std::string where = "/coalitions/" + std::to_string(n);
        const json& assignment = rd.field(coalitions[n], where, "assignment");
        if (!assignment.is_object() || assignment.empty()) {
            rd.fail(where + "/assignment", "expected a nonempty object");
        }
        Assignment a;
        for (const auto& [who, pref] : assignment.items()) {
            const std::string p = rd.string(pref, where + "/assignment/" + who);
            try {
                if (!table.count({FeatureId(who), p})) {
                    rd.fail(where + "/assignment/" + who, "no weight for (" + who + ", " + p + ")");
                }
                a[FeatureId(who)] = p;
            } catch (const InputError&) {
                throw;
            } catch (const Error& e) {
                rd.fail(where + "/assignment/" + who, e.what());
            }
        }
        observed.emplace_back(std::move(a), rd.point(rd.field(coalitions[n], where, "outcome"), where + "/outcome", file.dimension));
    }
    const auto rows = verify_gswf(table, library, v, observed, ctx.tol);
    json out = json::array();
    double worst = 0.0;
    bool ok = true;
    for (const auto& row : rows) {
        json assignment = json::object();
        for (const auto& [who, pref] : row.coalition) {
            assignment[who.str()] = pref;
        }
        out.push_back(json{{"assignment", assignment}, {"residual", row.residual}, {"passed", row.passed}});
        worst = std::max(worst, row.residual);
        ok = ok && row.passed;
    }
    Report r;
    r.body["verdict"] = ok ? "verified" : "mismatch";
    r.body["anonymous"] = is_anonymous(table, ctx.tol);
    r.body["max_residual"] = worst;
    r.body["rows"] = out;
    r.exit = ok ? Positive : Negative;
    return r;
}

Report cmd_sdeu(const Context& ctx)
{
    const auto file = parse_dataset(ctx.load(), ctx.source(), {"sdeu"});
    const StateDependentOutcome outcome = recover_state_dependent(file.dataset(), *file.direction, ctx.tol);
    Report r;
    if (outcome.representation) {
        json P = json::object();
        json u = json::object();
        for (const auto& [state, p] : outcome.representation->P) {
            P[state.str()] = p;
            u[state.str()] = encode(outcome.representation->u.at(state));
        }
        r.body["verdict"] = "represented";
        r.body["P"] = P;
        r.body["u"] = u;
    } else {
        r.body["verdict"] = "non_representable";
        r.body["P"] = nullptr;
        r.body["u"] = nullptr;
    }
    r.body["indeterminate"] = outcome.indeterminate;
    r.body["max_residual"] = outcome.max_residual;
    r.body["rows"] = encode_rows(outcome.rows);
    r.body["witness"] = outcome.witness ? encode(*outcome.witness) : json(nullptr);
    r.exit = outcome.representation ? Positive : Negative;
    return r;
}

Report cmd_gen(const Context& ctx)
{
    testkit::GeneratorConfig cfg;
    testkit::SubsetPolicy subsets = testkit::SubsetPolicy::AllSubsets;
    if (!ctx.options.config.empty()) {
        const json doc = load_json(ctx.options.config, std::cin);
        Reader rd(doc, ctx.options.config);
        if (!doc.is_object()) {
            rd.fail("", "expected an object");
        }
        auto count = [&](const char* key, std::size_t& slot) {
            if (const json* v = rd.optional_field(doc, key)) {
                if (!v->is_number_unsigned()) {
                    rd.fail(std::string("/") + key, "expected a nonnegative integer");
                }
                slot = v->get<std::size_t>();
            }
        };
        if (const json* v = rd.optional_field(doc, "seed")) {
            if (!v->is_number_unsigned()) {
                rd.fail("/seed", "expected a nonnegative integer");
            }
            cfg.seed = v->get<std::uint64_t>();
        }
        count("feature_count", cfg.feature_count);
        count("dimension", cfg.dimension);
        count("rank_classes", cfg.rank_classes);
        if (const json* v = rd.optional_field(doc, "weight_min")) {
            cfg.weight_min = rd.number(*v, "/weight_min");
        }
        if (const json* v = rd.optional_field(doc, "weight_max")) {
            cfg.weight_max = rd.number(*v, "/weight_max");
        }
        if (const json* v = rd.optional_field(doc, "policy")) {
            const auto policy = testkit::parse_outcome_policy(rd.string(*v, "/policy"));
            if (!policy) {
                rd.fail("/policy", "unknown outcome policy");
            }
            cfg.policy = *policy;
        }
        if (const json* v = rd.optional_field(doc, "subsets")) {
            const std::string name = rd.string(*v, "/subsets");
            if (name == "all") {
                subsets = testkit::SubsetPolicy::AllSubsets;
            } else if (name == "pairs_and_triples") {
                subsets = testkit::SubsetPolicy::PairsAndTriples;
            } else {
                rd.fail("/subsets", "expected \"all\" or \"pairs_and_triples\"");
            }
        }
    }
    if (ctx.options.seed) {
        cfg.seed = *ctx.options.seed;
    }
    const Representation rep = testkit::gen_representation(cfg);
    const std::string_view kind = cfg.policy == testkit::OutcomePolicy::SimplexBeliefs ? "belief"
        : cfg.policy == testkit::OutcomePolicy::MenuPoints                              ? "menu"
                                                                                         : "generic";
    Report r;
    r.body = encode_dataset(testkit::gen_dataset(rep, subsets), kind);
    return r;
}

json envelope(const Options& options, const Tolerance& tol, json body)
{
    json command{{"name", options.command}};
    if (!options.input.empty()) {
        command["input"] = options.input;
    }
    if (options.command == "check") {
        command["axiom"] = options.axiom;
    }
    json out{{"format_version", "1"}, {"command", command},
        {"tolerance", json{{"abs_tol", tol.abs_tol}, {"rel_tol", tol.rel_tol}}}};
    for (auto& [key, value] : body.items()) {
        out[key] = std::move(value);
    }
    return out;
}

int emit(const Options& options, const json& doc, std::ostream& out, std::ostream& err)
{
    const std::string text = doc.dump(2) + "\n";
    if (options.out.empty()) {
        out << text;
        return 0;
    }
    std::ofstream file(options.out, std::ios::binary);
    file << text;
    if (!file) {
        err << "error: cannot write " << options.out << "\n";
        return InputFailure;
    }
    return 0;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, std::istream& in)
{
    Options options;
    CLI::App app{"Weighted-averaging aggregation toolkit", "aggkit"};
    app.require_subcommand(1, 1);
    const std::vector<std::pair<std::string, std::string>> commands{
        {"check", "test a dataset against a weighted averaging axiom"},
        {"recover", "recover weights and a weak order, or a witness"},
        {"eval", "evaluate a representation on queried sets"},
        {"bayes", "test belief data for Bayesian updating"},
        {"cps", "build and verify a conditional probability system"},
        {"discount", "identify a stationary discount factor from timed beliefs"},
        {"luce", "Luce and two-stage Luce rationalizability of menu data"},
        {"pathindep", "path independence of a menu oracle"},
        {"pareto", "extended Pareto check of coalition utilities"},
        {"gswf-verify", "verify a social welfare weight table"},
        {"sdeu", "recover a state-dependent expected utility prior"},
        {"gen", "generate a synthetic dataset"},
    };
    for (const auto& [name, help] : commands) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->callback([&options, name = name] { options.command = name; });
        if (name == "gen") {
            sub->add_option("--seed", options.seed, "generator seed");
            sub->add_option("--config", options.config, "generator config (JSON)");
        } else {
            sub->add_option("input", options.input, "input file, or - for stdin")->required();
        }
        sub->add_option("--tol", options.tol, "tolerance (absolute and relative)")->check(CLI::PositiveNumber);
        sub->add_option("--format", options.format, "report format")->check(CLI::IsMember({"json"}));
        sub->add_option("--out", options.out, "write the report here instead of stdout");
        if (name == "check") {
            sub->add_option("--axiom", options.axiom, "weighted, strict or extreme")
                ->check(CLI::IsMember({"weighted", "strict", "extreme"}));
        }
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return Positive;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return Positive;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return InputFailure;
    }

    Tolerance tol;
    if (options.tol) {
        tol = Tolerance::uniform(*options.tol);
    } else if (const char* env = std::getenv("AGGKIT_TOL")) {
        try {
            std::size_t used = 0;
            const double t = std::stod(env, &used);
            if (used != std::string(env).size() || !(t > 0.0) || !std::isfinite(t)) {
                throw std::invalid_argument(env);
            }
            tol = Tolerance::uniform(t);
        } catch (const std::exception&) {
            err << "error: AGGKIT_TOL must be a positive number\n";
            return InputFailure;
        }
    }

    const Context ctx(options, tol, in);
    const std::map<std::string, Report (*)(const Context&)> handlers{
        {"check", cmd_check}, {"recover", cmd_recover}, {"eval", cmd_eval}, {"bayes", cmd_bayes},
        {"cps", cmd_cps}, {"discount", cmd_discount}, {"luce", cmd_luce}, {"pathindep", cmd_pathindep},
        {"pareto", cmd_pareto}, {"gswf-verify", cmd_gswf_verify}, {"sdeu", cmd_sdeu}, {"gen", cmd_gen}};
    Report report;
    try {
        report = handlers.at(options.command)(ctx);
    } catch (const MissingDataError& e) {
        report.body = json{{"verdict", "missing_data"}, {"required", encode_sets(e.required())}, {"reason", e.message()}};
        report.exit = MissingInput;
    } catch (const WitnessError& e) {
        report.body = json{{"verdict", "non_representable"}, {"witness", encode(e.witness())}};
        report.exit = Negative;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return InputFailure;
    }
    if (options.command == "gen") {
        const int status = emit(options, report.body, out, err);
        return status != 0 ? status : report.exit;
    }
    const int status = emit(options, envelope(options, tol, std::move(report.body)), out, err);
    return status != 0 ? status : report.exit;
}

} // namespace aggkit::cli
