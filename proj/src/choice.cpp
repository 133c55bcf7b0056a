#include "aggkit/choice.hpp"

#include <algorithm>

namespace aggkit {

void Menu::validate() const
{
    if (members.empty()) {
        throw Error(ErrorCode::InvalidInput, "empty menu");
    }
    std::optional<Eigen::Index> dim;
    for (const auto& id : members) {
        auto it = coords.find(id);
        if (it == coords.end()) {
            throw Error(ErrorCode::UnknownFeature, "no coordinates for " + id.str());
        }
        require_finite(it->second);
        if (dim && *dim != it->second.size()) {
            throw Error(ErrorCode::DimensionMismatch, "menu coordinates differ in dimension");
        }
        dim = it->second.size();
    }
}

std::vector<Point> Menu::points() const
{
    std::vector<Point> out;
    for (const auto& id : members) {
        out.push_back(coords.at(id));
    }
    return out;
}

double ChoiceDistribution::at(const FeatureId& id) const
{
    auto it = probs.find(id);
    return it == probs.end() ? 0.0 : it->second;
}

Point ChoiceDistribution::mean(const std::map<FeatureId, Point>& coords) const
{
    Point out;
    for (const auto& [id, p] : probs) {
        auto it = coords.find(id);
        if (it == coords.end()) {
            throw Error(ErrorCode::UnknownFeature, id.str());
        }
        if (out.size() == 0) {
            out = Point::Zero(it->second.size());
        }
        out += p * it->second;
    }
    return out;
}

FeasibilityReport check_menu_feasibility(const Dataset& data, const Tolerance& tol)
{
    FeasibilityReport report;
    for (const auto& set : data.sets()) {
        std::vector<Point> generators;
        for (const auto& id : set) {
            generators.push_back(data.singleton(id));
        }
        auto coefficients = convex_coefficients(*data.query(set), generators, tol);
        FeasibilityRow row{set, coefficients.has_value(), std::move(coefficients)};
        report.feasible = report.feasible && row.feasible;
        report.rows.push_back(std::move(row));
    }
    return report;
}

std::string_view to_string(LuceStatus status)
{
    switch (status) {
    case LuceStatus::Rationalizable: return "rationalizable";
    case LuceStatus::NotRationalizable: return "not_rationalizable";
    case LuceStatus::RichnessFailure: return "richness_failure";
    case LuceStatus::MissingData: return "missing_data";
    }
    return "not_rationalizable";
}

namespace {

// Reads a recovery outcome into a verdict; `strict` demands a single rank class.
void read_recovery(LuceVerdict& verdict, const Dataset& data, RecoveryOutcome outcome, bool strict)
{
    if (const auto* missing = outcome.missing()) {
        verdict.status = LuceStatus::MissingData;
        verdict.missing = missing->required;
    } else if (const auto* bad = outcome.non_representable()) {
        verdict.status = LuceStatus::NotRationalizable;
        verdict.counterexample = bad->witness;
    } else {
        const Representation& rep = outcome.recovered()->rep;
        if (strict && !rep.single_class()) {
            verdict.status = LuceStatus::NotRationalizable;
            verdict.counterexample = strictness_witness(data, rep);
        } else {
            verdict.status = LuceStatus::Rationalizable;
            for (const auto& [id, traits] : rep.entries()) {
                verdict.weights[id] = traits.weight;
                verdict.ranks[id] = traits.rank;
            }
        }
    }
    verdict.recovery = std::move(outcome);
}

} // namespace

LuceVerdict recover_luce(const Dataset& data, const Tolerance& tol)
{
    LuceVerdict verdict;
    verdict.rich = check_richness(data, tol);
    if (!verdict.rich) {
        verdict.status = LuceStatus::RichnessFailure;
        return verdict;
    }
    read_recovery(verdict, data, recover(data, RecoveryOptions{tol, {}}), true);
    return verdict;
}

TwoStageVerdict recover_two_stage_luce(const Dataset& data, const Tolerance& tol)
{
    TwoStageVerdict verdict;
    verdict.luce.rich = check_richness(data, tol);
    try {
        verdict.strongly_rich = check_strong_richness(data, tol).satisfied;
    } catch (const MissingDataError&) {
        verdict.strongly_rich = false;
    }
    read_recovery(verdict.luce, data, recover(data, RecoveryOptions{tol, {}}), false);
    return verdict;
}

ChoiceDistribution choice_probabilities(const WeightMap& weights, const RankMap& ranks, const FeatureSet& menu)
{
    if (menu.empty()) {
        throw Error(ErrorCode::InvalidInput, "empty menu");
    }
    auto lookup = [](const auto& table, const FeatureId& id) {
        auto it = table.find(id);
        if (it == table.end()) {
            throw Error(ErrorCode::UnknownFeature, id.str());
        }
        return it->second;
    };
    int top = lookup(ranks, *menu.begin());
    for (const auto& id : menu) {
        top = std::max(top, lookup(ranks, id));
    }
    double total = 0.0;
    for (const auto& id : menu) {
        if (lookup(ranks, id) == top) {
            total += lookup(weights, id);
        }
    }
    ChoiceDistribution out;
    for (const auto& id : menu) {
        out.probs[id] = lookup(ranks, id) == top ? lookup(weights, id) / total : 0.0;
    }
    return out;
}

MenuOracle make_luce_menu_oracle(std::vector<std::pair<Point, double>> known, double fresh_weight, const Tolerance& tol)
{
    return [known = std::move(known), fresh_weight, tol](const std::vector<Point>& menu) -> std::optional<Point> {
        if (menu.empty()) {
            return std::nullopt;
        }
        Point sum = Point::Zero(menu.front().size());
        double total = 0.0;
        for (const auto& p : menu) {
            double w = fresh_weight;
            for (const auto& [q, wq] : known) {
                if (q.size() == p.size() && coincident(p, q, tol)) {
                    w = wq;
                    break;
                }
            }
            sum += w * p;
            total += w;
        }
        return Point(sum / total);
    };
}

MenuOracle make_dictatorial_oracle(std::vector<std::pair<Point, int>> priority, const Tolerance& tol)
{
    return [priority = std::move(priority), tol](const std::vector<Point>& menu) -> std::optional<Point> {
        std::optional<std::pair<int, Point>> best;
        for (const auto& p : menu) {
            auto it = std::find_if(priority.begin(), priority.end(),
                [&](const auto& entry) { return entry.first.size() == p.size() && coincident(p, entry.first, tol); });
            if (it == priority.end()) {
                return std::nullopt;
            }
            if (!best || it->second > best->first) {
                best.emplace(it->second, p);
            }
        }
        if (!best) {
            return std::nullopt;
        }
        return best->second;
    };
}

PathIndependenceReport check_path_independence(const MenuOracle& oracle, const std::map<FeatureId, Point>& coords,
    const std::vector<std::pair<FeatureSet, FeatureSet>>& pairs, const Tolerance& tol)
{
    auto points_of = [&](const FeatureSet& set) {
        Menu menu{set, coords};
        menu.validate();
        return menu.points();
    };
    auto ask = [&](const std::vector<Point>& menu, const std::string& label) {
        auto value = oracle(menu);
        if (!value) {
            throw Error(ErrorCode::OracleRefused, "oracle cannot price " + label);
        }
        return *value;
    };
    PathIndependenceReport report;
    for (const auto& [a, b] : pairs) {
        if (!a.disjoint(b)) {
            throw Error(ErrorCode::InvalidInput, "menus " + a.str() + " and " + b.str() + " overlap");
        }
        const FeatureSet both = a.united(b);
        const Point fa = ask(points_of(a), a.str());
        const Point fb = ask(points_of(b), b.str());
        PathRow row{a, b, ask(points_of(both), both.str()), {}, 0.0, true};
        row.composed = ask({fa, fb}, "{f(" + a.str() + "),f(" + b.str() + ")}");
        row.residual = distance(row.direct, row.composed);
        row.passed = row.residual <= tol.bound(std::max(row.direct.norm(), row.composed.norm()));
        report.max_residual = std::max(report.max_residual, row.residual);
        report.satisfied = report.satisfied && row.passed;
        report.rows.push_back(std::move(row));
    }
    return report;
}

BoundaryReport boundary_diagnostic(const Dataset& data, const Tolerance& tol)
{
    BoundaryReport report;
    report.strict_evidence = check_axiom(data, AxiomMode::StrictWeighted, tol).satisfied;
    if (!report.strict_evidence) {
        const auto outcome = recover(data, RecoveryOptions{tol, {}});
        report.strict_evidence = outcome.recovered() != nullptr && outcome.recovered()->rep.single_class();
    }
    for (const auto& set : data.sets()) {
        if (set.size() < 2) {
            continue;
        }
        std::vector<Point> generators;
        for (const auto& id : set) {
            generators.push_back(data.singleton(id));
        }
        BoundaryRow row{set, false, false, false};
        try {
            row.on_boundary = !relative_interior_check(*data.query(set), generators, tol);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::NotInConvexHull) {
                throw;
            }
            row.outside = true;
        }
        if (row.on_boundary || row.outside) {
            row.contradiction = report.strict_evidence;
            report.contradictions += row.contradiction ? 1 : 0;
            report.flagged.push_back(std::move(row));
        }
    }
    return report;
}

} // namespace aggkit
