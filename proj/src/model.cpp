#include "aggkit/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace aggkit {

Representation::Representation(std::map<FeatureId, FeatureTraits> entries) : entries_(std::move(entries))
{
    if (entries_.empty()) {
        throw Error(ErrorCode::InvalidInput, "representation has no features");
    }
    dimension_ = static_cast<std::size_t>(entries_.begin()->second.outcome.size());
    for (const auto& [id, t] : entries_) {
        if (!(t.weight > 0.0) || !std::isfinite(t.weight)) {
            throw Error(ErrorCode::InvalidInput, "weight of " + id.str() + " must be strictly positive");
        }
        require_finite(t.outcome);
        if (static_cast<std::size_t>(t.outcome.size()) != dimension_) {
            throw Error(ErrorCode::DimensionMismatch, "outcome of " + id.str());
        }
    }
}

const FeatureTraits& Representation::at(const FeatureId& id) const
{
    auto it = entries_.find(id);
    if (it == entries_.end()) {
        throw Error(ErrorCode::UnknownFeature, id.str());
    }
    return it->second;
}

std::vector<FeatureId> Representation::features() const
{
    std::vector<FeatureId> out;
    for (const auto& entry : entries_) {
        out.push_back(entry.first);
    }
    return out;
}

std::vector<int> Representation::rank_levels() const
{
    std::set<int> levels;
    for (const auto& entry : entries_) {
        levels.insert(entry.second.rank);
    }
    return {levels.begin(), levels.end()};
}

std::vector<FeatureId> Representation::class_members(int rank) const
{
    std::vector<FeatureId> out;
    for (const auto& [id, t] : entries_) {
        if (t.rank == rank) {
            out.push_back(id);
        }
    }
    return out;
}

Representation Representation::normalized(const Tolerance& tol) const
{
    auto copy = entries_;
    for (int level : rank_levels()) {
        const auto members = class_members(level);
        std::map<FeatureId, Point> outcomes;
        for (const auto& id : members) {
            outcomes.emplace(id, entries_.at(id).outcome);
        }
        const double scale = entries_.at(class_anchor(members, outcomes, tol)).weight;
        for (const auto& id : members) {
            copy.at(id).weight /= scale;
        }
    }
    return Representation(std::move(copy));
}

FeatureId class_anchor(const std::vector<FeatureId>& sorted_members,
    const std::map<FeatureId, Point>& outcomes, const Tolerance& tol)
{
    if (sorted_members.empty()) {
        throw Error(ErrorCode::InvalidInput, "empty class");
    }
    for (const auto& candidate : sorted_members) {
        for (const auto& other : sorted_members) {
            if (!coincident(outcomes.at(candidate), outcomes.at(other), tol)) {
                return candidate;
            }
        }
    }
    return sorted_members.front();
}

FeatureSet top_set(const Representation& rep, const FeatureSet& set)
{
    int best = 0;
    bool first = true;
    for (const auto& id : set) {
        const int r = rep.rank(id);
        if (first || r > best) {
            best = r;
            first = false;
        }
    }
    std::vector<FeatureId> top;
    for (const auto& id : set) {
        if (rep.rank(id) == best) {
            top.push_back(id);
        }
    }
    return FeatureSet(std::move(top));
}

Point evaluate(const Representation& rep, const FeatureSet& set)
{
    const FeatureSet top = top_set(rep, set);
    Point sum = Point::Zero(static_cast<Eigen::Index>(rep.dimension()));
    double total = 0.0;
    for (const auto& id : top) {
        const auto& t = rep.at(id);
        sum += t.weight * t.outcome;
        total += t.weight;
    }
    return sum / total;
}

std::string_view to_string(AxiomMode mode)
{
    switch (mode) {
    case AxiomMode::Weighted: return "weighted";
    case AxiomMode::StrictWeighted: return "strict";
    case AxiomMode::ExtremeWeighted: return "extreme";
    }
    return "weighted";
}

std::optional<AxiomMode> parse_axiom_mode(std::string_view text)
{
    if (text == "weighted") {
        return AxiomMode::Weighted;
    }
    if (text == "strict") {
        return AxiomMode::StrictWeighted;
    }
    if (text == "extreme") {
        return AxiomMode::ExtremeWeighted;
    }
    return std::nullopt;
}

bool axiom_admits(AxiomMode mode, const SegmentCoefficient& coefficient, const Point& joint,
    const Point& a, const Point&, const Tolerance& tol)
{
    if (const auto* d = std::get_if<Degenerate>(&coefficient)) {
        return d->residual <= tol.bound(std::max(joint.norm(), a.norm()));
    }
    const auto* on = std::get_if<OnSegment>(&coefficient);
    if (on == nullptr) {
        return false;
    }
    const double slack = tol.slack();
    switch (mode) {
    case AxiomMode::Weighted: return true;
    case AxiomMode::StrictWeighted: return on->lambda > slack && on->lambda < 1.0 - slack;
    case AxiomMode::ExtremeWeighted: return on->lambda <= slack || on->lambda >= 1.0 - slack;
    }
    return false;
}

AxiomReport check_axiom(const Dataset& data, AxiomMode mode, const Tolerance& tol)
{
    AxiomReport report;
    report.mode = mode;
    const auto sets = data.sets();
    const auto& outcomes = data.outcomes();
    for (std::size_t i = 0; i < sets.size(); ++i) {
        for (std::size_t j = i + 1; j < sets.size(); ++j) {
            const FeatureSet& a = sets[i];
            const FeatureSet& b = sets[j];
            if (!a.disjoint(b)) {
                continue;
            }
            auto joint = outcomes.find(a.united(b));
            if (joint == outcomes.end()) {
                continue;
            }
            const Point& fa = outcomes.at(a);
            const Point& fb = outcomes.at(b);
            const auto coefficient = segment_coefficient(joint->second, fa, fb, tol);
            AxiomCheck check{a, b, std::nullopt, 0.0, false, false};
            std::visit(
                [&](const auto& c) {
                    using T = std::decay_t<decltype(c)>;
                    check.residual = c.residual;
                    if constexpr (std::is_same_v<T, OnSegment>) {
                        check.lambda = c.lambda;
                    } else if constexpr (std::is_same_v<T, OffLine>) {
                        check.lambda = c.raw_lambda;
                        check.collinear_outside = c.collinear;
                    }
                },
                coefficient);
            check.passed = axiom_admits(mode, coefficient, joint->second, fa, fb, tol);
            if (!check.passed) {
                report.violations.push_back(check);
            }
            report.checks.push_back(std::move(check));
        }
    }
    report.satisfied = report.violations.empty();
    return report;
}

bool check_richness(const Dataset& data, const Tolerance& tol)
{
    const auto range = data.range();
    if (range.empty()) {
        return false;
    }
    return affine_dimension(range, tol) >= 2;
}

StrongRichnessReport check_strong_richness(const Dataset& data, const Tolerance& tol)
{
    StrongRichnessReport report;
    std::set<FeatureSet> absent;
    const auto& features = data.features();
    for (const auto& x : features) {
        const Point fx = data.singleton(x);
        std::vector<FeatureId> companions;
        std::vector<FeatureSet> missing_here;
        for (const auto& y : features) {
            if (y == x) {
                continue;
            }
            const FeatureSet pair{x, y};
            const auto fxy = data.query(pair);
            if (!fxy) {
                missing_here.push_back(pair);
                continue;
            }
            const Point fy = data.singleton(y);
            if (!coincident(*fxy, fx, tol) && !coincident(*fxy, fy, tol)) {
                companions.push_back(y);
            }
        }
        StrongRichnessEntry entry{x, false, std::nullopt, std::nullopt};
        for (std::size_t i = 0; i < companions.size() && !entry.witnessed; ++i) {
            for (std::size_t j = i + 1; j < companions.size(); ++j) {
                const std::vector<Point> triple{fx, data.singleton(companions[i]), data.singleton(companions[j])};
                if (affine_dimension(triple, tol) == 2) {
                    entry.witnessed = true;
                    entry.first = companions[i];
                    entry.second = companions[j];
                    break;
                }
            }
        }
        if (!entry.witnessed) {
            absent.insert(missing_here.begin(), missing_here.end());
        }
        report.entries.push_back(std::move(entry));
    }
    if (!absent.empty()) {
        throw MissingDataError({absent.begin(), absent.end()},
            "strong richness undecided: " + std::to_string(absent.size()) + " pair sets absent");
    }
    report.satisfied = std::all_of(
        report.entries.begin(), report.entries.end(), [](const auto& e) { return e.witnessed; });
    return report;
}

} // namespace aggkit
