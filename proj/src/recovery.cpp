#include "aggkit/recovery.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace aggkit {

std::string_view to_string(WitnessKind kind)
{
    switch (kind) {
    case WitnessKind::RatioConflict: return "ratio_conflict";
    case WitnessKind::AxiomViolation: return "axiom_violation";
    case WitnessKind::Intransitivity: return "intransitivity";
    case WitnessKind::ExtremeLambda: return "extreme_lambda";
    case WitnessKind::VerificationFailure: return "verification_failure";
    }
    return "verification_failure";
}

namespace {

// Singleton and pair lookups that remember which sets were unavailable.
class PairTable {
public:
    PairTable(const AggregationSource& src) : src_(src)
    {
        for (const auto& id : src.features()) {
            auto p = src.query(FeatureSet::singleton(id));
            if (!p) {
                missing_.insert(FeatureSet::singleton(id));
                continue;
            }
            singles_.emplace(id, std::move(*p));
        }
        throw_if_missing("singleton outcomes unavailable");
    }

    const Point& single(const FeatureId& id) const { return singles_.at(id); }
    const std::map<FeatureId, Point>& singles() const { return singles_; }

    const Point* pair(const FeatureId& a, const FeatureId& b)
    {
        const FeatureSet key{a, b};
        auto it = pairs_.find(key);
        if (it == pairs_.end()) {
            it = pairs_.emplace(key, src_.query(key)).first;
            if (!it->second) {
                missing_.insert(key);
            }
        }
        return it->second ? &*it->second : nullptr;
    }

    void throw_if_missing(const std::string& what) const
    {
        if (!missing_.empty()) {
            throw MissingDataError({missing_.begin(), missing_.end()}, what);
        }
    }

private:
    const AggregationSource& src_;
    std::map<FeatureId, Point> singles_;
    std::map<FeatureSet, std::optional<Point>> pairs_;
    std::set<FeatureSet> missing_;
};

// f({x,z}) differs from both endpoints: x and z share a class.
bool interior(PairTable& table, const FeatureId& x, const FeatureId& z, const Tolerance& tol)
{
    const Point* fxz = table.pair(x, z);
    return fxz != nullptr && !coincident(*fxz, table.single(x), tol) && !coincident(*fxz, table.single(z), tol);
}

std::optional<FeatureId> interior_companion(
    PairTable& table, const std::vector<FeatureId>& features, const FeatureId& x, const FeatureId& skip,
    const Tolerance& tol)
{
    for (const auto& z : features) {
        if (z == x || z == skip) {
            continue;
        }
        if (!coincident(table.single(z), table.single(x), tol) && interior(table, x, z, tol)) {
            return z;
        }
    }
    return std::nullopt;
}

// x >= y when f(x) = f(y): route through a classmate witness of x, or of y.
bool dominates_equal_outcome(PairTable& table, const std::vector<FeatureId>& features,
    const FeatureId& x, const FeatureId& y, const Tolerance& tol)
{
    if (auto z = interior_companion(table, features, x, y, tol)) {
        const Point* fzy = table.pair(*z, y);
        return fzy != nullptr && !coincident(*fzy, table.single(y), tol);
    }
    if (auto z = interior_companion(table, features, y, x, tol)) {
        const Point* fxz = table.pair(x, *z);
        return fxz != nullptr && !coincident(*fxz, table.single(*z), tol);
    }
    return true;
}

WitnessError intransitivity(const FeatureId& x, const FeatureId& y, const FeatureId& z, const std::string& detail)
{
    Witness w;
    w.kind = WitnessKind::Intransitivity;
    w.features = {x, y, z};
    w.sets = {FeatureSet{x, y}, FeatureSet{y, z}, FeatureSet{x, z}};
    w.description = detail;
    return WitnessError(ErrorCode::IntransitivityDetected, std::move(w));
}

// w(p)/w(q) from the pair aggregate, when the pair pins it.
std::optional<double> pair_ratio(PairTable& table, const FeatureId& p, const FeatureId& q, const Tolerance& tol)
{
    const Point& fp = table.single(p);
    const Point& fq = table.single(q);
    if (coincident(fp, fq, tol)) {
        return std::nullopt;
    }
    const Point* fpq = table.pair(p, q);
    if (fpq == nullptr) {
        return std::nullopt;
    }
    const auto c = segment_coefficient(*fpq, fp, fq, tol);
    const auto* on = std::get_if<OnSegment>(&c);
    if (on == nullptr || on->lambda <= tol.slack() || on->lambda >= 1.0 - tol.slack()) {
        return std::nullopt;
    }
    return on->lambda / (1.0 - on->lambda);
}

std::optional<Witness> find_ratio_conflict(PairTable& table, const RankMap& order, const Tolerance& tol)
{
    std::map<int, std::vector<FeatureId>> classes;
    for (const auto& [id, rank] : order) {
        classes[rank].push_back(id);
    }
    std::optional<Witness> best;
    double best_gap = tol.slack();
    for (const auto& [rank, members] : classes) {
        const std::size_t n = members.size();
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                for (std::size_t k = j + 1; k < n; ++k) {
                    const auto& a = members[i];
                    const auto& b = members[j];
                    const auto& c = members[k];
                    const auto ab = pair_ratio(table, a, b, tol);
                    const auto bc = pair_ratio(table, b, c, tol);
                    const auto ac = pair_ratio(table, a, c, tol);
                    if (!ab || !bc || !ac) {
                        continue;
                    }
                    const double chained = *ab * *bc;
                    const double gap = std::abs(*ac - chained) / std::max(*ac, chained);
                    if (gap > best_gap) {
                        best_gap = gap;
                        Witness w;
                        w.kind = WitnessKind::RatioConflict;
                        w.features = {a, c, b};
                        w.sets = {FeatureSet{a, b}, FeatureSet{b, c}, FeatureSet{a, c}};
                        w.chained = RatioDerivation{chained, {FeatureSet{a, b}, FeatureSet{b, c}}};
                        w.direct = RatioDerivation{*ac, {FeatureSet{a, c}}};
                        w.residual = gap;
                        w.description = "w(" + a.str() + ")/w(" + c.str() + ") is " + std::to_string(chained)
                            + " through " + b.str() + " but " + std::to_string(*ac) + " from "
                            + FeatureSet{a, c}.str();
                        best = std::move(w);
                    }
                }
            }
        }
    }
    return best;
}

// Fallback witness: the first failing set, with the ratio its split implies when available.
Witness verification_witness(const AggregationSource& src, const Representation& rep,
    const VerificationRow& row, const Tolerance& tol)
{
    Witness w;
    w.kind = WitnessKind::VerificationFailure;
    w.sets = {row.set};
    w.residual = row.residual;
    w.description = "forward evaluation misses " + row.set.str() + " by " + std::to_string(row.residual);
    if (row.set.size() < 2) {
        return w;
    }
    const auto joint = src.query(row.set);
    for (const auto& a : row.set) {
        const FeatureSet rest = row.set.without(a);
        const auto frest = src.query(rest);
        if (!joint || !frest) {
            continue;
        }
        const auto c = segment_coefficient(*joint, rep.outcome(a), *frest, tol);
        const auto* on = std::get_if<OnSegment>(&c);
        if (on == nullptr || on->lambda <= tol.slack() || on->lambda >= 1.0 - tol.slack()) {
            continue;
        }
        double rest_weight = 0.0;
        for (const auto& id : top_set(rep, rest)) {
            rest_weight += rep.weight(id);
        }
        w.features = {a};
        w.direct = RatioDerivation{on->lambda / (1.0 - on->lambda), {FeatureSet::singleton(a), rest, row.set}};
        w.chained = RatioDerivation{rep.weight(a) / rest_weight, {}};
        break;
    }
    return w;
}

} // namespace

RankMap recover_order(const AggregationSource& src, const Tolerance& tol)
{
    PairTable table(src);
    const auto& features = src.features();
    const std::size_t n = features.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            table.pair(features[i], features[j]);
        }
    }
    table.throw_if_missing("pair aggregates needed to order the features are absent");

    std::vector<std::vector<bool>> geq(n, std::vector<bool>(n, true));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const auto& x = features[i];
            const auto& y = features[j];
            const Point& fx = table.single(x);
            const Point& fy = table.single(y);
            if (!coincident(fx, fy, tol)) {
                const Point& fxy = *table.pair(x, y);
                geq[i][j] = !coincident(fxy, fy, tol);
                geq[j][i] = !coincident(fxy, fx, tol);
            } else {
                geq[i][j] = dominates_equal_outcome(table, features, x, y, tol);
                geq[j][i] = dominates_equal_outcome(table, features, y, x, tol);
                if (!geq[i][j] && !geq[j][i]) {
                    throw intransitivity(x, y, x,
                        "features " + x.str() + " and " + y.str() + " each rank strictly below the other");
                }
            }
        }
    }
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
            for (std::size_t c = 0; c < n; ++c) {
                if (geq[a][b] && geq[b][c] && !geq[a][c]) {
                    throw intransitivity(features[a], features[b], features[c],
                        features[a].str() + " >= " + features[b].str() + " >= " + features[c].str() + " but "
                            + features[c].str() + " > " + features[a].str());
                }
            }
        }
    }
    // rank = number of features strictly below, compressed to dense levels
    std::vector<std::size_t> below(n, 0);
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
            if (geq[a][b] && !geq[b][a]) {
                ++below[a];
            }
        }
    }
    std::vector<std::size_t> levels(below.begin(), below.end());
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    RankMap ranks;
    for (std::size_t a = 0; a < n; ++a) {
        ranks[features[a]] = static_cast<int>(
            std::lower_bound(levels.begin(), levels.end(), below[a]) - levels.begin());
    }
    return ranks;
}

WeightRecovery recover_weights(const AggregationSource& src, const RankMap& order, const Tolerance& tol)
{
    PairTable table(src);
    WeightRecovery out;
    std::map<int, std::vector<FeatureId>> classes;
    for (const auto& [id, rank] : order) {
        classes[rank].push_back(id);
    }
    auto ratio_from = [&](const FeatureId& base, const FeatureId& y) -> std::optional<double> {
        const Point* pair = table.pair(base, y);
        if (pair == nullptr) {
            return std::nullopt;
        }
        const auto c = segment_coefficient(*pair, table.single(base), table.single(y), tol);
        const auto* on = std::get_if<OnSegment>(&c);
        if (on == nullptr) {
            Witness w;
            w.kind = WitnessKind::AxiomViolation;
            w.features = {base, y};
            w.sets = {FeatureSet::singleton(base), FeatureSet::singleton(y), FeatureSet{base, y}};
            w.residual = std::visit([](const auto& v) { return v.residual; }, c);
            w.description = FeatureSet{base, y}.str() + " is off the segment between its singletons";
            throw WitnessError(ErrorCode::PreconditionFailed, std::move(w));
        }
        if (on->lambda <= tol.slack() || on->lambda >= 1.0 - tol.slack()) {
            Witness w;
            w.kind = WitnessKind::ExtremeLambda;
            w.features = {base, y};
            w.sets = {FeatureSet{base, y}};
            w.residual = on->lambda;
            w.description = "extreme lambda on pair " + FeatureSet{base, y}.str() + " inside one rank class";
            throw WitnessError(ErrorCode::DegenerateLambda, std::move(w));
        }
        return (1.0 - on->lambda) / on->lambda;
    };

    for (const auto& [rank, members] : classes) {
        std::map<FeatureId, Point> outcomes;
        for (const auto& id : members) {
            outcomes.emplace(id, table.single(id));
        }
        const FeatureId anchor = class_anchor(members, outcomes, tol);
        out.anchors[rank] = anchor;
        out.weights[anchor] = 1.0;
        const Point& f0 = outcomes.at(anchor);
        std::vector<FeatureId> bridged;
        std::optional<FeatureId> bridge;
        for (const auto& y : members) {
            if (y == anchor) {
                continue;
            }
            if (coincident(outcomes.at(y), f0, tol)) {
                bridged.push_back(y);
                continue;
            }
            if (!bridge) {
                bridge = y;
            }
            if (auto r = ratio_from(anchor, y)) {
                out.weights[y] = *r;
            }
        }
        if (!bridge) {
            for (const auto& y : bridged) {
                out.weights[y] = 1.0;
            }
            if (members.size() > 1) {
                out.indeterminate_classes.push_back(rank);
            }
            continue;
        }
        for (const auto& y : bridged) {
            if (auto r = ratio_from(*bridge, y); r && out.weights.count(*bridge)) {
                out.weights[y] = out.weights.at(*bridge) * *r;
            }
        }
    }
    table.throw_if_missing("pair aggregates needed for the weight ratios are absent");
    return out;
}

RecoveryOutcome recover(const AggregationSource& src, const RecoveryOptions& options)
{
    const Tolerance& tol = options.tol;
    RecoveryOutcome outcome;
    auto finish = [&](auto result) {
        outcome.result = std::move(result);
        if (const auto* oracle = dynamic_cast<const OracleSource*>(&src)) {
            outcome.query_plan = oracle->query_plan();
        }
        return outcome;
    };

    RankMap order;
    WeightRecovery weights;
    try {
        order = recover_order(src, tol);
        weights = recover_weights(src, order, tol);
    } catch (const MissingDataError& e) {
        return finish(MissingData{e.required()});
    } catch (const WitnessError& e) {
        return finish(NonRepresentable{e.witness(), {}});
    }

    std::map<FeatureId, FeatureTraits> entries;
    for (const auto& [id, rank] : order) {
        entries.emplace(id, FeatureTraits{weights.weights.at(id), rank, src.singleton(id)});
    }
    Representation rep(std::move(entries));

    std::vector<FeatureSet> targets;
    if (const auto* data = dynamic_cast<const Dataset*>(&src)) {
        targets = data->sets();
    } else if (const auto* oracle = dynamic_cast<const OracleSource*>(&src)) {
        targets = oracle->query_plan();
    }
    targets.insert(targets.end(), options.validation_sets.begin(), options.validation_sets.end());
    std::sort(targets.begin(), targets.end());
    targets.erase(std::unique(targets.begin(), targets.end()), targets.end());

    std::vector<VerificationRow> rows;
    std::vector<FeatureSet> absent;
    double max_residual = 0.0;
    const VerificationRow* first_failure = nullptr;
    for (const auto& set : targets) {
        const auto observed = src.query(set);
        if (!observed) {
            absent.push_back(set);
            continue;
        }
        const Point predicted = evaluate(rep, set);
        const double residual = (predicted - *observed).norm();
        const bool passed = residual <= tol.bound(std::max(predicted.norm(), observed->norm()));
        rows.push_back({set, residual, passed});
        max_residual = std::max(max_residual, residual);
    }
    if (!absent.empty()) {
        return finish(MissingData{absent});
    }
    for (const auto& row : rows) {
        if (!row.passed) {
            first_failure = &row;
            break;
        }
    }
    if (first_failure == nullptr) {
        return finish(Recovered{std::move(rep), std::move(rows), max_residual, weights.indeterminate_classes});
    }
    PairTable table(src);
    Witness witness;
    if (auto conflict = find_ratio_conflict(table, order, tol)) {
        witness = std::move(*conflict);
    } else {
        witness = verification_witness(src, rep, *first_failure, tol);
    }
    return finish(NonRepresentable{std::move(witness), std::move(rows)});
}

ContinuityReport continuity_diagnostic(const MetricFeatureSpace& space, const Representation& rep, double radius)
{
    if (!(radius > 0.0)) {
        throw Error(ErrorCode::InvalidInput, "radius must be positive");
    }
    ContinuityReport report;
    for (auto i = space.begin(); i != space.end(); ++i) {
        for (auto j = std::next(i); j != space.end(); ++j) {
            const double d = distance(i->second, j->second);
            if (!(d < radius)) {
                continue;
            }
            ContinuityRow row{i->first, j->first, d, false, std::nullopt};
            if (rep.rank(i->first) != rep.rank(j->first)) {
                row.rank_disagreement = true;
                ++report.rank_disagreements;
            } else {
                const double dev = std::abs(rep.weight(i->first) / rep.weight(j->first) - 1.0);
                row.ratio_deviation = dev;
                report.max_ratio_deviation = std::max(report.max_ratio_deviation, dev);
            }
            report.rows.push_back(std::move(row));
        }
    }
    return report;
}

std::optional<Witness> strictness_witness(const AggregationSource& src, const Representation& rep)
{
    const auto features = rep.features();
    for (std::size_t i = 0; i < features.size(); ++i) {
        for (std::size_t j = i + 1; j < features.size(); ++j) {
            const auto& x = features[i];
            const auto& y = features[j];
            if (rep.rank(x) == rep.rank(y) || !src.query(FeatureSet{x, y})) {
                continue;
            }
            Witness w;
            w.kind = WitnessKind::ExtremeLambda;
            w.features = {x, y};
            w.sets = {FeatureSet{x, y}};
            w.residual = rep.rank(x) > rep.rank(y) ? 1.0 : 0.0;
            w.description = "extreme lambda on pair " + FeatureSet{x, y}.str() + ": the aggregate equals f("
                + (rep.rank(x) > rep.rank(y) ? x : y).str() + "), contradicting strict averaging";
            return w;
        }
    }
    return std::nullopt;
}


} // namespace aggkit
