#include "aggkit/belief.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace aggkit {

BeliefValidation validate_belief(const Point& p, double simplex_tol)
{
    require_finite(p);
    if ((p.array() < -simplex_tol).any()) {
        throw Error(ErrorCode::NotABelief, "negative probability");
    }
    Point clamped = p.cwiseMax(0.0);
    const double sum = clamped.sum();
    if (std::abs(sum - 1.0) > simplex_tol) {
        throw Error(ErrorCode::NotABelief, "probabilities sum to " + std::to_string(sum));
    }
    return {clamped / sum, sum - 1.0};
}

JointProbability::JointProbability(std::vector<FeatureId> features, Eigen::MatrixXd table)
    : features_(std::move(features)), table_(std::move(table))
{
    if (static_cast<Eigen::Index>(features_.size()) != table_.cols()) {
        throw Error(ErrorCode::DimensionMismatch, "joint table columns do not match features");
    }
}

std::size_t JointProbability::column(const FeatureId& id) const
{
    auto it = std::lower_bound(features_.begin(), features_.end(), id);
    if (it == features_.end() || *it != id) {
        throw Error(ErrorCode::UnknownFeature, id.str());
    }
    return static_cast<std::size_t>(it - features_.begin());
}

double JointProbability::cell(std::size_t state, const FeatureId& id) const
{
    return table_(static_cast<Eigen::Index>(state), static_cast<Eigen::Index>(column(id)));
}

double JointProbability::mass(const std::vector<bool>& states, const FeatureSet& set) const
{
    double total = 0.0;
    for (const auto& id : set) {
        const auto c = static_cast<Eigen::Index>(column(id));
        for (std::size_t s = 0; s < states.size(); ++s) {
            if (states[s]) {
                total += table_(static_cast<Eigen::Index>(s), c);
            }
        }
    }
    return total;
}

double JointProbability::marginal(const FeatureSet& set) const
{
    return mass(std::vector<bool>(this->states(), true), set);
}

Point JointProbability::conditional(const FeatureSet& set) const
{
    Point out = Point::Zero(table_.rows());
    for (const auto& id : set) {
        out += table_.col(static_cast<Eigen::Index>(column(id)));
    }
    return out / out.sum();
}

JointProbability build_joint(const Representation& rep)
{
    if (!rep.single_class()) {
        throw Error(ErrorCode::MultipleRankClasses, "a joint probability needs a single rank class; use build_cps");
    }
    const auto features = rep.features();
    Eigen::MatrixXd table(static_cast<Eigen::Index>(rep.dimension()), static_cast<Eigen::Index>(features.size()));
    double total = 0.0;
    for (const auto& id : features) {
        total += rep.weight(id);
    }
    for (std::size_t j = 0; j < features.size(); ++j) {
        const Point belief = validate_belief(rep.outcome(features[j])).probs;
        table.col(static_cast<Eigen::Index>(j)) = rep.weight(features[j]) * belief / total;
    }
    return JointProbability(features, std::move(table));
}

namespace {

// Every subset of states as a mask; singletons only when there are too many states.
std::vector<std::vector<bool>> state_events(std::size_t n)
{
    std::vector<std::vector<bool>> out;
    if (n <= 12) {
        for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
            std::vector<bool> event(n);
            for (std::size_t s = 0; s < n; ++s) {
                event[s] = (mask >> s) & 1U;
            }
            out.push_back(std::move(event));
        }
        return out;
    }
    for (std::size_t s = 0; s < n; ++s) {
        std::vector<bool> event(n, false);
        event[s] = true;
        out.push_back(std::move(event));
    }
    return out;
}

double event_probability(const Point& belief, const std::vector<bool>& event)
{
    double total = 0.0;
    for (std::size_t s = 0; s < event.size(); ++s) {
        if (event[s]) {
            total += belief[static_cast<Eigen::Index>(s)];
        }
    }
    return total;
}

} // namespace

BayesianVerdict check_bayesian(const Dataset& data, const Tolerance& tol)
{
    for (const auto& [set, outcome] : data.outcomes()) {
        validate_belief(outcome);
    }
    BayesianVerdict verdict;
    verdict.rich = check_richness(data, tol);
    verdict.recovery = recover(data, RecoveryOptions{tol, {}});
    const auto* rec = verdict.recovery.recovered();
    if (rec == nullptr) {
        if (const auto* bad = verdict.recovery.non_representable()) {
            verdict.counterexample = bad->witness;
        }
        return verdict;
    }
    if (!rec->rep.single_class()) {
        verdict.counterexample = strictness_witness(data, rec->rep);
        return verdict;
    }
    JointProbability joint = build_joint(rec->rep);
    const auto events = state_events(joint.states());
    for (const auto& [set, outcome] : data.outcomes()) {
        const double px = joint.marginal(set);
        double worst = 0.0;
        for (const auto& event : events) {
            worst = std::max(worst, std::abs(event_probability(outcome, event) - joint.mass(event, set) / px));
        }
        verdict.rows.push_back({set, worst, worst <= tol.bound(1.0)});
        verdict.max_residual = std::max(verdict.max_residual, worst);
    }
    verdict.bayesian = std::all_of(verdict.rows.begin(), verdict.rows.end(), [](const auto& r) { return r.passed; });
    verdict.certified = verdict.bayesian && verdict.rich
        && data.outcomes().size() == (std::size_t{1} << data.features().size()) - 1;
    verdict.joint = std::move(joint);
    return verdict;
}

std::size_t ConditionalProbabilitySystem::column(const FeatureId& id) const
{
    auto it = std::lower_bound(features.begin(), features.end(), id);
    if (it == features.end() || *it != id) {
        throw Error(ErrorCode::UnknownFeature, id.str());
    }
    return static_cast<std::size_t>(it - features.begin());
}

Point ConditionalProbabilitySystem::belief(const FeatureSet& set) const
{
    const auto& table = conditionals.at(set);
    Point out = Point::Zero(static_cast<Eigen::Index>(states));
    for (const auto& id : set) {
        out += table.col(static_cast<Eigen::Index>(column(id)));
    }
    return out;
}

ConditionalProbabilitySystem build_cps(const Representation& rep, const std::vector<FeatureSet>& events)
{
    ConditionalProbabilitySystem cps;
    cps.features = rep.features();
    cps.states = rep.dimension();
    std::map<FeatureId, Point> beliefs;
    for (const auto& id : cps.features) {
        beliefs.emplace(id, validate_belief(rep.outcome(id)).probs);
    }
    const auto sets = events.empty() ? all_subsets(cps.features) : events;
    for (const auto& set : sets) {
        const FeatureSet top = top_set(rep, set);
        double total = 0.0;
        for (const auto& id : top) {
            total += rep.weight(id);
        }
        Eigen::MatrixXd table = Eigen::MatrixXd::Zero(
            static_cast<Eigen::Index>(cps.states), static_cast<Eigen::Index>(cps.features.size()));
        for (const auto& id : top) {
            table.col(static_cast<Eigen::Index>(cps.column(id))) = rep.weight(id) * beliefs.at(id) / total;
        }
        cps.conditionals.emplace(set, std::move(table));
    }
    return cps;
}

std::string_view to_string(CpsViolation::Property property)
{
    switch (property) {
    case CpsViolation::Property::Nonnegative: return "nonnegative";
    case CpsViolation::Property::Normalization: return "normalization";
    case CpsViolation::Property::Support: return "support";
    case CpsViolation::Property::Chain: return "chain";
    }
    return "chain";
}

CpsReport verify_cps(const ConditionalProbabilitySystem& cps, const Tolerance& tol)
{
    CpsReport report;
    const double gate = tol.bound(1.0);
    auto record = [&](CpsViolation::Property property, const FeatureSet& a, std::optional<FeatureSet> b,
                      double residual) {
        report.max_residual = std::max(report.max_residual, residual);
        if (residual > gate) {
            report.violations.push_back({property, a, std::move(b), residual});
        }
    };
    // P_A(Omega x A) over the columns of A
    auto mass_on = [&](const Eigen::MatrixXd& table, const FeatureSet& set) {
        double total = 0.0;
        for (const auto& id : set) {
            total += table.col(static_cast<Eigen::Index>(cps.column(id))).sum();
        }
        return total;
    };
    for (const auto& [set, table] : cps.conditionals) {
        ++report.events_checked;
        record(CpsViolation::Property::Nonnegative, set, std::nullopt, std::max(0.0, -table.minCoeff()));
        const double inside = mass_on(table, set);
        record(CpsViolation::Property::Normalization, set, std::nullopt, std::abs(inside - 1.0));
        record(CpsViolation::Property::Support, set, std::nullopt, std::abs(table.sum() - inside));
    }
    std::vector<FeatureSet> stored;
    for (const auto& entry : cps.conditionals) {
        stored.push_back(entry.first);
    }
    for (std::size_t i = 0; i < stored.size(); ++i) {
        for (std::size_t j = i + 1; j < stored.size(); ++j) {
            const auto& a1 = stored[i];
            const auto& a2 = stored[j];
            if (!a1.disjoint(a2)) {
                continue;
            }
            auto joint = cps.conditionals.find(a1.united(a2));
            if (joint == cps.conditionals.end()) {
                continue;
            }
            ++report.pairs_checked;
            const Eigen::MatrixXd& pu = joint->second;
            const Eigen::MatrixXd expected
                = mass_on(pu, a1) * cps.conditionals.at(a1) + mass_on(pu, a2) * cps.conditionals.at(a2);
            record(CpsViolation::Property::Chain, a1, a2, (pu - expected).cwiseAbs().maxCoeff());
        }
    }
    report.valid = report.violations.empty();
    return report;
}

void TimedQuery::validate() const
{
    if (timing.size() != members.size()) {
        throw Error(ErrorCode::InvalidInput, "timing must be defined exactly on the members of " + members.str());
    }
    for (const auto& id : members) {
        auto it = timing.find(id);
        if (it == timing.end()) {
            throw Error(ErrorCode::InvalidInput, "no timing for " + id.str());
        }
        if (it->second < 1) {
            throw Error(ErrorCode::InvalidInput, "timings are positive integers");
        }
    }
}

TimedQuery TimedQuery::shifted(int c) const
{
    TimedQuery out = *this;
    for (auto& entry : out.timing) {
        entry.second += c;
    }
    return out;
}

TimedQuery TimedQuery::uniform(const FeatureSet& members, int t)
{
    TimedQuery out{members, {}};
    for (const auto& id : members) {
        out.timing[id] = t;
    }
    return out;
}

std::string TimedQuery::str() const
{
    std::string out = "{";
    bool first = true;
    for (const auto& [id, t] : timing) {
        if (!first) {
            out += ',';
        }
        first = false;
        out += id.str() + "@" + std::to_string(t);
    }
    return out + "}";
}

Point evaluate_discounted(double q, const WeightMap& weights, const std::map<FeatureId, Point>& beliefs,
    const TimedQuery& query)
{
    if (!(q > 0.0)) {
        throw Error(ErrorCode::InvalidInput, "discount factor must be positive");
    }
    query.validate();
    int earliest = query.timing.begin()->second;
    for (const auto& entry : query.timing) {
        earliest = std::min(earliest, entry.second);
    }
    Point sum;
    double total = 0.0;
    for (const auto& id : query.members) {
        auto w = weights.find(id);
        auto f = beliefs.find(id);
        if (w == weights.end() || f == beliefs.end()) {
            throw Error(ErrorCode::UnknownFeature, id.str());
        }
        const double factor = std::pow(q, query.timing.at(id) - earliest) * w->second;
        if (sum.size() == 0) {
            sum = Point::Zero(f->second.size());
        }
        sum += factor * f->second;
        total += factor;
    }
    return sum / total;
}

DiscountOutcome recover_discounted(const TimedOracle& oracle, const std::vector<FeatureId>& features,
    std::size_t states, const DiscountOptions& options)
{
    const Tolerance& tol = options.tol;
    DiscountOutcome out;

    std::vector<TimedQuery> probes = options.stationarity_probes;
    if (probes.empty() && features.size() >= 2) {
        std::mt19937_64 rng(options.seed);
        for (std::size_t k = 0; k < options.probe_count; ++k) {
            std::vector<FeatureId> pool = features;
            std::shuffle(pool.begin(), pool.end(), rng);
            const std::size_t size = std::uniform_int_distribution<std::size_t>(2, std::min<std::size_t>(3, pool.size()))(rng);
            pool.resize(size);
            TimedQuery probe{FeatureSet(pool), {}};
            for (const auto& id : probe.members) {
                probe.timing[id] = std::uniform_int_distribution<int>(1, 4)(rng);
            }
            probes.push_back(std::move(probe));
        }
    }
    for (const auto& probe : probes) {
        const auto base = oracle(probe);
        const auto moved = oracle(probe.shifted(1));
        if (!base || !moved) {
            continue;
        }
        ++out.stationarity_checks;
        if (!coincident(*base, *moved, tol)) {
            throw Error(ErrorCode::NotStationary, "shifting " + probe.str() + " by 1 changes the belief");
        }
    }

    OracleSource untimed(states, features, [&](const FeatureSet& set) { return oracle(TimedQuery::uniform(set)); });
    const RecoveryOutcome recovery = recover(untimed, RecoveryOptions{tol, {}});
    if (const auto* missing = recovery.missing()) {
        throw MissingDataError(missing->required, "equal-timing data needed for the weights is absent");
    }
    if (const auto* bad = recovery.non_representable()) {
        throw WitnessError(ErrorCode::PreconditionFailed, bad->witness);
    }
    const Representation& rep = recovery.recovered()->rep;
    if (!rep.single_class()) {
        throw Error(ErrorCode::MultipleRankClasses, "equal-timing data is not strictly averaging");
    }
    for (const auto& id : rep.features()) {
        out.weights[id] = rep.weight(id);
        out.beliefs[id] = rep.outcome(id);
    }

    const auto ids = rep.features();
    std::optional<std::pair<FeatureId, FeatureId>> basis;
    for (std::size_t i = 0; i < ids.size() && !basis; ++i) {
        for (std::size_t j = i + 1; j < ids.size(); ++j) {
            if (!coincident(rep.outcome(ids[i]), rep.outcome(ids[j]), tol)) {
                basis.emplace(ids[i], ids[j]);
                break;
            }
        }
    }
    if (!basis) {
        throw Error(ErrorCode::PreconditionFailed, "all singleton beliefs coincide; the discount factor is unidentified");
    }
    const auto& [x0, y0] = *basis;
    TimedQuery identify{FeatureSet{x0, y0}, {{x0, 1}, {y0, 2}}};
    const auto observed = oracle(identify);
    if (!observed) {
        throw MissingDataError({identify.members}, "timed query " + identify.str() + " is absent");
    }
    const auto c = segment_coefficient(*observed, rep.outcome(x0), rep.outcome(y0), tol);
    const auto* on = std::get_if<OnSegment>(&c);
    if (on == nullptr || on->lambda <= tol.slack() || on->lambda >= 1.0 - tol.slack()) {
        throw Error(ErrorCode::DegenerateLambda, "timed query " + identify.str() + " is not strictly averaging");
    }
    out.identifying_query = identify;
    out.lambda = on->lambda;
    out.q = ((1.0 - on->lambda) / on->lambda) * (rep.weight(x0) / rep.weight(y0));

    for (const auto& query : options.validation) {
        query.validate();
        const auto value = oracle(query);
        if (!value) {
            throw MissingDataError({query.members}, "validation query " + query.str() + " is absent");
        }
        const Point predicted = evaluate_discounted(out.q, out.weights, out.beliefs, query);
        const double residual = (predicted - *value).norm();
        const bool passed = residual <= tol.bound(std::max(predicted.norm(), value->norm()));
        out.validation.push_back({query, residual, passed});
        out.max_residual = std::max(out.max_residual, residual);
        out.verified = out.verified && passed;
    }
    return out;
}

} // namespace aggkit
