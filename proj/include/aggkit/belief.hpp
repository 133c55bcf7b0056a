#pragma once

#include "aggkit/recovery.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <vector>

namespace aggkit {

/// Simplex check used on ingestion.
struct BeliefValidation {
    Point probs;
    /// Mass added or removed by the one-time renormalization.
    double correction = 0.0;
};

/// Throws NotABelief unless `p` is within `simplex_tol` of the probability simplex;
/// otherwise returns it clamped and renormalized.
BeliefValidation validate_belief(const Point& p, double simplex_tol = 1e-9);

/// Probability measure on states x features, dense states-by-features table.
class JointProbability {
public:
    JointProbability(std::vector<FeatureId> features, Eigen::MatrixXd table);

    const std::vector<FeatureId>& features() const noexcept { return features_; }
    const Eigen::MatrixXd& table() const noexcept { return table_; }
    std::size_t states() const noexcept { return static_cast<std::size_t>(table_.rows()); }

    double cell(std::size_t state, const FeatureId& id) const;
    /// P(B x A) for a state event given as a membership mask.
    double mass(const std::vector<bool>& states, const FeatureSet& set) const;
    /// P_X(A)
    double marginal(const FeatureSet& set) const;
    /// The conditional belief P(. | A).
    Point conditional(const FeatureSet& set) const;

private:
    std::size_t column(const FeatureId& id) const;

    std::vector<FeatureId> features_;
    Eigen::MatrixXd table_;
};

/// P({w} x {x}) = w(x) f(x)(w) / sum_y w(y). Throws MultipleRankClasses or NotABelief.
JointProbability build_joint(const Representation& rep);

struct BayesianVerdict {
    bool bayesian = false;
    /// Rich and every nonempty subset observed: the verdict is a theorem-level certificate.
    bool certified = false;
    bool rich = false;
    std::optional<JointProbability> joint;
    /// Per set, the largest |f(A)(B) - P(B x A)/P_X(A)| over all state events B.
    std::vector<VerificationRow> rows;
    double max_residual = 0.0;
    std::optional<Witness> counterexample;
    RecoveryOutcome recovery;
};

BayesianVerdict check_bayesian(const Dataset& data, const Tolerance& tol = {});

/// {P_A}: one states-by-features table per stored event A.
struct ConditionalProbabilitySystem {
    std::vector<FeatureId> features;
    std::size_t states = 0;
    std::map<FeatureSet, Eigen::MatrixXd> conditionals;

    std::size_t column(const FeatureId& id) const;
    /// (f(A))(w) = P_A({w} x A)
    Point belief(const FeatureSet& set) const;
};

/// Measures supported on the top rank of each event, weighted within it.
/// Builds every nonempty subset unless `events` is given.
ConditionalProbabilitySystem build_cps(const Representation& rep, const std::vector<FeatureSet>& events = {});

struct CpsViolation {
    enum class Property { Nonnegative, Normalization, Support, Chain };
    Property property;
    FeatureSet a;
    std::optional<FeatureSet> b;
    double residual = 0.0;
};

std::string_view to_string(CpsViolation::Property property);

struct CpsReport {
    bool valid = true;
    double max_residual = 0.0;
    std::size_t events_checked = 0;
    std::size_t pairs_checked = 0;
    std::vector<CpsViolation> violations;
};

CpsReport verify_cps(const ConditionalProbabilitySystem& cps, const Tolerance& tol = {});

/// Signals with arrival times, in time units before the present.
struct TimedQuery {
    FeatureSet members;
    std::map<FeatureId, int> timing;

    /// Throws InvalidInput unless timings are positive and defined exactly on members.
    void validate() const;
    TimedQuery shifted(int c) const;
    static TimedQuery uniform(const FeatureSet& members, int t = 1);
    std::string str() const;

    friend bool operator==(const TimedQuery&, const TimedQuery&) = default;
    friend auto operator<=>(const TimedQuery& a, const TimedQuery& b)
    {
        if (auto c = a.members <=> b.members; c != 0) {
            return c;
        }
        return a.timing <=> b.timing;
    }
};

using TimedOracle = std::function<std::optional<Point>(const TimedQuery&)>;

/// sum q^t(x) w(x) f(x) / sum q^t(x) w(x). Exponents are taken relative to the
/// earliest timing, so a constant shift leaves every floating step unchanged.
Point evaluate_discounted(double q, const WeightMap& weights, const std::map<FeatureId, Point>& beliefs,
    const TimedQuery& query);

struct DiscountOptions {
    Tolerance tol{};
    std::vector<TimedQuery> validation;
    /// Explicit stationarity probes; when empty, `probe_count` random ones are drawn from `seed`.
    std::vector<TimedQuery> stationarity_probes;
    std::size_t probe_count = 3;
    std::uint64_t seed = 0;
};

struct TimedRow {
    TimedQuery query;
    double residual = 0.0;
    bool passed = true;
};

struct DiscountOutcome {
    double q = 1.0;
    WeightMap weights;
    std::map<FeatureId, Point> beliefs;
    TimedQuery identifying_query;
    double lambda = 0.0;
    std::size_t stationarity_checks = 0;
    std::vector<TimedRow> validation;
    double max_residual = 0.0;
    bool verified = true;
};

/// Weights from the equal-timing restriction, q from one (1, 2)-timed pair, then
/// verification on `options.validation`. Throws NotStationary, MissingDataError,
/// MultipleRankClasses, or WitnessError from recovery.
DiscountOutcome recover_discounted(const TimedOracle& oracle, const std::vector<FeatureId>& features,
    std::size_t states, const DiscountOptions& options = {});

} // namespace aggkit
