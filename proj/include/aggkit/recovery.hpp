#pragma once

#include "aggkit/model.hpp"

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace aggkit {

using RankMap = std::map<FeatureId, int>;
using WeightMap = std::map<FeatureId, double>;

enum class WitnessKind {
    /// Two derivations of the same weight ratio disagree.
    RatioConflict,
    /// A pair outcome is off the segment between its singletons.
    AxiomViolation,
    /// Pairwise order data admits no weak order.
    Intransitivity,
    /// Two features in one class whose pair aggregate sits at an endpoint.
    ExtremeLambda,
    /// Forward evaluation misses an observed outcome and no sharper witness was found.
    VerificationFailure,
};

std::string_view to_string(WitnessKind kind);

/// A weight ratio w(first)/w(second) and the observed sets it was derived from.
struct RatioDerivation {
    double ratio = 0.0;
    std::vector<FeatureSet> sets;
};

struct Witness {
    WitnessKind kind = WitnessKind::VerificationFailure;
    std::vector<FeatureId> features;
    std::vector<FeatureSet> sets;
    std::optional<RatioDerivation> direct;
    std::optional<RatioDerivation> chained;
    double residual = 0.0;
    std::string description;
};

/// Raised by the constructive steps when the data itself refutes a representation.
class WitnessError : public Error {
public:
    WitnessError(ErrorCode code, Witness witness)
        : Error(code, witness.description), witness_(std::move(witness))
    {}

    const Witness& witness() const noexcept { return witness_; }

private:
    Witness witness_;
};

struct VerificationRow {
    FeatureSet set;
    double residual = 0.0;
    bool passed = true;
};

struct Recovered {
    Representation rep;
    std::vector<VerificationRow> verification;
    double max_residual = 0.0;
    /// Rank levels whose members all share one outcome; weights there are set to 1.
    std::vector<int> indeterminate_classes;
};

struct NonRepresentable {
    Witness witness;
    std::vector<VerificationRow> verification;
};

struct MissingData {
    std::vector<FeatureSet> required;
};

struct RecoveryOutcome {
    std::variant<Recovered, NonRepresentable, MissingData> result;
    /// Sets queried from an oracle-backed source (empty for datasets).
    std::vector<FeatureSet> query_plan;

    const Recovered* recovered() const { return std::get_if<Recovered>(&result); }
    const NonRepresentable* non_representable() const { return std::get_if<NonRepresentable>(&result); }
    const MissingData* missing() const { return std::get_if<MissingData>(&result); }
};

struct RecoveryOptions {
    Tolerance tol{};
    /// Extra sets verified against an oracle-backed source.
    std::vector<FeatureSet> validation_sets;
};

/// Weak order from pairwise aggregates, as dense rank levels starting at 0.
/// Throws MissingDataError or WitnessError (Intransitivity).
RankMap recover_order(const AggregationSource& src, const Tolerance& tol = {});

struct WeightRecovery {
    WeightMap weights;
    std::map<int, FeatureId> anchors;
    std::vector<int> indeterminate_classes;
};

/// Anchor-and-ratio weights inside every rank class. Throws MissingDataError or
/// WitnessError (AxiomViolation, DegenerateLambda).
WeightRecovery recover_weights(const AggregationSource& src, const RankMap& order, const Tolerance& tol = {});

/// Order, weights, then mandatory verification against every observed set.
RecoveryOutcome recover(const AggregationSource& src, const RecoveryOptions& options = {});

/// First observed pair from different rank classes of `rep`, reported as an extreme
/// lambda. Used where a strict (single-class) representation is required.
std::optional<Witness> strictness_witness(const AggregationSource& src, const Representation& rep);

/// Feature embedding used by the continuity diagnostic.
using MetricFeatureSpace = std::map<FeatureId, Point>;

struct ContinuityRow {
    FeatureId a;
    FeatureId b;
    double distance = 0.0;
    bool rank_disagreement = false;
    /// |w(a)/w(b) - 1|, only for same-rank pairs.
    std::optional<double> ratio_deviation;
};

struct ContinuityReport {
    std::vector<ContinuityRow> rows;
    std::size_t rank_disagreements = 0;
    double max_ratio_deviation = 0.0;
};

/// Describes every feature pair strictly closer than `radius` in `space`.
ContinuityReport continuity_diagnostic(const MetricFeatureSpace& space, const Representation& rep, double radius);

} // namespace aggkit
