#pragma once

#include "aggkit/recovery.hpp"

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace aggkit {

/// Cardinal utilities over prospects; prospect 0 is the zero of the scale.
using UtilityVector = Point;

/// u / <u, v>. Throws MinimalAgreementViolated when <u, v> is not positive.
UtilityVector normalize_to_H(const UtilityVector& u, const Point& v, const Tolerance& tol = {});

struct InCone {
    double alpha = 0.0;
    double beta = 0.0;
    double residual = 0.0;
};

/// z with z.uA >= 0, z.uB >= 0 and z.uAB < 0. When uAB sits on an edge of the cone
/// no such z exists and `boundary` is set: then z.uAB = 0 while z is strictly positive
/// on the other generator.
struct Certificate {
    Point z;
    double z_a = 0.0;
    double z_b = 0.0;
    double z_ab = 0.0;
    bool boundary = false;
};

struct Collinear {};

using FarkasOutcome = std::variant<InCone, Certificate, Collinear>;

/// Decides uAB in the open cone spanned by uA and uB, or separates it.
/// Throws ResidualTooLarge if no variant can be validated.
FarkasOutcome check_consistency_pair(
    const UtilityVector& uA, const UtilityVector& uB, const UtilityVector& uAB, const Tolerance& tol = {});

/// Both (in)equality systems evaluated directly, for exclusivity checks.
bool certificate_valid(const Point& z, const UtilityVector& uA, const UtilityVector& uB, const UtilityVector& uAB,
    const Tolerance& tol = {});

/// Individual id to raw utility.
using Profile = std::map<FeatureId, UtilityVector>;

/// Weighted average of normalized member utilities.
UtilityVector aggregate_coalition(const std::map<FeatureId, double>& weights, const Profile& profile,
    const FeatureSet& coalition, const Point& v, const Tolerance& tol = {});

struct ParetoViolation {
    AxiomCheck check;
    /// Lottery direction along which both parts agree and the union disagrees.
    std::optional<Certificate> certificate;
};

struct ParetoReport {
    bool satisfied = false;
    AxiomReport axiom;
    std::vector<ParetoViolation> violations;
    std::optional<Dataset> normalized;
    std::optional<RecoveryOutcome> recovery;
};

/// Normalizes every coalition utility onto H and runs the strict averaging check.
ParetoReport check_extended_pareto(const Dataset& coalitions, const Point& v, const Tolerance& tol = {});

/// Preference id to raw utility.
using PreferenceLibrary = std::map<std::string, UtilityVector>;
/// Individual to preference id; an oracle receives the assignment of one coalition.
using Assignment = std::map<FeatureId, std::string>;
using GswfOracle = std::function<std::optional<UtilityVector>(const Assignment&)>;
using GswfTable = std::map<std::pair<FeatureId, std::string>, double>;

struct GswfRow {
    Assignment coalition;
    double residual = 0.0;
    bool passed = true;
};

struct GswfRecovery {
    GswfTable weights;
    FeatureId reference_individual;
    std::string reference_preference;
    std::vector<Assignment> queries;
    std::vector<GswfRow> validation;
    double max_residual = 0.0;
    bool verified = true;
};

/// Affine dimension of the normalized utilities in a full profile.
std::size_t profile_dimension(const Assignment& profile, const PreferenceLibrary& library, const Point& v,
    const Tolerance& tol = {});

/// Weighted average of normalized utilities under a (individual, preference) table.
UtilityVector evaluate_gswf(const GswfTable& weights, const Assignment& coalition, const PreferenceLibrary& library,
    const Point& v, const Tolerance& tol = {});

/// w(first individual, first preference) = 1, then one pair query per table entry on
/// profiles whose normalized utilities span at least a plane. Throws PreconditionFailed,
/// ProfileConstructionFailed, OracleRefused or DegenerateLambda.
GswfRecovery recover_gswf_weights(const GswfOracle& oracle, const std::vector<FeatureId>& individuals,
    const PreferenceLibrary& library, const Point& v, const std::vector<Assignment>& validation = {},
    const Tolerance& tol = {});

/// Compares a supplied table against observed coalition utilities.
std::vector<GswfRow> verify_gswf(const GswfTable& weights, const PreferenceLibrary& library, const Point& v,
    const std::vector<std::pair<Assignment, UtilityVector>>& observed, const Tolerance& tol = {});

/// Weights depend on the preference only.
bool is_anonymous(const GswfTable& weights, const Tolerance& tol = {});

/// 1 / (max_j u_j - min_j u_j). Throws ConstantUtility.
double relative_utilitarian_weight(const UtilityVector& u_hat, const Tolerance& tol = {});

struct StateDependentRepresentation {
    std::map<FeatureId, double> P;
    std::map<FeatureId, UtilityVector> u;
};

struct StateDependentOutcome {
    std::optional<StateDependentRepresentation> representation;
    RecoveryOutcome recovery;
    /// Conditional-expectation identity per observed event.
    std::vector<VerificationRow> rows;
    double max_residual = 0.0;
    bool indeterminate = false;
    std::optional<Witness> witness;
};

/// States as features over conditional utilities normalized on H.
StateDependentOutcome recover_state_dependent(const Dataset& events, const Point& v, const Tolerance& tol = {});

} // namespace aggkit
