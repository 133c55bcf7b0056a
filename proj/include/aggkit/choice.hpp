#pragma once

#include "aggkit/recovery.hpp"

#include <functional>
#include <map>
#include <optional>
#include <utility>
#include <vector>

namespace aggkit {

/// A menu of alternatives; each feature is identified with its coordinates.
struct Menu {
    FeatureSet members;
    std::map<FeatureId, Point> coords;

    /// Throws InvalidInput or DimensionMismatch.
    void validate() const;
    std::vector<Point> points() const;
};

struct ChoiceDistribution {
    std::map<FeatureId, double> probs;

    double at(const FeatureId& id) const;
    /// sum_x rho(x) * coords(x)
    Point mean(const std::map<FeatureId, Point>& coords) const;
};

struct FeasibilityRow {
    FeatureSet set;
    bool feasible = false;
    std::optional<std::vector<double>> coefficients;
};

struct FeasibilityReport {
    bool feasible = true;
    std::vector<FeasibilityRow> rows;
};

/// f(A) in Conv(A) for every stored menu, with singleton outcomes as coordinates.
FeasibilityReport check_menu_feasibility(const Dataset& data, const Tolerance& tol = {});

enum class LuceStatus { Rationalizable, NotRationalizable, RichnessFailure, MissingData };
std::string_view to_string(LuceStatus status);

struct LuceVerdict {
    LuceStatus status = LuceStatus::NotRationalizable;
    bool rich = false;
    /// Anchor-normalized weights; ranks are all 0 for the one-stage rule.
    WeightMap weights;
    RankMap ranks;
    std::optional<Witness> counterexample;
    std::vector<FeatureSet> missing;
    std::optional<RecoveryOutcome> recovery;
};

/// Luce weights when the data is rich and recovers to a single class.
LuceVerdict recover_luce(const Dataset& data, const Tolerance& tol = {});

struct TwoStageVerdict {
    LuceVerdict luce;
    /// Uniqueness of the representation is only guaranteed under strong richness.
    bool strongly_rich = false;
};

/// Full recovery read as a two-stage rule. The strong-richness result is reported
/// alongside, not enforced.
TwoStageVerdict recover_two_stage_luce(const Dataset& data, const Tolerance& tol = {});

/// rho(x, A) = w(x) / sum over M(A) of w, zero off M(A). Throws UnknownFeature.
ChoiceDistribution choice_probabilities(const WeightMap& weights, const RankMap& ranks, const FeatureSet& menu);

/// Average choice over a list of points; nullopt when it cannot price the menu.
using MenuOracle = std::function<std::optional<Point>(const std::vector<Point>&)>;

/// Weighted mean with weights looked up by coordinates; unmatched points get `fresh_weight`.
MenuOracle make_luce_menu_oracle(std::vector<std::pair<Point, double>> known, double fresh_weight = 1.0,
    const Tolerance& tol = {});

/// Picks the highest-priority member; refuses menus with unknown points.
MenuOracle make_dictatorial_oracle(std::vector<std::pair<Point, int>> priority, const Tolerance& tol = {});

struct PathRow {
    FeatureSet a;
    FeatureSet b;
    Point direct;
    Point composed;
    double residual = 0.0;
    bool passed = true;
};

struct PathIndependenceReport {
    bool satisfied = true;
    double max_residual = 0.0;
    std::vector<PathRow> rows;
};

/// Compares f(A u B) with f({f(A), f(B)}) per pair. Throws OracleRefused.
PathIndependenceReport check_path_independence(const MenuOracle& oracle, const std::map<FeatureId, Point>& coords,
    const std::vector<std::pair<FeatureSet, FeatureSet>>& pairs, const Tolerance& tol = {});

struct BoundaryRow {
    FeatureSet set;
    /// f(A) lies outside Conv(A) altogether.
    bool outside = false;
    bool on_boundary = false;
    bool contradiction = false;
};

struct BoundaryReport {
    /// Strict averaging holds on the observed pairs, or recovery gave one class.
    bool strict_evidence = false;
    std::vector<BoundaryRow> flagged;
    std::size_t contradictions = 0;
};

/// Menus whose choice is not in the relative interior of the menu's hull.
BoundaryReport boundary_diagnostic(const Dataset& data, const Tolerance& tol = {});

} // namespace aggkit
