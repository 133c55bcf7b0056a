#pragma once

#include "aggkit/feature.hpp"
#include "aggkit/geometry.hpp"
#include "aggkit/source.hpp"

#include <map>
#include <optional>
#include <string_view>
#include <vector>

namespace aggkit {

struct FeatureTraits {
    double weight = 1.0;
    /// Level in the weak order; larger ranks dominate, equal ranks are equivalent.
    int rank = 0;
    Point outcome;
};

/// Strictly positive weights and a weak order over features, with each feature's
/// singleton outcome. Evaluates to the weighted average over the top rank of a set.
class Representation {
public:
    Representation() = default;
    explicit Representation(std::map<FeatureId, FeatureTraits> entries);

    const std::map<FeatureId, FeatureTraits>& entries() const noexcept { return entries_; }
    const FeatureTraits& at(const FeatureId& id) const;
    double weight(const FeatureId& id) const { return at(id).weight; }
    int rank(const FeatureId& id) const { return at(id).rank; }
    const Point& outcome(const FeatureId& id) const { return at(id).outcome; }

    std::size_t dimension() const noexcept { return dimension_; }
    std::vector<FeatureId> features() const;
    /// Distinct rank levels, ascending.
    std::vector<int> rank_levels() const;
    std::vector<FeatureId> class_members(int rank) const;
    bool single_class() const { return rank_levels().size() <= 1; }

    /// Copy rescaled so the anchor of every rank class has weight exactly 1.
    Representation normalized(const Tolerance& tol = {}) const;

private:
    std::map<FeatureId, FeatureTraits> entries_;
    std::size_t dimension_ = 0;
};

/// Deterministic anchor of a class: the smallest id whose outcome differs from some
/// classmate, or the smallest id when all outcomes coincide.
FeatureId class_anchor(const std::vector<FeatureId>& sorted_members,
    const std::map<FeatureId, Point>& outcomes, const Tolerance& tol);

/// Members of `set` with maximal rank.
FeatureSet top_set(const Representation& rep, const FeatureSet& set);

/// Weighted average of the top-ranked members' outcomes.
Point evaluate(const Representation& rep, const FeatureSet& set);

enum class AxiomMode { Weighted, StrictWeighted, ExtremeWeighted };

std::string_view to_string(AxiomMode mode);
std::optional<AxiomMode> parse_axiom_mode(std::string_view text);

/// One disjoint pair (A, B) with A, B and A u B all observed.
/// `lambda` weights f(A): f(A u B) ~ lambda f(A) + (1 - lambda) f(B); empty when f(A) = f(B).
struct AxiomCheck {
    FeatureSet a;
    FeatureSet b;
    std::optional<double> lambda;
    double residual = 0.0;
    /// On the line through f(A), f(B) but outside the segment.
    bool collinear_outside = false;
    bool passed = false;
};

struct AxiomReport {
    AxiomMode mode = AxiomMode::Weighted;
    bool satisfied = true;
    std::vector<AxiomCheck> checks;
    std::vector<AxiomCheck> violations;
};

/// Applies the pass rule of `mode` to a segment coefficient.
bool axiom_admits(AxiomMode mode, const SegmentCoefficient& coefficient, const Point& joint,
    const Point& a, const Point& b, const Tolerance& tol);

/// Checks every observed disjoint pair. Checks are in canonical (A, B) order.
AxiomReport check_axiom(const Dataset& data, AxiomMode mode, const Tolerance& tol = {});

/// True iff the observed range is not contained in a line.
bool check_richness(const Dataset& data, const Tolerance& tol = {});

struct StrongRichnessEntry {
    FeatureId feature;
    bool witnessed = false;
    std::optional<FeatureId> first;
    std::optional<FeatureId> second;
};

struct StrongRichnessReport {
    bool satisfied = false;
    std::vector<StrongRichnessEntry> entries;
};

/// For each x, searches y, z with f(x), f(y), f(z) non-collinear and both pair outcomes
/// distinct from their endpoints. Throws MissingDataError (listing absent pairs) when a
/// feature has no witness and some of its pairs were never observed.
StrongRichnessReport check_strong_richness(const Dataset& data, const Tolerance& tol = {});

} // namespace aggkit
