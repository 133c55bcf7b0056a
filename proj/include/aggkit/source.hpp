#pragma once

#include "aggkit/feature.hpp"
#include "aggkit/geometry.hpp"

#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <vector>

namespace aggkit {

enum class SourceMode { Dataset, Oracle };

/// Partial map from feature sets to outcome points.
///
/// Repeated queries return identical values. Implementations must be safe for
/// concurrent `query` calls.
class AggregationSource {
public:
    virtual ~AggregationSource() = default;

    virtual SourceMode mode() const noexcept = 0;
    virtual std::size_t dimension() const noexcept = 0;
    /// Sorted feature universe.
    virtual const std::vector<FeatureId>& features() const noexcept = 0;
    virtual std::optional<Point> query(const FeatureSet& set) const = 0;

    Point singleton(const FeatureId& id) const;
};

/// Immutable observed data. Construction enforces uniform dimension, finite
/// coordinates, and that every singleton of every stored set is stored.
class Dataset final : public AggregationSource {
public:
    Dataset(std::size_t dimension, std::map<FeatureSet, Point> outcomes);

    SourceMode mode() const noexcept override { return SourceMode::Dataset; }
    std::size_t dimension() const noexcept override { return dimension_; }
    const std::vector<FeatureId>& features() const noexcept override { return features_; }
    std::optional<Point> query(const FeatureSet& set) const override;

    bool contains(const FeatureSet& set) const { return outcomes_.count(set) != 0; }
    /// Stored sets in canonical order.
    std::vector<FeatureSet> sets() const;
    const std::map<FeatureSet, Point>& outcomes() const noexcept { return outcomes_; }
    /// All stored outcome points, sets in canonical order.
    std::vector<Point> range() const;

    /// Copy with `set` overwritten (or added); re-validated.
    Dataset with(const FeatureSet& set, Point outcome) const;

private:
    std::size_t dimension_;
    std::map<FeatureSet, Point> outcomes_;
    std::vector<FeatureId> features_;
};

/// Wraps a callable; every distinct query is recorded so callers can inspect the plan.
class OracleSource final : public AggregationSource {
public:
    using Fn = std::function<std::optional<Point>(const FeatureSet&)>;

    OracleSource(std::size_t dimension, std::vector<FeatureId> features, Fn fn);

    SourceMode mode() const noexcept override { return SourceMode::Oracle; }
    std::size_t dimension() const noexcept override { return dimension_; }
    const std::vector<FeatureId>& features() const noexcept override { return features_; }
    std::optional<Point> query(const FeatureSet& set) const override;

    /// Distinct sets queried so far, canonical order.
    std::vector<FeatureSet> query_plan() const;

private:
    std::size_t dimension_;
    std::vector<FeatureId> features_;
    Fn fn_;
    mutable std::mutex mutex_;
    mutable std::map<FeatureSet, std::optional<Point>> cache_;
};

} // namespace aggkit
