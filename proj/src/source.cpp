#include "aggkit/source.hpp"

#include <algorithm>
#include <set>

namespace aggkit {

Point AggregationSource::singleton(const FeatureId& id) const
{
    auto p = query(FeatureSet::singleton(id));
    if (!p) {
        throw MissingDataError({FeatureSet::singleton(id)}, "singleton " + id.str() + " is not available");
    }
    return *p;
}

Dataset::Dataset(std::size_t dimension, std::map<FeatureSet, Point> outcomes)
    : dimension_(dimension), outcomes_(std::move(outcomes))
{
    if (dimension_ == 0) {
        throw Error(ErrorCode::InvalidInput, "dimension must be positive");
    }
    std::set<FeatureId> universe;
    for (const auto& [set, outcome] : outcomes_) {
        if (static_cast<std::size_t>(outcome.size()) != dimension_) {
            throw Error(ErrorCode::DimensionMismatch,
                "outcome of " + set.str() + " has dimension " + std::to_string(outcome.size())
                    + ", declared " + std::to_string(dimension_));
        }
        require_finite(outcome);
        universe.insert(set.begin(), set.end());
    }
    for (const auto& [set, outcome] : outcomes_) {
        for (const auto& id : set) {
            if (!outcomes_.count(FeatureSet::singleton(id))) {
                throw Error(ErrorCode::MissingSingleton,
                    "set " + set.str() + " is stored but singleton {" + id.str() + "} is not");
            }
        }
    }
    features_.assign(universe.begin(), universe.end());
}

std::optional<Point> Dataset::query(const FeatureSet& set) const
{
    auto it = outcomes_.find(set);
    if (it == outcomes_.end()) {
        return std::nullopt;
    }
    return it->second;
}

std::vector<FeatureSet> Dataset::sets() const
{
    std::vector<FeatureSet> out;
    out.reserve(outcomes_.size());
    for (const auto& entry : outcomes_) {
        out.push_back(entry.first);
    }
    return out;
}

std::vector<Point> Dataset::range() const
{
    std::vector<Point> out;
    out.reserve(outcomes_.size());
    for (const auto& entry : outcomes_) {
        out.push_back(entry.second);
    }
    return out;
}

Dataset Dataset::with(const FeatureSet& set, Point outcome) const
{
    auto copy = outcomes_;
    copy[set] = std::move(outcome);
    return Dataset(dimension_, std::move(copy));
}

OracleSource::OracleSource(std::size_t dimension, std::vector<FeatureId> features, Fn fn)
    : dimension_(dimension), features_(std::move(features)), fn_(std::move(fn))
{
    std::sort(features_.begin(), features_.end());
    features_.erase(std::unique(features_.begin(), features_.end()), features_.end());
    if (dimension_ == 0 || features_.empty()) {
        throw Error(ErrorCode::InvalidInput, "oracle needs a positive dimension and a nonempty feature list");
    }
}

std::optional<Point> OracleSource::query(const FeatureSet& set) const
{
    {
        std::lock_guard lock(mutex_);
        if (auto it = cache_.find(set); it != cache_.end()) {
            return it->second;
        }
    }
    for (const auto& id : set) {
        if (!std::binary_search(features_.begin(), features_.end(), id)) {
            throw Error(ErrorCode::UnknownFeature, id.str());
        }
    }
    std::optional<Point> value = fn_(set);
    if (value) {
        if (static_cast<std::size_t>(value->size()) != dimension_) {
            throw Error(ErrorCode::DimensionMismatch, "oracle answered " + set.str() + " with wrong dimension");
        }
        require_finite(*value);
    }
    std::lock_guard lock(mutex_);
    // first answer wins so repeated queries stay identical
    return cache_.emplace(set, std::move(value)).first->second;
}

std::vector<FeatureSet> OracleSource::query_plan() const
{
    std::lock_guard lock(mutex_);
    std::vector<FeatureSet> out;
    for (const auto& [set, value] : cache_) {
        out.push_back(set);
    }
    return out;
}

} // namespace aggkit
