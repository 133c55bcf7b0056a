#pragma once

#include "aggkit/error.hpp"

#include <compare>
#include <initializer_list>
#include <string>
#include <vector>

namespace aggkit {

/// Opaque feature token: non-empty, no whitespace.
class FeatureId {
public:
    FeatureId() = default;
    explicit FeatureId(std::string value);
    FeatureId(const char* value) : FeatureId(std::string(value)) {}

    const std::string& str() const noexcept { return value_; }

    friend auto operator<=>(const FeatureId&, const FeatureId&) = default;

private:
    std::string value_;
};

/// Nonempty finite set of features, stored sorted.
///
/// Ordering is canonical: by size, then lexicographically by members.
class FeatureSet {
public:
    FeatureSet() = default;
    explicit FeatureSet(std::vector<FeatureId> members);
    FeatureSet(std::initializer_list<FeatureId> members);

    static FeatureSet singleton(const FeatureId& id) { return FeatureSet({id}); }

    const std::vector<FeatureId>& members() const noexcept { return members_; }
    std::size_t size() const noexcept { return members_.size(); }
    bool empty() const noexcept { return members_.empty(); }
    auto begin() const noexcept { return members_.begin(); }
    auto end() const noexcept { return members_.end(); }

    bool contains(const FeatureId& id) const;
    bool disjoint(const FeatureSet& other) const;
    FeatureSet united(const FeatureSet& other) const;
    FeatureSet without(const FeatureId& id) const;

    /// "{a,b,c}"
    std::string str() const;

    friend bool operator==(const FeatureSet&, const FeatureSet&) = default;
    friend std::strong_ordering operator<=>(const FeatureSet& a, const FeatureSet& b);

private:
    std::vector<FeatureId> members_;
};

/// All nonempty subsets of `universe`, canonically ordered. Throws TooLarge beyond `max_features`.
std::vector<FeatureSet> all_subsets(const std::vector<FeatureId>& universe, std::size_t max_features = 16);

/// Names the sets a computation needed but the source could not supply.
class MissingDataError : public Error {
public:
    MissingDataError(std::vector<FeatureSet> required, const std::string& what)
        : Error(ErrorCode::MissingData, what), required_(std::move(required))
    {}

    const std::vector<FeatureSet>& required() const noexcept { return required_; }

private:
    std::vector<FeatureSet> required_;
};

} // namespace aggkit
