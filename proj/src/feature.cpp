#include "aggkit/feature.hpp"

#include <algorithm>
#include <cctype>

namespace aggkit {

std::string_view to_string(ErrorCode code)
{
    switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::DegenerateLine: return "DegenerateLine";
    case ErrorCode::AffinelyDependentBasis: return "AffinelyDependentBasis";
    case ErrorCode::NotInAffineHull: return "NotInAffineHull";
    case ErrorCode::NotInConvexHull: return "NotInConvexHull";
    case ErrorCode::UnknownFeature: return "UnknownFeature";
    case ErrorCode::MissingSingleton: return "MissingSingleton";
    case ErrorCode::MissingData: return "MissingData";
    case ErrorCode::IntransitivityDetected: return "IntransitivityDetected";
    case ErrorCode::DegenerateLambda: return "DegenerateLambda";
    case ErrorCode::MultipleRankClasses: return "MultipleRankClasses";
    case ErrorCode::NotABelief: return "NotABelief";
    case ErrorCode::NotStationary: return "NotStationary";
    case ErrorCode::OracleRefused: return "OracleRefused";
    case ErrorCode::MinimalAgreementViolated: return "MinimalAgreementViolated";
    case ErrorCode::ResidualTooLarge: return "ResidualTooLarge";
    case ErrorCode::ProfileConstructionFailed: return "ProfileConstructionFailed";
    case ErrorCode::ConstantUtility: return "ConstantUtility";
    case ErrorCode::UnsatisfiablePolicy: return "UnsatisfiablePolicy";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::PreconditionFailed: return "PreconditionFailed";
    case ErrorCode::InvalidInput: return "InvalidInput";
    }
    return "Unknown";
}

FeatureId::FeatureId(std::string value) : value_(std::move(value))
{
    if (value_.empty()) {
        throw Error(ErrorCode::InvalidInput, "empty feature id");
    }
    if (std::any_of(value_.begin(), value_.end(), [](unsigned char c) { return std::isspace(c) != 0; })) {
        throw Error(ErrorCode::InvalidInput, "feature id '" + value_ + "' contains whitespace");
    }
}

FeatureSet::FeatureSet(std::vector<FeatureId> members) : members_(std::move(members))
{
    if (members_.empty()) {
        throw Error(ErrorCode::InvalidInput, "feature sets are nonempty");
    }
    std::sort(members_.begin(), members_.end());
    if (std::adjacent_find(members_.begin(), members_.end()) != members_.end()) {
        throw Error(ErrorCode::InvalidInput, "duplicate member in feature set");
    }
}

FeatureSet::FeatureSet(std::initializer_list<FeatureId> members)
    : FeatureSet(std::vector<FeatureId>(members))
{}

bool FeatureSet::contains(const FeatureId& id) const
{
    return std::binary_search(members_.begin(), members_.end(), id);
}

bool FeatureSet::disjoint(const FeatureSet& other) const
{
    auto a = members_.begin();
    auto b = other.members_.begin();
    while (a != members_.end() && b != other.members_.end()) {
        if (*a == *b) {
            return false;
        }
        if (*a < *b) {
            ++a;
        } else {
            ++b;
        }
    }
    return true;
}

FeatureSet FeatureSet::united(const FeatureSet& other) const
{
    std::vector<FeatureId> out;
    std::set_union(members_.begin(), members_.end(), other.members_.begin(), other.members_.end(),
        std::back_inserter(out));
    return FeatureSet(std::move(out));
}

FeatureSet FeatureSet::without(const FeatureId& id) const
{
    std::vector<FeatureId> out;
    std::copy_if(members_.begin(), members_.end(), std::back_inserter(out),
        [&](const FeatureId& m) { return m != id; });
    return FeatureSet(std::move(out));
}

std::string FeatureSet::str() const
{
    std::string out = "{";
    for (std::size_t i = 0; i < members_.size(); ++i) {
        if (i > 0) {
            out += ',';
        }
        out += members_[i].str();
    }
    return out + "}";
}

std::strong_ordering operator<=>(const FeatureSet& a, const FeatureSet& b)
{
    if (auto c = a.size() <=> b.size(); c != 0) {
        return c;
    }
    return a.members_ <=> b.members_;
}

std::vector<FeatureSet> all_subsets(const std::vector<FeatureId>& universe, std::size_t max_features)
{
    if (universe.size() > max_features) {
        throw Error(ErrorCode::TooLarge,
            std::to_string(universe.size()) + " features exceed the subset enumeration limit of "
                + std::to_string(max_features));
    }
    std::vector<FeatureId> sorted = universe;
    std::sort(sorted.begin(), sorted.end());
    std::vector<FeatureSet> out;
    const std::size_t n = sorted.size();
    out.reserve((std::size_t{1} << n) - 1);
    for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
        std::vector<FeatureId> members;
        for (std::size_t i = 0; i < n; ++i) {
            if (mask & (std::size_t{1} << i)) {
                members.push_back(sorted[i]);
            }
        }
        out.emplace_back(std::move(members));
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace aggkit
