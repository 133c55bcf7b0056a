#pragma once

#include "aggkit/model.hpp"

#include <cstdint>
#include <string_view>
#include <vector>

namespace aggkit::testkit {

enum class OutcomePolicy { RandomRich, Collinear, SimplexBeliefs, MenuPoints };
std::string_view to_string(OutcomePolicy policy);
std::optional<OutcomePolicy> parse_outcome_policy(std::string_view text);

struct GeneratorConfig {
    std::uint64_t seed = 0;
    std::size_t feature_count = 4;
    std::size_t dimension = 2;
    std::size_t rank_classes = 1;
    double weight_min = 0.5;
    double weight_max = 2.0;
    OutcomePolicy policy = OutcomePolicy::RandomRich;

    /// Throws InvalidInput.
    void validate() const;
};

/// Feature ids f0, f1, ... Rank classes are contiguous index blocks, highest rank
/// first. RandomRich redraws each class with three or more members until its
/// outcomes span a plane. Returned anchor-normalized. Throws UnsatisfiablePolicy.
Representation gen_representation(const GeneratorConfig& cfg);

enum class SubsetPolicy { AllSubsets, PairsAndTriples, Custom };

/// Forward-evaluated dataset. PairsAndTriples includes the singletons.
/// Throws TooLarge for AllSubsets beyond ten features.
Dataset gen_dataset(const Representation& rep, SubsetPolicy policy, const std::vector<FeatureSet>& custom = {});

/// Same contract as check_axiom, coordinate-wise arithmetic only.
AxiomReport brute_force_axiom_check(const Dataset& data, AxiomMode mode, const Tolerance& tol = {});

/// Uniform noise in [-magnitude, magnitude] on every coordinate of every non-singleton outcome.
Dataset perturb(const Dataset& data, double magnitude, std::uint64_t seed);

} // namespace aggkit::testkit
