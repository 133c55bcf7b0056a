#include "aggkit/testkit.hpp"

#include <cmath>
#include <random>

namespace aggkit::testkit {

std::string_view to_string(OutcomePolicy policy)
{
    switch (policy) {
    case OutcomePolicy::RandomRich: return "random_rich";
    case OutcomePolicy::Collinear: return "collinear";
    case OutcomePolicy::SimplexBeliefs: return "simplex_beliefs";
    case OutcomePolicy::MenuPoints: return "menu_points";
    }
    return "random_rich";
}

std::optional<OutcomePolicy> parse_outcome_policy(std::string_view text)
{
    for (auto p : {OutcomePolicy::RandomRich, OutcomePolicy::Collinear, OutcomePolicy::SimplexBeliefs,
             OutcomePolicy::MenuPoints}) {
        if (text == to_string(p)) {
            return p;
        }
    }
    return std::nullopt;
}

void GeneratorConfig::validate() const
{
    if (feature_count < 2 || feature_count > 10) {
        throw Error(ErrorCode::InvalidInput, "feature_count must be in 2..10");
    }
    if (dimension < 1 || dimension > 6) {
        throw Error(ErrorCode::InvalidInput, "dimension must be in 1..6");
    }
    if (rank_classes < 1 || rank_classes > 3 || rank_classes > feature_count) {
        throw Error(ErrorCode::InvalidInput, "rank_classes must be in 1..3 and at most feature_count");
    }
    if (!(weight_min > 0.0) || !(weight_max >= weight_min) || !std::isfinite(weight_max)) {
        throw Error(ErrorCode::InvalidInput, "weight range must be a positive interval");
    }
}

namespace {

using Rng = std::mt19937_64;

Point uniform_point(Rng& rng, std::size_t dim, double lo, double hi)
{
    std::uniform_real_distribution<double> u(lo, hi);
    Point p(static_cast<Eigen::Index>(dim));
    for (Eigen::Index k = 0; k < p.size(); ++k) {
        p[k] = u(rng);
    }
    return p;
}

Point simplex_point(Rng& rng, std::size_t dim)
{
    std::exponential_distribution<double> e(1.0);
    Point p(static_cast<Eigen::Index>(dim));
    for (Eigen::Index k = 0; k < p.size(); ++k) {
        p[k] = e(rng);
    }
    return p / p.sum();
}

} // namespace

Representation gen_representation(const GeneratorConfig& cfg)
{
    cfg.validate();
    const std::size_t n = cfg.feature_count;
    const std::size_t d = cfg.dimension;
    if (cfg.policy == OutcomePolicy::RandomRich && d < 2) {
        throw Error(ErrorCode::UnsatisfiablePolicy, "rich outcomes need dimension at least 2");
    }
    Rng rng(cfg.seed);
    std::uniform_real_distribution<double> weight(cfg.weight_min, cfg.weight_max);

    std::vector<int> rank(n);
    for (std::size_t j = 0; j < n; ++j) {
        rank[j] = static_cast<int>(cfg.rank_classes - 1 - j * cfg.rank_classes / n);
    }
    std::vector<Point> outcome(n);

    Point base = uniform_point(rng, d, -1.0, 1.0);
    Point direction = uniform_point(rng, d, -1.0, 1.0);
    while (direction.norm() < 1e-3) {
        direction = uniform_point(rng, d, -1.0, 1.0);
    }
    auto draw = [&]() -> Point {
        switch (cfg.policy) {
        case OutcomePolicy::RandomRich: return uniform_point(rng, d, -1.0, 1.0);
        case OutcomePolicy::Collinear:
            return base + std::uniform_real_distribution<double>(-1.0, 1.0)(rng) * direction;
        case OutcomePolicy::SimplexBeliefs: return simplex_point(rng, d);
        case OutcomePolicy::MenuPoints: return uniform_point(rng, d, 0.0, 1.0);
        }
        return Point::Zero(static_cast<Eigen::Index>(d));
    };
    // Planar span is achievable for points in R^d with d >= 2, or on a simplex with d >= 3.
    const bool enforce = cfg.policy == OutcomePolicy::RandomRich
        || (cfg.policy == OutcomePolicy::MenuPoints && d >= 2)
        || (cfg.policy == OutcomePolicy::SimplexBeliefs && d >= 3);

    for (std::size_t start = 0; start < n;) {
        std::size_t stop = start;
        while (stop < n && rank[stop] == rank[start]) {
            ++stop;
        }
        const bool rich_class = enforce && stop - start >= 3;
        for (int attempt = 0;; ++attempt) {
            if (attempt == 1000) {
                throw Error(ErrorCode::UnsatisfiablePolicy, "could not draw a rich rank class");
            }
            std::vector<Point> drawn;
            for (std::size_t j = start; j < stop; ++j) {
                drawn.push_back(draw());
            }
            if (!rich_class || affine_dimension(drawn, Tolerance{1e-6, 1e-6}) >= 2) {
                for (std::size_t j = start; j < stop; ++j) {
                    outcome[j] = drawn[j - start];
                }
                break;
            }
        }
        start = stop;
    }

    std::map<FeatureId, FeatureTraits> entries;
    for (std::size_t j = 0; j < n; ++j) {
        entries.emplace(FeatureId("f" + std::to_string(j)), FeatureTraits{weight(rng), rank[j], outcome[j]});
    }
    return Representation(std::move(entries)).normalized();
}

Dataset gen_dataset(const Representation& rep, SubsetPolicy policy, const std::vector<FeatureSet>& custom)
{
    std::vector<FeatureSet> sets;
    switch (policy) {
    case SubsetPolicy::AllSubsets: sets = all_subsets(rep.features(), 10); break;
    case SubsetPolicy::PairsAndTriples:
        for (auto& s : all_subsets(rep.features())) {
            if (s.size() <= 3) {
                sets.push_back(std::move(s));
            }
        }
        break;
    case SubsetPolicy::Custom: sets = custom; break;
    }
    std::map<FeatureSet, Point> outcomes;
    for (const auto& s : sets) {
        outcomes.emplace(s, evaluate(rep, s));
    }
    return Dataset(rep.dimension(), std::move(outcomes));
}

namespace {

// Plain coordinate loops, deliberately independent of the geometry module.
double norm_of(const std::vector<double>& x)
{
    double s = 0.0;
    for (double c : x) {
        s += c * c;
    }
    return std::sqrt(s);
}

std::vector<double> coords_of(const Point& p)
{
    return std::vector<double>(p.data(), p.data() + p.size());
}

} // namespace

AxiomReport brute_force_axiom_check(const Dataset& data, AxiomMode mode, const Tolerance& tol)
{
    AxiomReport report;
    report.mode = mode;
    const auto sets = data.sets();
    const double slack = std::max(tol.abs_tol, tol.rel_tol);
    auto gate = [&](double scale) { return std::max(tol.abs_tol, tol.rel_tol * scale); };

    for (std::size_t i = 0; i < sets.size(); ++i) {
        for (std::size_t j = i + 1; j < sets.size(); ++j) {
            const FeatureSet& A = sets[i];
            const FeatureSet& B = sets[j];
            bool overlap = false;
            for (const auto& id : A) {
                overlap = overlap || B.contains(id);
            }
            if (overlap) {
                continue;
            }
            std::vector<FeatureId> joined = A.members();
            joined.insert(joined.end(), B.begin(), B.end());
            const auto joint = data.query(FeatureSet(joined));
            if (!joint) {
                continue;
            }
            const auto a = coords_of(*data.query(A));
            const auto b = coords_of(*data.query(B));
            const auto p = coords_of(*joint);
            const std::size_t n = a.size();

            std::vector<double> diff(n);
            std::size_t pivot = 0;
            for (std::size_t k = 0; k < n; ++k) {
                diff[k] = a[k] - b[k];
                if (std::abs(diff[k]) > std::abs(diff[pivot])) {
                    pivot = k;
                }
            }
            const double ab_scale = std::max(norm_of(a), norm_of(b));
            AxiomCheck check{A, B, std::nullopt, 0.0, false, false};
            if (norm_of(diff) <= gate(ab_scale)) {
                std::vector<double> gap(n);
                for (std::size_t k = 0; k < n; ++k) {
                    gap[k] = p[k] - a[k];
                }
                check.residual = norm_of(gap);
                check.passed = check.residual <= gate(std::max(norm_of(p), norm_of(a)));
            } else {
                const double lambda = (p[pivot] - b[pivot]) / diff[pivot];
                std::vector<double> miss(n);
                for (std::size_t k = 0; k < n; ++k) {
                    miss[k] = p[k] - (lambda * a[k] + (1.0 - lambda) * b[k]);
                }
                check.residual = norm_of(miss);
                const bool on_line = check.residual <= gate(std::max(ab_scale, norm_of(p)));
                const bool inside = lambda >= -slack && lambda <= 1.0 + slack;
                if (on_line && inside) {
                    const double l = std::min(1.0, std::max(0.0, lambda));
                    check.lambda = l;
                    switch (mode) {
                    case AxiomMode::Weighted: check.passed = true; break;
                    case AxiomMode::StrictWeighted: check.passed = l > slack && l < 1.0 - slack; break;
                    case AxiomMode::ExtremeWeighted: check.passed = l <= slack || l >= 1.0 - slack; break;
                    }
                } else {
                    check.collinear_outside = on_line;
                }
            }
            if (!check.passed) {
                report.violations.push_back(check);
            }
            report.checks.push_back(std::move(check));
        }
    }
    report.satisfied = report.violations.empty();
    return report;
}

Dataset perturb(const Dataset& data, double magnitude, std::uint64_t seed)
{
    if (!(magnitude >= 0.0)) {
        throw Error(ErrorCode::InvalidInput, "noise magnitude must be nonnegative");
    }
    Rng rng(seed);
    std::uniform_real_distribution<double> noise(-magnitude, magnitude);
    std::map<FeatureSet, Point> outcomes = data.outcomes();
    for (auto& [set, outcome] : outcomes) {
        if (set.size() < 2 || magnitude == 0.0) {
            continue;
        }
        for (Eigen::Index k = 0; k < outcome.size(); ++k) {
            outcome[k] += noise(rng);
        }
    }
    return Dataset(data.dimension(), std::move(outcomes));
}

} // namespace aggkit::testkit
