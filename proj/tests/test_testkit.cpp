#include "aggkit/belief.hpp"
#include "aggkit/testkit.hpp"
#include "support.hpp"

using namespace aggkit;
using namespace aggkit::testkit;
using aggkit::test::near;
using aggkit::test::pt;

namespace {

bool same_rep(const Representation& a, const Representation& b)
{
    if (a.features() != b.features()) {
        return false;
    }
    for (const auto& id : a.features()) {
        if (a.weight(id) != b.weight(id) || a.rank(id) != b.rank(id) || a.outcome(id) != b.outcome(id)) {
            return false;
        }
    }
    return true;
}

Dataset collinear_line()
{
    return Dataset(1, {
        {{"x"}, pt({0})},
        {{"y"}, pt({0.5})},
        {{"z"}, pt({1})},
        {{"x", "y"}, pt({0.25})},
        {{"y", "z"}, pt({0.75})},
        {{"x", "z"}, pt({0.375})},
        {{"x", "y", "z"}, pt({0.4375})},
    });
}

} // namespace

TEST_CASE("config validation")
{
    GeneratorConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    cfg.feature_count = 11;
    CHECK_CODE(cfg.validate(), ErrorCode::InvalidInput);
    cfg = {};
    cfg.rank_classes = 4;
    CHECK_CODE(cfg.validate(), ErrorCode::InvalidInput);
    cfg = {};
    cfg.feature_count = 2;
    cfg.rank_classes = 3;
    CHECK_CODE(cfg.validate(), ErrorCode::InvalidInput);
    cfg = {};
    cfg.weight_min = 0.0;
    CHECK_CODE(cfg.validate(), ErrorCode::InvalidInput);
    cfg = {};
    cfg.dimension = 7;
    CHECK_CODE(cfg.validate(), ErrorCode::InvalidInput);
}

TEST_CASE("policy names")
{
    for (auto p : {OutcomePolicy::RandomRich, OutcomePolicy::Collinear, OutcomePolicy::SimplexBeliefs,
             OutcomePolicy::MenuPoints}) {
        CHECK(parse_outcome_policy(to_string(p)) == p);
    }
    CHECK_FALSE(parse_outcome_policy("nope"));
}

TEST_CASE("generation is deterministic in the seed")
{
    GeneratorConfig cfg;
    cfg.seed = 42;
    cfg.feature_count = 6;
    cfg.rank_classes = 2;
    const auto a = gen_representation(cfg);
    const auto b = gen_representation(cfg);
    CHECK(same_rep(a, b));
    cfg.seed = 43;
    CHECK_FALSE(same_rep(a, gen_representation(cfg)));
    CHECK(a.rank_levels().size() == 2);
    CHECK(a.features().front() == FeatureId("f0"));
}

TEST_CASE("weights stay in range before anchoring")
{
    GeneratorConfig cfg;
    cfg.feature_count = 5;
    cfg.weight_min = 1.0;
    cfg.weight_max = 3.0;
    for (std::uint64_t s = 0; s < 20; ++s) {
        cfg.seed = s;
        const auto rep = gen_representation(cfg);
        double lo = 1e300, hi = 0.0;
        for (const auto& id : rep.features()) {
            lo = std::min(lo, rep.weight(id));
            hi = std::max(hi, rep.weight(id));
        }
        // Ratios of draws in [1, 3] lie within [1/3, 3].
        CHECK(hi / lo <= 3.0 + 1e-12);
    }
}

TEST_CASE("outcome policies")
{
    GeneratorConfig cfg;
    cfg.feature_count = 5;
    cfg.policy = OutcomePolicy::Collinear;
    const auto line = gen_representation(cfg);
    std::vector<Point> pts;
    for (const auto& id : line.features()) {
        pts.push_back(line.outcome(id));
    }
    CHECK(affine_dimension(pts, Tolerance{}) <= 1);
    CHECK_FALSE(check_richness(gen_dataset(line, SubsetPolicy::PairsAndTriples)));

    cfg.policy = OutcomePolicy::SimplexBeliefs;
    cfg.dimension = 3;
    const auto beliefs = gen_representation(cfg);
    for (const auto& id : beliefs.features()) {
        CHECK_NOTHROW(validate_belief(beliefs.outcome(id)));
    }

    cfg.policy = OutcomePolicy::RandomRich;
    cfg.dimension = 1;
    CHECK_CODE(gen_representation(cfg), ErrorCode::UnsatisfiablePolicy);
}

TEST_CASE("rich classes span a plane")
{
    GeneratorConfig cfg;
    cfg.feature_count = 8;
    cfg.rank_classes = 2;
    cfg.dimension = 3;
    for (std::uint64_t s = 0; s < 10; ++s) {
        cfg.seed = s;
        const auto rep = gen_representation(cfg);
        for (int r : rep.rank_levels()) {
            std::vector<Point> pts;
            for (const auto& id : rep.class_members(r)) {
                pts.push_back(rep.outcome(id));
            }
            CHECK(affine_dimension(pts, Tolerance{}) >= 2);
        }
    }
}

TEST_CASE("dataset subset policies")
{
    GeneratorConfig cfg;
    cfg.feature_count = 3;
    const auto three = gen_representation(cfg);
    CHECK(gen_dataset(three, SubsetPolicy::AllSubsets).sets().size() == 7);
    cfg.feature_count = 4;
    const auto four = gen_representation(cfg);
    CHECK(gen_dataset(four, SubsetPolicy::PairsAndTriples).sets().size() == 14);
    CHECK_CODE(gen_dataset(four, SubsetPolicy::Custom, {{"f0", "f1"}}), ErrorCode::MissingSingleton);
    const auto custom = gen_dataset(four, SubsetPolicy::Custom, {{"f0"}, {"f1"}, {"f0", "f1"}});
    CHECK(custom.sets().size() == 3);
    CHECK(near(*custom.query({"f0", "f1"}), evaluate(four, {"f0", "f1"})));
}

TEST_CASE("brute-force checker on the one-dimensional counterexample")
{
    const auto report = brute_force_axiom_check(collinear_line(), AxiomMode::StrictWeighted);
    CHECK(report.satisfied);
    CHECK(report.violations.empty());
}

TEST_CASE("both checkers name the same off-line pair")
{
    GeneratorConfig cfg;
    cfg.feature_count = 3;
    const auto rep = gen_representation(cfg);
    const Dataset base = gen_dataset(rep, SubsetPolicy::AllSubsets);
    Point moved = *base.query({"f0", "f1"});
    const Point along = rep.outcome("f1") - rep.outcome("f0");
    moved += 0.1 * Point(pt({-along[1], along[0]})).normalized();
    const Dataset bad = base.with({"f0", "f1"}, moved);
    const auto core = check_axiom(bad, AxiomMode::StrictWeighted);
    const auto brute = brute_force_axiom_check(bad, AxiomMode::StrictWeighted);
    CHECK_FALSE(core.satisfied);
    CHECK_FALSE(brute.satisfied);
    REQUIRE(core.violations.size() == brute.violations.size());
    bool named = false;
    for (std::size_t k = 0; k < core.violations.size(); ++k) {
        CHECK(core.violations[k].a == brute.violations[k].a);
        CHECK(core.violations[k].b == brute.violations[k].b);
        named = named || (core.violations[k].a == FeatureSet{"f0"} && core.violations[k].b == FeatureSet{"f1"});
    }
    CHECK(named);
}

TEST_CASE("perturbation")
{
    const Representation r0({
        {"x", {1.0, 0, pt({0, 0})}},
        {"y", {2.0, 0, pt({1, 0})}},
        {"z", {1.0, 0, pt({0, 1})}},
    });
    const Dataset d = gen_dataset(r0, SubsetPolicy::AllSubsets);
    const Dataset same = perturb(d, 0.0, 5);
    for (const auto& s : d.sets()) {
        CHECK(*same.query(s) == *d.query(s));
    }
    CHECK(check_axiom(perturb(d, 1e-12, 5), AxiomMode::StrictWeighted).satisfied);

    std::size_t failing = 0;
    for (std::uint64_t s = 0; s < 100; ++s) {
        const Dataset noisy = perturb(d, 0.1, s);
        CHECK(*noisy.query({"x"}) == *d.query({"x"}));
        const auto report = check_axiom(noisy, AxiomMode::StrictWeighted);
        failing += report.satisfied ? 0 : 1;
        CHECK(report.satisfied == brute_force_axiom_check(noisy, AxiomMode::StrictWeighted).satisfied);
    }
    CHECK(failing == 100);
}
