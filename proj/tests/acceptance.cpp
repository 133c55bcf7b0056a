// One PASS/FAIL line per acceptance criterion. Exit status is nonzero if any fails.

#include "aggkit/belief.hpp"
#include "aggkit/choice.hpp"
#include "aggkit/recovery.hpp"
#include "aggkit/social.hpp"
#include "aggkit/testkit.hpp"
#include "cli_cases.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace aggkit;
namespace tk = aggkit::testkit;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void fail(const std::string& why)
    {
        if (pass) {
            detail = why;
        }
        pass = false;
    }
};

Point pt(std::initializer_list<double> xs)
{
    Point p(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index k = 0;
    for (double x : xs) {
        p[k++] = x;
    }
    return p;
}

double rel_err(double got, double want)
{
    return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

double max_abs(const Point& p)
{
    double m = 0.0;
    for (Eigen::Index k = 0; k < p.size(); ++k) {
        m = std::max(m, std::abs(p[k]));
    }
    return m;
}

double dot(const Point& a, const Point& b)
{
    double s = 0.0;
    for (Eigen::Index k = 0; k < a.size(); ++k) {
        s += a[k] * b[k];
    }
    return s;
}

std::string seed_note(std::uint64_t seed, const std::string& what)
{
    return "seed " + std::to_string(seed) + ": " + what;
}

// Weighted average over the top rank, computed with plain loops.
Point forward(const Representation& rep, const FeatureSet& set)
{
    int top = rep.rank(*set.begin());
    for (const auto& id : set) {
        top = std::max(top, rep.rank(id));
    }
    Point sum = Point::Zero(static_cast<Eigen::Index>(rep.dimension()));
    double total = 0.0;
    for (const auto& id : set) {
        if (rep.rank(id) == top) {
            sum += rep.weight(id) * rep.outcome(id);
            total += rep.weight(id);
        }
    }
    return sum / total;
}

Outcome round_trip()
{
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    std::mt19937_64 rng(0xA11CE);
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        tk::GeneratorConfig cfg;
        cfg.seed = seed;
        cfg.rank_classes = 1 + static_cast<std::size_t>(rng() % 3);
        const std::size_t lo = std::min<std::size_t>(3 * cfg.rank_classes, 8);
        cfg.feature_count = lo + static_cast<std::size_t>(rng() % (9 - lo));
        cfg.dimension = 2 + static_cast<std::size_t>(rng() % 3);
        const Representation truth = tk::gen_representation(cfg);
        const auto outcome = recover(tk::gen_dataset(truth, tk::SubsetPolicy::AllSubsets));
        const Recovered* rec = outcome.recovered();
        if (rec == nullptr) {
            o.fail(seed_note(seed, "not recovered"));
            continue;
        }
        const auto ids = truth.features();
        for (const auto& a : ids) {
            for (const auto& b : ids) {
                const int want = (truth.rank(a) > truth.rank(b)) - (truth.rank(a) < truth.rank(b));
                const int got = (rec->rep.rank(a) > rec->rep.rank(b)) - (rec->rep.rank(a) < rec->rep.rank(b));
                if (want != got) {
                    o.fail(seed_note(seed, "rank partition differs on " + a.str() + ", " + b.str()));
                }
                if (want == 0
                    && rel_err(rec->rep.weight(a) / rec->rep.weight(b), truth.weight(a) / truth.weight(b)) > 1e-6) {
                    o.fail(seed_note(seed, "weight ratio " + a.str() + "/" + b.str()));
                }
            }
        }
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > 30.0) {
        o.fail("took " + std::to_string(secs) + " s");
    }
    if (o.pass) {
        o.detail = "200 seeds in " + std::to_string(secs).substr(0, 5) + " s";
    }
    return o;
}

Outcome counterexample()
{
    Outcome o;
    const Dataset d(1, {
        {{"x"}, pt({0})},
        {{"y"}, pt({0.5})},
        {{"z"}, pt({1})},
        {{"x", "y"}, pt({0.25})},
        {{"y", "z"}, pt({0.75})},
        {{"x", "z"}, pt({0.375})},
        {{"x", "y", "z"}, pt({0.4375})},
    });
    const auto axiom = check_axiom(d, AxiomMode::StrictWeighted);
    if (!axiom.satisfied || !axiom.violations.empty()) {
        o.fail("strict check reports violations");
    }
    const auto outcome = recover(d);
    const auto* bad = outcome.non_representable();
    if (bad == nullptr) {
        o.fail("recover did not return NonRepresentable");
        return o;
    }
    const Witness& w = bad->witness;
    if (!w.direct || !w.chained) {
        o.fail("witness lacks the two ratios");
        return o;
    }
    const bool xz = w.features.size() >= 2 && w.features[0] == FeatureId("x") && w.features[1] == FeatureId("z");
    if (!xz) {
        o.fail("witness is not on the (x,z) pair");
    }
    if (rel_err(w.direct->ratio, 5.0 / 3.0) > 1e-12 || rel_err(w.chained->ratio, 1.0) > 1e-12) {
        o.fail("ratios " + std::to_string(w.direct->ratio) + " and " + std::to_string(w.chained->ratio));
    }
    if (o.pass) {
        o.detail = "zero violations; ratios 5/3 (direct) vs 1 (chained) on (x,z)";
    }
    return o;
}

Outcome bayesian()
{
    Outcome o;
    std::mt19937_64 rng(0xBA7E5);
    double worst = 0.0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        tk::GeneratorConfig cfg;
        cfg.seed = seed;
        cfg.policy = tk::OutcomePolicy::SimplexBeliefs;
        cfg.dimension = 2 + static_cast<std::size_t>(rng() % 4);
        cfg.feature_count = 2 + static_cast<std::size_t>(rng() % 5);
        const Representation rep = tk::gen_representation(cfg);
        const Dataset data = tk::gen_dataset(rep, tk::SubsetPolicy::AllSubsets);
        const auto verdict = check_bayesian(data);
        if (!verdict.bayesian || !verdict.joint) {
            o.fail(seed_note(seed, "no joint probability"));
            continue;
        }
        const auto& table = verdict.joint->table();
        const auto& cols = verdict.joint->features();
        const std::size_t states = cfg.dimension;
        for (const auto& set : data.sets()) {
            const Point f = *data.query(set);
            double px = 0.0;
            for (std::size_t c = 0; c < cols.size(); ++c) {
                if (set.contains(cols[c])) {
                    px += table.col(static_cast<Eigen::Index>(c)).sum();
                }
            }
            for (std::uint32_t mask = 1; mask < (1u << states); ++mask) {
                double lhs = 0.0, joint = 0.0;
                for (std::size_t s = 0; s < states; ++s) {
                    if ((mask >> s & 1u) == 0) {
                        continue;
                    }
                    lhs += f[static_cast<Eigen::Index>(s)];
                    for (std::size_t c = 0; c < cols.size(); ++c) {
                        if (set.contains(cols[c])) {
                            joint += table(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(c));
                        }
                    }
                }
                worst = std::max(worst, std::abs(lhs - joint / px));
            }
        }
    }
    if (worst > 1e-9) {
        o.fail("max residual " + std::to_string(worst));
    }
    if (o.pass) {
        std::ostringstream s;
        s << "100 seeds, max residual " << worst;
        o.detail = s.str();
    }
    return o;
}

Outcome cps()
{
    Outcome o;
    std::size_t tiered = 0;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        tk::GeneratorConfig cfg;
        cfg.seed = seed;
        cfg.policy = tk::OutcomePolicy::SimplexBeliefs;
        cfg.dimension = 2 + seed % 3;
        cfg.feature_count = 2 + seed % 5;
        cfg.rank_classes = std::min<std::size_t>(1 + seed % 3, cfg.feature_count);
        const Representation rep = tk::gen_representation(cfg);
        tiered += rep.single_class() ? 0 : 1;
        const auto system = build_cps(rep);
        const auto report = verify_cps(system);
        if (!report.valid) {
            o.fail(seed_note(seed, std::to_string(report.violations.size()) + " violations"));
        }
        // The stored beliefs must also reproduce the representation.
        for (const auto& [set, table] : system.conditionals) {
            if (max_abs(system.belief(set) - forward(rep, set)) > 1e-12) {
                o.fail(seed_note(seed, "belief of " + set.str()));
            }
        }
    }
    if (tiered == 0) {
        o.fail("no multi-tier representation generated");
    }
    if (o.pass) {
        o.detail = "200 seeds (" + std::to_string(tiered) + " multi-tier), zero violations";
    }
    return o;
}

Outcome discount()
{
    Outcome o;
    const std::map<FeatureId, double> w{{"x", 1.0}, {"y", 2.0}, {"z", 0.5}};
    const std::map<FeatureId, Point> f{{"x", pt({0.7, 0.2, 0.1})}, {"y", pt({0.1, 0.6, 0.3})}, {"z", pt({0.2, 0.2, 0.6})}};
    auto oracle = [&](double q) {
        return TimedOracle([&, q](const TimedQuery& query) -> std::optional<Point> {
            Point sum = Point::Zero(3);
            double total = 0.0;
            for (const auto& [id, t] : query.timing) {
                const double m = std::pow(q, t) * w.at(id);
                sum += m * f.at(id);
                total += m;
            }
            return sum / total;
        });
    };
    std::mt19937_64 rng(0xD15C);
    std::uniform_int_distribution<int> when(1, 6);
    for (double q : {0.25, 0.5, 1.0, 2.0}) {
        DiscountOptions options;
        options.seed = 3;
        for (int k = 0; k < 5; ++k) {
            options.validation.push_back(TimedQuery{{"x", "y", "z"}, {{"x", when(rng)}, {"y", when(rng)}, {"z", when(rng)}}});
        }
        const auto out = recover_discounted(oracle(q), {"x", "y", "z"}, 3, options);
        if (rel_err(out.q, q) > 1e-9) {
            o.fail("q = " + std::to_string(q) + " recovered as " + std::to_string(out.q));
        }
        if (!out.verified) {
            o.fail("validation failed for q = " + std::to_string(q));
        }
    }
    double shift = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        const TimedQuery query{{"x", "y", "z"}, {{"x", when(rng)}, {"y", when(rng)}, {"z", when(rng)}}};
        for (double q : {0.25, 0.5, 1.0, 2.0}) {
            const Point base = evaluate_discounted(q, w, f, query);
            for (int c : {1, 2, 3}) {
                shift = std::max(shift, max_abs(evaluate_discounted(q, w, f, query.shifted(c)) - base));
            }
        }
    }
    if (shift > 1e-12) {
        o.fail("shift changes output by " + std::to_string(shift));
    }
    if (o.pass) {
        std::ostringstream s;
        s << "q in {0.25, 0.5, 1, 2} recovered; max shift difference " << shift;
        o.detail = s.str();
    }
    return o;
}

Point random_unit(std::mt19937_64& rng, std::size_t d)
{
    std::normal_distribution<double> g;
    Point p(static_cast<Eigen::Index>(d));
    for (auto& x : p) {
        x = g(rng);
    }
    return p / std::sqrt(dot(p, p));
}

// Least squares of c = a*uA + b*uB through the 2x2 Gram system.
bool hand_in_cone(const Point& uA, const Point& uB, const Point& uAB, double tol)
{
    const double g11 = dot(uA, uA), g12 = dot(uA, uB), g22 = dot(uB, uB);
    const double r1 = dot(uA, uAB), r2 = dot(uB, uAB);
    const double det = g11 * g22 - g12 * g12;
    const double a = (r1 * g22 - r2 * g12) / det;
    const double b = (g11 * r2 - g12 * r1) / det;
    const Point res = uAB - a * uA - b * uB;
    return std::sqrt(dot(res, res)) <= tol && a > tol && b > tol;
}

Outcome farkas()
{
    Outcome o;
    std::mt19937_64 rng(0xFA7CA5);
    std::uniform_real_distribution<double> unit(0.05, 1.0);
    const Tolerance tol;
    std::size_t counts[3] = {0, 0, 0};
    std::size_t grid_checks = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t d = 2 + static_cast<std::size_t>(trial % 3);
        Point v = random_unit(rng, d);
        auto on_h = [&](Point u) {
            if (dot(u, v) < 0) {
                u = -u;
            }
            if (dot(u, v) < 0.05) {
                u += 0.1 * v;
            }
            return Point(u / dot(u, v));
        };
        const Point uA = on_h(random_unit(rng, d));
        const Point uB = trial % 10 == 9 ? on_h(uA + 1e-7 * random_unit(rng, d)) : on_h(random_unit(rng, d));
        Point uAB;
        switch (trial % 4) {
        case 0: uAB = unit(rng) * uA + unit(rng) * uB; break;
        case 1: uAB = unit(rng) * uA - 0.5 * unit(rng) * uB; break;
        case 2: uAB = random_unit(rng, d); break;
        default: uAB = uA; break;
        }
        uAB = on_h(uAB);
        FarkasOutcome out;
        try {
            out = check_consistency_pair(uA, uB, uAB, tol);
        } catch (const Error& e) {
            o.fail("trial " + std::to_string(trial) + ": " + e.what());
            continue;
        }
        counts[out.index()]++;
        const double scale = std::max({std::sqrt(dot(uA, uA)), std::sqrt(dot(uB, uB)), std::sqrt(dot(uAB, uAB))});
        const double gate = tol.bound(scale);
        if (const auto* in = std::get_if<InCone>(&out)) {
            const Point res = uAB - in->alpha * uA - in->beta * uB;
            if (!(in->alpha > 0 && in->beta > 0 && std::sqrt(dot(res, res)) <= 10 * gate)) {
                o.fail("trial " + std::to_string(trial) + ": InCone does not verify");
            }
            for (int k = 0; k < 10000; ++k) {
                const Point z = random_unit(rng, d);
                ++grid_checks;
                if (dot(z, uA) >= 0 && dot(z, uB) >= 0 && dot(z, uAB) < -gate) {
                    o.fail("trial " + std::to_string(trial) + ": grid found a certificate inside the cone");
                    break;
                }
            }
        } else if (const auto* c = std::get_if<Certificate>(&out)) {
            const double zn = std::sqrt(dot(c->z, c->z));
            const bool signs = dot(c->z, uA) >= -gate * zn && dot(c->z, uB) >= -gate * zn
                && (c->boundary ? std::abs(dot(c->z, uAB)) <= gate * zn : dot(c->z, uAB) < -gate * zn);
            if (!signs) {
                o.fail("trial " + std::to_string(trial) + ": certificate signs do not verify");
            }
            if (hand_in_cone(uA, uB, uAB, gate)) {
                o.fail("trial " + std::to_string(trial) + ": certificate returned for an in-cone triple");
            }
        } else {
            const double cos = dot(uA, uB) / std::sqrt(dot(uA, uA) * dot(uB, uB));
            if (std::abs(std::abs(cos) - 1.0) > 1e-6) {
                o.fail("trial " + std::to_string(trial) + ": Collinear for non-parallel generators");
            }
        }
    }
    if (counts[0] == 0 || counts[1] == 0) {
        o.fail("sample did not exercise both main variants");
    }
    if (o.pass) {
        o.detail = "1000 triples: " + std::to_string(counts[0]) + " in cone, " + std::to_string(counts[1])
            + " certificates, " + std::to_string(counts[2]) + " collinear; " + std::to_string(grid_checks)
            + " grid directions";
    }
    return o;
}

double rho_of(const Representation& rep, const FeatureId& x, const FeatureSet& menu)
{
    int top = rep.rank(*menu.begin());
    for (const auto& id : menu) {
        top = std::max(top, rep.rank(id));
    }
    if (rep.rank(x) != top) {
        return 0.0;
    }
    double total = 0.0;
    for (const auto& id : menu) {
        total += rep.rank(id) == top ? rep.weight(id) : 0.0;
    }
    return rep.weight(x) / total;
}

Outcome luce()
{
    Outcome o;
    const Tolerance tol;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        tk::GeneratorConfig cfg;
        cfg.seed = seed;
        cfg.policy = tk::OutcomePolicy::MenuPoints;
        cfg.feature_count = 3 + seed % 4;
        cfg.dimension = 2 + seed % 2;
        cfg.rank_classes = seed % 2 == 0 ? 1 : 2;
        if (cfg.rank_classes == 2) {
            cfg.feature_count = 6;
        }
        const Representation rep = tk::gen_representation(cfg);
        const Dataset data = tk::gen_dataset(rep, tk::SubsetPolicy::AllSubsets);
        const LuceVerdict v = cfg.rank_classes == 1 ? recover_luce(data) : recover_two_stage_luce(data).luce;
        if (v.status != LuceStatus::Rationalizable) {
            o.fail(seed_note(seed, std::string("status ") + std::string(to_string(v.status))));
            continue;
        }
        std::map<FeatureId, Point> coords;
        for (const auto& id : rep.features()) {
            coords[id] = rep.outcome(id);
        }
        std::map<std::pair<FeatureId, FeatureId>, double> ratio;
        for (const auto& menu : data.sets()) {
            const ChoiceDistribution rho = choice_probabilities(v.weights, v.ranks, menu);
            double total = 0.0;
            for (const auto& [id, p] : rho.probs) {
                total += p;
                if (p < 0) {
                    o.fail(seed_note(seed, "negative probability"));
                }
            }
            if (std::abs(total - 1.0) > 1e-12) {
                o.fail(seed_note(seed, "probabilities do not sum to one"));
            }
            if (max_abs(rho.mean(coords) - *data.query(menu)) > tol.bound(max_abs(*data.query(menu)))) {
                o.fail(seed_note(seed, "mean choice differs on " + menu.str()));
            }
            for (const auto& x : menu) {
                for (const auto& y : menu) {
                    if (x == y || rho.at(x) == 0.0 || rho.at(y) == 0.0) {
                        continue;
                    }
                    const double r = rho.at(x) / rho.at(y);
                    auto [it, fresh] = ratio.emplace(std::make_pair(x, y), r);
                    if (!fresh && rel_err(r, it->second) > 1e-9) {
                        o.fail(seed_note(seed, "IIA ratio varies for " + x.str() + ", " + y.str()));
                    }
                    if (rel_err(r, rho_of(rep, x, menu) / rho_of(rep, y, menu)) > 1e-9) {
                        o.fail(seed_note(seed, "ratio differs from the generator"));
                    }
                }
            }
        }
    }
    if (o.pass) {
        o.detail = "100 seeds (one- and two-stage), ratios constant and means reproduced";
    }
    return o;
}

Outcome path_independence()
{
    Outcome o;
    std::mt19937_64 rng(0x9A7);
    std::uniform_real_distribution<double> coord(-2.0, 2.0);
    std::map<FeatureId, Point> coords;
    std::vector<std::pair<Point, int>> priority;
    std::vector<FeatureId> ids;
    for (int k = 0; k < 8; ++k) {
        const FeatureId id("p" + std::to_string(k));
        coords[id] = pt({coord(rng), coord(rng)});
        priority.emplace_back(coords[id], static_cast<int>((k * 5) % 8));
        ids.push_back(id);
    }
    std::vector<std::pair<FeatureSet, FeatureSet>> pairs;
    while (pairs.size() < 50) {
        std::vector<FeatureId> a, b;
        for (const auto& id : ids) {
            const auto r = rng() % 3;
            if (r == 0) {
                a.push_back(id);
            } else if (r == 1) {
                b.push_back(id);
            }
        }
        if (!a.empty() && !b.empty()) {
            pairs.emplace_back(FeatureSet(a), FeatureSet(b));
        }
    }
    const auto dict = check_path_independence(make_dictatorial_oracle(priority), coords, pairs);
    if (!dict.satisfied || dict.max_residual > 1e-12 || dict.rows.size() != 50) {
        o.fail("dictatorial residual " + std::to_string(dict.max_residual));
    }
    const std::map<FeatureId, Point> fixture{{"x", pt({0, 0})}, {"y", pt({1, 0})}, {"z", pt({0, 1})}};
    const auto luce = check_path_independence(
        make_luce_menu_oracle({{pt({0, 0}), 1.0}, {pt({1, 0}), 2.0}, {pt({0, 1}), 1.0}}), fixture,
        {{{"x"}, {"y", "z"}}});
    if (luce.max_residual <= 1e-3) {
        o.fail("Luce residual " + std::to_string(luce.max_residual));
    }
    if (o.pass) {
        std::ostringstream s;
        s << "dictatorial max residual " << dict.max_residual << " on 50 pairs; Luce residual " << luce.max_residual;
        o.detail = s.str();
    }
    return o;
}

Outcome state_dependent()
{
    Outcome o;
    std::mt19937_64 rng(0x5E0);
    std::uniform_real_distribution<double> mass(0.2, 1.0);
    double worst_p = 0.0, worst_id = 0.0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const std::size_t states = 2 + seed % 5;
        const std::size_t m = 3 + seed % 2;
        Point v = random_unit(rng, m).cwiseAbs() + Point::Constant(static_cast<Eigen::Index>(m), 0.1);
        std::vector<FeatureId> ids;
        std::map<FeatureId, double> p;
        std::map<FeatureId, Point> u;
        double total = 0.0;
        for (std::size_t s = 0; s < states; ++s) {
            const FeatureId id("s" + std::to_string(s));
            ids.push_back(id);
            p[id] = mass(rng);
            total += p[id];
            Point raw = random_unit(rng, m);
            if (dot(raw, v) < 0.2) {
                raw += v;
            }
            u[id] = raw / dot(raw, v);
        }
        for (auto& [id, x] : p) {
            x /= total;
        }
        auto conditional = [&](const FeatureSet& a, const std::map<FeatureId, double>& prior,
                               const std::map<FeatureId, Point>& util) {
            Point sum = Point::Zero(static_cast<Eigen::Index>(m));
            double pa = 0.0;
            for (const auto& id : a) {
                sum += prior.at(id) * util.at(id);
                pa += prior.at(id);
            }
            return Point(sum / pa);
        };
        std::map<FeatureSet, Point> events;
        for (const auto& a : all_subsets(ids)) {
            events.emplace(a, conditional(a, p, u));
        }
        const auto out = recover_state_dependent(Dataset(m, events), v);
        if (!out.representation) {
            o.fail(seed_note(seed, "no representation"));
            continue;
        }
        for (const auto& id : ids) {
            worst_p = std::max(worst_p, rel_err(out.representation->P.at(id), p.at(id)));
        }
        for (const auto& [a, ua] : events) {
            worst_id = std::max(worst_id, max_abs(conditional(a, out.representation->P, out.representation->u) - ua));
        }
    }
    if (worst_p > 1e-6) {
        o.fail("P relative error " + std::to_string(worst_p));
    }
    if (worst_id > 1e-9) {
        o.fail("identity residual " + std::to_string(worst_id));
    }
    if (o.pass) {
        std::ostringstream s;
        s << "100 seeds, P rel err " << worst_p << ", identity residual " << worst_id;
        o.detail = s.str();
    }
    return o;
}

Outcome gswf()
{
    Outcome o;
    const PreferenceLibrary lib{{"r1", pt({0, 1, 0, 0})}, {"r2", pt({0, 0, 2, 0})}, {"r3", pt({0, 0.5, 0.5, 3})}};
    const Point v = pt({0, 1, 1, 1});
    const std::vector<FeatureId> people{"i1", "i2", "i3", "i4", "i5"};
    auto oracle_for = [&](const GswfTable& truth) {
        return GswfOracle([&lib, &v, truth](const Assignment& c) -> std::optional<UtilityVector> {
            Point sum = Point::Zero(v.size());
            double total = 0.0;
            for (const auto& [i, r] : c) {
                const double w = truth.at({i, r});
                sum += w * lib.at(r) / dot(lib.at(r), v);
                total += w;
            }
            return sum / total;
        });
    };
    std::mt19937_64 rng(0x65F);
    std::uniform_real_distribution<double> draw(0.3, 3.0);
    GswfTable truth;
    for (const auto& i : people) {
        for (const auto& [r, u] : lib) {
            truth[{i, r}] = draw(rng);
        }
    }
    const auto rec = recover_gswf_weights(oracle_for(truth), people, lib, v);
    const double scale = truth.at({people.front(), lib.begin()->first});
    double worst = 0.0;
    for (const auto& [key, w] : truth) {
        worst = std::max(worst, rel_err(rec.weights.at(key) * scale, w));
    }
    if (worst > 1e-9) {
        o.fail("max relative error " + std::to_string(worst));
    }
    GswfTable anon;
    std::map<std::string, double> by_pref;
    for (const auto& [r, u] : lib) {
        by_pref[r] = draw(rng);
    }
    for (const auto& i : people) {
        for (const auto& [r, w] : by_pref) {
            anon[{i, r}] = w;
        }
    }
    const auto sym = recover_gswf_weights(oracle_for(anon), people, lib, v);
    for (const auto& [r, w] : by_pref) {
        for (const auto& i : people) {
            if (rel_err(sym.weights.at({i, r}), sym.weights.at({people.front(), r})) > 1e-9) {
                o.fail("anonymous oracle gives individual-dependent weights");
            }
        }
    }
    if (!is_anonymous(sym.weights) || is_anonymous(rec.weights)) {
        o.fail("anonymity flag is wrong");
    }
    if (o.pass) {
        std::ostringstream s;
        s << "5 x 3 table, max rel err " << worst << "; anonymous oracle gives an individual-independent table";
        o.detail = s.str();
    }
    return o;
}

Outcome oracle_equivalence()
{
    Outcome o;
    std::size_t violated = 0, collinear = 0;
    const AxiomMode modes[] = {AxiomMode::Weighted, AxiomMode::StrictWeighted, AxiomMode::ExtremeWeighted};
    for (std::uint64_t seed = 0; seed < 500; ++seed) {
        tk::GeneratorConfig cfg;
        cfg.seed = seed;
        cfg.feature_count = 3 + seed % 3;
        cfg.rank_classes = 1 + seed % 2;
        cfg.policy = seed % 4 == 1 ? tk::OutcomePolicy::Collinear : tk::OutcomePolicy::RandomRich;
        collinear += cfg.policy == tk::OutcomePolicy::Collinear ? 1 : 0;
        Dataset data = tk::gen_dataset(tk::gen_representation(cfg), tk::SubsetPolicy::AllSubsets);
        if (seed % 3 == 2) {
            data = tk::perturb(data, 0.05, seed);
        }
        const AxiomMode mode = modes[seed % 3];
        const auto core = check_axiom(data, mode);
        const auto brute = tk::brute_force_axiom_check(data, mode);
        violated += core.satisfied ? 0 : 1;
        if (core.satisfied != brute.satisfied || core.violations.size() != brute.violations.size()) {
            o.fail(seed_note(seed, "verdicts differ"));
            continue;
        }
        for (std::size_t k = 0; k < core.violations.size(); ++k) {
            if (!(core.violations[k].a == brute.violations[k].a) || !(core.violations[k].b == brute.violations[k].b)) {
                o.fail(seed_note(seed, "violation sets differ"));
            }
        }
    }
    if (o.pass) {
        o.detail = "500 datasets (" + std::to_string(collinear) + " collinear, " + std::to_string(violated)
            + " violating) agree";
    }
    return o;
}

Outcome cli_determinism()
{
    Outcome o;
    const auto cases = aggkit::test::shipped_cases(AGGKIT_FIXTURE_DIR);
    bool negative = false, malformed = false, missing = false;
    for (const auto& c : cases) {
        const auto a = aggkit::test::run_cli(c.args);
        const auto b = aggkit::test::run_cli(c.args);
        const std::string name = c.args.front() + " " + c.args.back();
        if (a.out != b.out || a.err != b.err || a.exit != b.exit) {
            o.fail(name + ": output differs between runs");
        }
        if (a.exit != c.exit) {
            o.fail(name + ": exit " + std::to_string(a.exit) + ", expected " + std::to_string(c.exit));
        }
        negative = negative || c.exit == cli::Negative;
        malformed = malformed || c.exit == cli::InputFailure;
        missing = missing || c.exit == cli::MissingInput;
    }
    if (!negative || !malformed || !missing) {
        o.fail("fixture set lacks a negative, malformed or missing-data case");
    }
    if (o.pass) {
        o.detail = std::to_string(cases.size()) + " invocations byte-identical, exit codes as documented";
    }
    return o;
}

} // namespace

int main()
{
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"round-trip recovery", round_trip},
        {"one-dimensional counterexample", counterexample},
        {"Bayesian equivalence", bayesian},
        {"CPS properties", cps},
        {"discount identification", discount},
        {"Farkas exclusivity", farkas},
        {"Luce and IIA", luce},
        {"path independence discrimination", path_independence},
        {"state-dependent SEU round-trip", state_dependent},
        {"GSWF recovery", gswf},
        {"oracle equivalence", oracle_equivalence},
        {"CLI determinism", cli_determinism},
    };
    int failures = 0;
    int n = 0;
    for (const auto& [name, run] : criteria) {
        ++n;
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o.fail(std::string("exception: ") + e.what());
        }
        std::printf("%s criterion %2d (%s): %s\n", o.pass ? "PASS" : "FAIL", n, name, o.detail.c_str());
        failures += o.pass ? 0 : 1;
    }
    std::printf("%d of %d criteria passed\n", n - failures, n);
    return failures == 0 ? 0 : 1;
}
