#include "aggkit/social.hpp"

#include <algorithm>
#include <cmath>

namespace aggkit {

UtilityVector normalize_to_H(const UtilityVector& u, const Point& v, const Tolerance& tol)
{
    require_same_dimension(u, v);
    require_finite(u);
    const double ip = u.dot(v);
    if (!(ip > tol.bound(u.norm() * v.norm()))) {
        throw Error(ErrorCode::MinimalAgreementViolated,
            "utility has <u,v> = " + std::to_string(ip) + "; the agreement direction is not strictly preferred");
    }
    return u / ip;
}

bool certificate_valid(const Point& z, const UtilityVector& uA, const UtilityVector& uB, const UtilityVector& uAB,
    const Tolerance& tol)
{
    const double zn = z.norm();
    return z.dot(uA) >= -tol.bound(zn * uA.norm()) && z.dot(uB) >= -tol.bound(zn * uB.norm())
        && z.dot(uAB) < -tol.bound(zn * uAB.norm());
}

namespace {

// Component of `b` orthogonal to `a`.
// Projected twice: a single pass leaves a component along `a` of order eps * |b| / |result|,
// which dominates for nearly parallel inputs.
Point reject(const Point& b, const Point& a)
{
    const Point once = b - (a.dot(b) / a.squaredNorm()) * a;
    return once - (a.dot(once) / a.squaredNorm()) * a;
}

Certificate make_certificate(Point z, const UtilityVector& uA, const UtilityVector& uB, const UtilityVector& uAB)
{
    z.normalize();
    return {z, z.dot(uA), z.dot(uB), z.dot(uAB), false};
}

} // namespace

FarkasOutcome check_consistency_pair(
    const UtilityVector& uA, const UtilityVector& uB, const UtilityVector& uAB, const Tolerance& tol)
{
    require_same_dimension(uA, uB);
    require_same_dimension(uA, uAB);
    require_finite(uA);
    require_finite(uB);
    require_finite(uAB);
    const double scale = std::max({uA.norm(), uB.norm(), uAB.norm()});
    if (uA.norm() <= tol.bound(scale) || uB.norm() <= tol.bound(scale)) {
        return Collinear{};
    }
    const Point nA = reject(uB, uA);
    const Point nB = reject(uA, uB);
    if (nA.norm() <= tol.bound(uB.norm())) {
        return Collinear{};
    }

    // Orthonormal frame of span{uA, uB}; the residual stays accurate for nearly parallel generators.
    const Point e1 = uA.normalized();
    const Point e2 = nA.normalized();
    const double c1 = e1.dot(uAB);
    const double c2 = e2.dot(uAB);
    const Point r = uAB - c1 * e1 - c2 * e2;
    const double beta = c2 / e2.dot(uB);
    const Eigen::Vector2d coef((c1 - beta * e1.dot(uB)) / uA.norm(), beta);
    const double residual = r.norm();
    const bool in_span = residual <= tol.bound(scale);
    const double slack = tol.slack();
    if (in_span && coef[0] > slack && coef[1] > slack) {
        return InCone{coef[0], coef[1], residual};
    }

    Certificate cert;
    if (!in_span) {
        cert = make_certificate(-r, uA, uB, uAB);
    } else {
        // Normal to one generator, pointing at the other; keep whichever separates more.
        Certificate toward_b = make_certificate(nA, uA, uB, uAB);
        Certificate toward_a = make_certificate(nB, uA, uB, uAB);
        cert = toward_b.z_ab <= toward_a.z_ab ? toward_b : toward_a;
    }
    const double gate = tol.bound(uAB.norm());
    cert.boundary = cert.z_ab >= -gate;
    const bool signs = cert.z_a >= -tol.bound(uA.norm()) && cert.z_b >= -tol.bound(uB.norm());
    if (!signs || (cert.boundary && (!in_span || cert.z_ab > gate))) {
        throw Error(ErrorCode::ResidualTooLarge, "no separating direction validates; inputs look corrupt");
    }
    return cert;
}

UtilityVector aggregate_coalition(const std::map<FeatureId, double>& weights, const Profile& profile,
    const FeatureSet& coalition, const Point& v, const Tolerance& tol)
{
    if (coalition.empty()) {
        throw Error(ErrorCode::InvalidInput, "empty coalition");
    }
    Point sum = Point::Zero(v.size());
    double total = 0.0;
    for (const auto& id : coalition) {
        auto w = weights.find(id);
        auto u = profile.find(id);
        if (w == weights.end() || u == profile.end()) {
            throw Error(ErrorCode::UnknownFeature, "individual " + id.str());
        }
        if (!(w->second > 0.0)) {
            throw Error(ErrorCode::InvalidInput, "weight of " + id.str() + " must be positive");
        }
        sum += w->second * normalize_to_H(u->second, v, tol);
        total += w->second;
    }
    return sum / total;
}

ParetoReport check_extended_pareto(const Dataset& coalitions, const Point& v, const Tolerance& tol)
{
    std::map<FeatureSet, Point> normalized;
    for (const auto& [set, u] : coalitions.outcomes()) {
        try {
            normalized.emplace(set, normalize_to_H(u, v, tol));
        } catch (const Error& e) {
            throw Error(e.code(), "coalition " + set.str() + ": " + e.message());
        }
    }
    ParetoReport report;
    report.normalized.emplace(coalitions.dimension(), std::move(normalized));
    const Dataset& data = *report.normalized;
    report.axiom = check_axiom(data, AxiomMode::StrictWeighted, tol);
    report.satisfied = report.axiom.satisfied;
    for (const auto& check : report.axiom.violations) {
        const Point uA = *data.query(check.a);
        const Point uB = *data.query(check.b);
        const Point uAB = *data.query(check.a.united(check.b));
        ParetoViolation violation{check, std::nullopt};
        const auto farkas = check_consistency_pair(uA, uB, uAB, tol);
        if (const auto* cert = std::get_if<Certificate>(&farkas)) {
            violation.certificate = *cert;
        } else if (std::holds_alternative<Collinear>(farkas)) {
            // Both parts share one ray; separate the union's utility from it.
            const Point d = reject(uAB, uA);
            if (d.norm() > tol.bound(uAB.norm())) {
                violation.certificate = make_certificate(-d, uA, uB, uAB);
            }
        }
        report.violations.push_back(std::move(violation));
    }
    if (report.satisfied) {
        report.recovery = recover(data, RecoveryOptions{tol, {}});
    }
    return report;
}

namespace {

std::map<std::string, Point> normalize_library(const PreferenceLibrary& library, const Point& v, const Tolerance& tol)
{
    std::map<std::string, Point> out;
    for (const auto& [id, u] : library) {
        try {
            out.emplace(id, normalize_to_H(u, v, tol));
        } catch (const Error& e) {
            throw Error(e.code(), "preference " + id + ": " + e.message());
        }
    }
    return out;
}

const Point& lookup_preference(const std::map<std::string, Point>& hat, const std::string& id)
{
    auto it = hat.find(id);
    if (it == hat.end()) {
        throw Error(ErrorCode::InvalidInput, "unknown preference " + id);
    }
    return it->second;
}

} // namespace

std::size_t profile_dimension(const Assignment& profile, const PreferenceLibrary& library, const Point& v,
    const Tolerance& tol)
{
    const auto hat = normalize_library(library, v, tol);
    std::vector<Point> points;
    for (const auto& [individual, pref] : profile) {
        points.push_back(lookup_preference(hat, pref));
    }
    return affine_dimension(points, tol);
}

UtilityVector evaluate_gswf(const GswfTable& weights, const Assignment& coalition, const PreferenceLibrary& library,
    const Point& v, const Tolerance& tol)
{
    if (coalition.empty()) {
        throw Error(ErrorCode::InvalidInput, "empty coalition");
    }
    const auto hat = normalize_library(library, v, tol);
    Point sum = Point::Zero(v.size());
    double total = 0.0;
    for (const auto& [individual, pref] : coalition) {
        auto w = weights.find({individual, pref});
        if (w == weights.end()) {
            throw Error(ErrorCode::UnknownFeature, "no weight for (" + individual.str() + ", " + pref + ")");
        }
        sum += w->second * lookup_preference(hat, pref);
        total += w->second;
    }
    return sum / total;
}

GswfRecovery recover_gswf_weights(const GswfOracle& oracle, const std::vector<FeatureId>& individuals,
    const PreferenceLibrary& library, const Point& v, const std::vector<Assignment>& validation, const Tolerance& tol)
{
    std::vector<FeatureId> people = individuals;
    std::sort(people.begin(), people.end());
    people.erase(std::unique(people.begin(), people.end()), people.end());
    if (people.size() < 4) {
        throw Error(ErrorCode::PreconditionFailed, "weight recovery needs at least four individuals");
    }
    if (v.size() < 3) {
        throw Error(ErrorCode::PreconditionFailed, "utilities need at least three coordinates to span a plane in H");
    }
    if (library.empty()) {
        throw Error(ErrorCode::PreconditionFailed, "empty preference library");
    }
    const auto hat = normalize_library(library, v, tol);
    std::vector<std::string> prefs;
    for (const auto& entry : hat) {
        prefs.push_back(entry.first);
    }
    auto same = [&](const std::string& r, const std::string& s) { return coincident(hat.at(r), hat.at(s), tol); };

    GswfRecovery out;
    out.reference_individual = people[0];
    out.reference_preference = prefs[0];
    out.weights[{people[0], prefs[0]}] = 1.0;

    // Completes a two-person assignment to a full profile spanning a plane in H.
    auto qualifying_profile = [&](const Assignment& fixed) {
        std::vector<FeatureId> free;
        for (const auto& id : people) {
            if (!fixed.count(id)) {
                free.push_back(id);
            }
        }
        for (const auto& s : prefs) {
            for (const auto& t : prefs) {
                Assignment profile = fixed;
                for (std::size_t k = 0; k < free.size(); ++k) {
                    profile[free[k]] = k == 1 ? t : s;
                }
                std::vector<Point> points;
                for (const auto& entry : profile) {
                    points.push_back(hat.at(entry.second));
                }
                if (affine_dimension(points, tol) >= 2) {
                    return profile;
                }
            }
        }
        std::string names;
        for (const auto& [id, pref] : fixed) {
            names += " (" + id.str() + ", " + pref + ")";
        }
        throw Error(ErrorCode::ProfileConstructionFailed, "no profile in the library spans a plane around" + names);
    };

    // w(i, r) from a known partner (k, s) with a different normalized utility.
    auto derive = [&](const FeatureId& i, const std::string& r, const FeatureId& k, const std::string& s) {
        const Assignment profile = qualifying_profile({{i, r}, {k, s}});
        const Assignment coalition{{i, profile.at(i)}, {k, profile.at(k)}};
        out.queries.push_back(coalition);
        const auto answer = oracle(coalition);
        if (!answer) {
            throw Error(ErrorCode::OracleRefused, "oracle refused the coalition {" + i.str() + "," + k.str() + "}");
        }
        const Point u = normalize_to_H(*answer, v, tol);
        const auto c = segment_coefficient(u, hat.at(r), hat.at(s), tol);
        const auto* on = std::get_if<OnSegment>(&c);
        if (on == nullptr || on->lambda <= tol.slack() || on->lambda >= 1.0 - tol.slack()) {
            throw Error(ErrorCode::DegenerateLambda,
                "coalition {" + i.str() + "," + k.str() + "} is not a strict average of its members");
        }
        out.weights[{i, r}] = out.weights.at({k, s}) * on->lambda / (1.0 - on->lambda);
    };

    auto first_unlike = [&](const std::string& r) -> const std::string& {
        for (const auto& s : prefs) {
            if (!same(r, s)) {
                return s;
            }
        }
        throw Error(ErrorCode::ProfileConstructionFailed, "every preference normalizes to " + r + "'s utility");
    };

    const FeatureId& first = people[0];
    const FeatureId& second = people[1];
    const std::string& r_hat = prefs[0];
    for (std::size_t n = 1; n < people.size(); ++n) {
        for (const auto& r : prefs) {
            if (!same(r, r_hat)) {
                derive(people[n], r, first, r_hat);
            }
        }
    }
    for (std::size_t n = 1; n < people.size(); ++n) {
        const FeatureId& k = people[n == 1 ? 2 : 1];
        for (const auto& r : prefs) {
            if (same(r, r_hat)) {
                derive(people[n], r, k, first_unlike(r_hat));
            }
        }
    }
    for (std::size_t j = 1; j < prefs.size(); ++j) {
        const std::string& r = prefs[j];
        derive(first, r, second, same(r, r_hat) ? first_unlike(r) : r_hat);
    }

    for (const auto& coalition : validation) {
        const auto answer = oracle(coalition);
        if (!answer) {
            throw Error(ErrorCode::OracleRefused, "oracle refused a validation coalition");
        }
        const Point observed = normalize_to_H(*answer, v, tol);
        const Point predicted = evaluate_gswf(out.weights, coalition, library, v, tol);
        const double residual = distance(observed, predicted);
        const bool passed = residual <= tol.bound(std::max(observed.norm(), predicted.norm()));
        out.validation.push_back({coalition, residual, passed});
        out.max_residual = std::max(out.max_residual, residual);
        out.verified = out.verified && passed;
    }
    return out;
}

std::vector<GswfRow> verify_gswf(const GswfTable& weights, const PreferenceLibrary& library, const Point& v,
    const std::vector<std::pair<Assignment, UtilityVector>>& observed, const Tolerance& tol)
{
    std::vector<GswfRow> rows;
    for (const auto& [coalition, u] : observed) {
        const Point seen = normalize_to_H(u, v, tol);
        const Point predicted = evaluate_gswf(weights, coalition, library, v, tol);
        const double residual = distance(seen, predicted);
        rows.push_back({coalition, residual, residual <= tol.bound(std::max(seen.norm(), predicted.norm()))});
    }
    return rows;
}

bool is_anonymous(const GswfTable& weights, const Tolerance& tol)
{
    std::map<std::string, double> seen;
    for (const auto& [key, w] : weights) {
        auto [it, fresh] = seen.emplace(key.second, w);
        if (!fresh && std::abs(it->second - w) > tol.bound(std::max(it->second, w))) {
            return false;
        }
    }
    return true;
}

double relative_utilitarian_weight(const UtilityVector& u_hat, const Tolerance& tol)
{
    require_finite(u_hat);
    if (u_hat.size() == 0) {
        throw Error(ErrorCode::InvalidInput, "empty utility vector");
    }
    const double range = u_hat.maxCoeff() - u_hat.minCoeff();
    if (range <= tol.bound(u_hat.cwiseAbs().maxCoeff())) {
        throw Error(ErrorCode::ConstantUtility, "utility is constant across prospects");
    }
    return 1.0 / range;
}

StateDependentOutcome recover_state_dependent(const Dataset& events, const Point& v, const Tolerance& tol)
{
    std::map<FeatureSet, Point> normalized;
    for (const auto& [set, u] : events.outcomes()) {
        try {
            normalized.emplace(set, normalize_to_H(u, v, tol));
        } catch (const Error& e) {
            throw Error(e.code(), "event " + set.str() + ": " + e.message());
        }
    }
    const Dataset data(events.dimension(), std::move(normalized));
    StateDependentOutcome out;
    out.recovery = recover(data, RecoveryOptions{tol, {}});
    if (const auto* missing = out.recovery.missing()) {
        throw MissingDataError(missing->required, "conditional utilities needed for recovery are absent");
    }
    if (const auto* bad = out.recovery.non_representable()) {
        out.witness = bad->witness;
        return out;
    }
    const Recovered& rec = *out.recovery.recovered();
    out.rows = rec.verification;
    out.max_residual = rec.max_residual;
    out.indeterminate = !rec.indeterminate_classes.empty();
    if (!rec.rep.single_class()) {
        out.witness = strictness_witness(data, rec.rep);
        return out;
    }
    StateDependentRepresentation sd;
    double total = 0.0;
    for (const auto& [state, traits] : rec.rep.entries()) {
        total += traits.weight;
    }
    for (const auto& [state, traits] : rec.rep.entries()) {
        sd.P[state] = traits.weight / total;
        sd.u[state] = traits.outcome;
    }
    out.representation = std::move(sd);
    return out;
}

} // namespace aggkit
