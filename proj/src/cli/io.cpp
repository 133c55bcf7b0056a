#include "io.hpp"

#include <fstream>
#include <iterator>
#include <sstream>

namespace aggkit::cli {

json load_json(const std::string& path, std::istream& in)
{
    std::string text;
    const std::string source = path == "-" ? "<stdin>" : path;
    if (path == "-") {
        text.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    } else {
        std::ifstream file(path, std::ios::binary);
        if (!file) {
            throw InputError(source + ": cannot open file");
        }
        text.assign(std::istreambuf_iterator<char>(file), std::istreambuf_iterator<char>());
    }
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw InputError(source + ": " + e.what());
    }
}

void Reader::fail(const std::string& where, const std::string& what) const
{
    throw InputError(source_ + ": " + (where.empty() ? "/" : where) + ": " + what);
}

const json& Reader::field(const json& node, const std::string& where, const char* key) const
{
    if (!node.is_object()) {
        fail(where, "expected an object");
    }
    auto it = node.find(key);
    if (it == node.end()) {
        fail(where, std::string("missing field \"") + key + "\"");
    }
    return *it;
}

const json* Reader::optional_field(const json& node, const char* key) const
{
    if (!node.is_object()) {
        return nullptr;
    }
    auto it = node.find(key);
    return it == node.end() ? nullptr : &*it;
}

double Reader::number(const json& node, const std::string& where) const
{
    if (!node.is_number()) {
        fail(where, "expected a number");
    }
    const double x = node.get<double>();
    if (!std::isfinite(x)) {
        fail(where, "number is not finite");
    }
    return x;
}

std::string Reader::string(const json& node, const std::string& where) const
{
    if (!node.is_string()) {
        fail(where, "expected a string");
    }
    return node.get<std::string>();
}

Point Reader::point(const json& node, const std::string& where, std::size_t dimension) const
{
    if (!node.is_array()) {
        fail(where, "expected an array of numbers");
    }
    if (node.size() != dimension) {
        fail(where, "expected " + std::to_string(dimension) + " numbers, found " + std::to_string(node.size()));
    }
    Point p(static_cast<Eigen::Index>(dimension));
    for (std::size_t k = 0; k < dimension; ++k) {
        p[static_cast<Eigen::Index>(k)] = number(node[k], where + "/" + std::to_string(k));
    }
    return p;
}

FeatureSet Reader::members(const json& node, const std::string& where) const
{
    if (!node.is_array() || node.empty()) {
        fail(where, "expected a nonempty array of feature ids");
    }
    std::vector<FeatureId> ids;
    for (std::size_t k = 0; k < node.size(); ++k) {
        try {
            ids.emplace_back(string(node[k], where + "/" + std::to_string(k)));
        } catch (const InputError&) {
            throw;
        } catch (const Error& e) {
            fail(where + "/" + std::to_string(k), e.what());
        }
    }
    const std::size_t given = ids.size();
    FeatureSet set(std::move(ids));
    if (set.size() != given) {
        fail(where, "duplicate member");
    }
    return set;
}

Dataset DatasetFile::dataset() const
{
    std::map<FeatureSet, Point> all = outcomes;
    for (const auto& [id, p] : features) {
        all.emplace(FeatureSet::singleton(id), p);
    }
    return Dataset(dimension, std::move(all));
}

DatasetFile parse_dataset(const json& doc, const std::string& source, std::initializer_list<std::string_view> kinds)
{
    Reader r(doc, source);
    if (!doc.is_object()) {
        r.fail("", "expected an object");
    }
    if (r.string(r.field(doc, "", "format_version"), "/format_version") != "1") {
        r.fail("/format_version", "unsupported format version");
    }
    DatasetFile file;
    const json* kind = r.optional_field(doc, "kind");
    file.kind = kind ? r.string(*kind, "/kind") : "generic";
    bool accepted = false;
    for (auto k : kinds) {
        accepted = accepted || k == file.kind;
    }
    if (!accepted) {
        std::string list;
        for (auto k : kinds) {
            list += (list.empty() ? "" : ", ") + std::string(k);
        }
        r.fail("/kind", "kind \"" + file.kind + "\" not accepted here (expected " + list + ")");
    }
    const json& dim = r.field(doc, "", "dimension");
    if (!dim.is_number_integer() || dim.get<long long>() < 1) {
        r.fail("/dimension", "expected a positive integer");
    }
    file.dimension = dim.get<std::size_t>();

    const bool belief = file.kind == "belief";
    auto check_belief = [&](const Point& p, const std::string& where) {
        if (!belief) {
            return;
        }
        try {
            validate_belief(p);
        } catch (const Error& e) {
            r.fail(where, e.what());
        }
    };

    const json& features = r.field(doc, "", "features");
    if (!features.is_object()) {
        r.fail("/features", "expected an object");
    }
    for (const auto& [key, value] : features.items()) {
        const std::string where = "/features/" + key;
        FeatureId id;
        try {
            id = FeatureId(key);
        } catch (const Error& e) {
            r.fail(where, e.what());
        }
        file.features[id] = r.point(r.field(value, where, "outcome"), where + "/outcome", file.dimension);
        check_belief(file.features[id], where + "/outcome");
    }

    if (const json* sets = r.optional_field(doc, "sets")) {
        if (!sets->is_array()) {
            r.fail("/sets", "expected an array");
        }
        for (std::size_t n = 0; n < sets->size(); ++n) {
            const std::string where = "/sets/" + std::to_string(n);
            const json& entry = (*sets)[n];
            const FeatureSet members = r.members(r.field(entry, where, "members"), where + "/members");
            for (const auto& id : members) {
                if (!file.features.count(id)) {
                    r.fail(where + "/members", "feature \"" + id.str() + "\" is not declared in /features");
                }
            }
            const Point outcome = r.point(r.field(entry, where, "outcome"), where + "/outcome", file.dimension);
            check_belief(outcome, where + "/outcome");
            if (const json* timing = r.optional_field(entry, "timing")) {
                TimedQuery q{members, {}};
                if (!timing->is_object()) {
                    r.fail(where + "/timing", "expected an object");
                }
                for (const auto& [key, t] : timing->items()) {
                    if (!t.is_number_integer()) {
                        r.fail(where + "/timing/" + key, "expected a positive integer");
                    }
                    try {
                        q.timing[FeatureId(key)] = t.get<int>();
                    } catch (const Error& e) {
                        r.fail(where + "/timing/" + key, e.what());
                    }
                }
                try {
                    q.validate();
                } catch (const Error& e) {
                    r.fail(where + "/timing", e.what());
                }
                if (!file.timed.emplace(q, outcome).second) {
                    r.fail(where, "duplicate timed set " + q.str());
                }
                continue;
            }
            if (members.size() == 1) {
                if (file.features.at(*members.begin()) != outcome) {
                    r.fail(where + "/outcome", "singleton outcome differs from its feature declaration");
                }
                continue;
            }
            if (!file.outcomes.emplace(members, outcome).second) {
                r.fail(where, "duplicate set " + members.str());
            }
        }
    }

    const json* direction = r.optional_field(doc, "direction");
    if (file.kind == "profile" || file.kind == "sdeu") {
        if (direction == nullptr) {
            r.fail("", "kind \"" + file.kind + "\" requires \"direction\"");
        }
    }
    if (direction != nullptr) {
        file.direction = r.point(*direction, "/direction", file.dimension);
    }
    return file;
}

json encode(const Point& p)
{
    json out = json::array();
    for (Eigen::Index k = 0; k < p.size(); ++k) {
        out.push_back(p[k]);
    }
    return out;
}

json encode(const FeatureSet& s)
{
    json out = json::array();
    for (const auto& id : s) {
        out.push_back(id.str());
    }
    return out;
}

json encode(const TimedQuery& q)
{
    json timing = json::object();
    for (const auto& [id, t] : q.timing) {
        timing[id.str()] = t;
    }
    return json{{"members", encode(q.members)}, {"timing", timing}};
}

namespace {

json encode_ratio(const RatioDerivation& d)
{
    json sets = json::array();
    for (const auto& s : d.sets) {
        sets.push_back(encode(s));
    }
    return json{{"ratio", d.ratio}, {"sets", sets}};
}

} // namespace

json encode(const Witness& w)
{
    json features = json::array();
    for (const auto& id : w.features) {
        features.push_back(id.str());
    }
    json sets = json::array();
    for (const auto& s : w.sets) {
        sets.push_back(encode(s));
    }
    json out{{"kind", std::string(to_string(w.kind))}, {"features", features}, {"sets", sets}};
    out["direct"] = w.direct ? encode_ratio(*w.direct) : json(nullptr);
    out["chained"] = w.chained ? encode_ratio(*w.chained) : json(nullptr);
    out["residual"] = w.residual;
    out["description"] = w.description;
    return out;
}

json encode_rows(const std::vector<VerificationRow>& rows)
{
    json out = json::array();
    for (const auto& row : rows) {
        out.push_back(json{{"set", encode(row.set)}, {"residual", row.residual}, {"passed", row.passed}});
    }
    return out;
}

json encode_dataset(const Dataset& data, std::string_view kind)
{
    json features = json::object();
    json sets = json::array();
    for (const auto& set : data.sets()) {
        const Point p = *data.query(set);
        if (set.size() == 1) {
            features[set.begin()->str()] = json{{"outcome", encode(p)}};
        } else {
            sets.push_back(json{{"members", encode(set)}, {"outcome", encode(p)}});
        }
    }
    return json{{"format_version", "1"}, {"kind", std::string(kind)}, {"dimension", data.dimension()},
        {"features", features}, {"sets", sets}};
}

} // namespace aggkit::cli
