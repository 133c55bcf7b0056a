#pragma once

#include "aggkit/belief.hpp"
#include "aggkit/recovery.hpp"

#include <json.hpp>

#include <istream>
#include <map>
#include <optional>
#include <string>

namespace aggkit::cli {

using json = nlohmann::ordered_json;

/// Malformed input; the message starts with the file name and a JSON location.
class InputError : public Error {
public:
    explicit InputError(const std::string& what) : Error(ErrorCode::InvalidInput, what) {}
};

/// Reads a JSON document from `path`, or from `in` when the path is "-".
json load_json(const std::string& path, std::istream& in);

struct DatasetFile {
    std::string kind;
    std::size_t dimension = 0;
    std::map<FeatureId, Point> features;
    std::map<FeatureSet, Point> outcomes;
    std::map<TimedQuery, Point> timed;
    std::optional<Point> direction;

    Dataset dataset() const;
};

/// Validates a DatasetFile document. `kinds` lists the accepted kinds.
DatasetFile parse_dataset(const json& doc, const std::string& source, std::initializer_list<std::string_view> kinds);

/// `/features/x/outcome`-style lookups with located errors.
class Reader {
public:
    Reader(const json& doc, std::string source) : doc_(doc), source_(std::move(source)) {}

    [[noreturn]] void fail(const std::string& where, const std::string& what) const;
    const json& field(const json& node, const std::string& where, const char* key) const;
    const json* optional_field(const json& node, const char* key) const;
    double number(const json& node, const std::string& where) const;
    std::string string(const json& node, const std::string& where) const;
    Point point(const json& node, const std::string& where, std::size_t dimension) const;
    FeatureSet members(const json& node, const std::string& where) const;
    const json& doc() const { return doc_; }

private:
    const json& doc_;
    std::string source_;
};

json encode(const Point& p);
json encode(const FeatureSet& s);
json encode(const Witness& w);
json encode(const TimedQuery& q);
json encode_rows(const std::vector<VerificationRow>& rows);
json encode_dataset(const Dataset& data, std::string_view kind);

} // namespace aggkit::cli
