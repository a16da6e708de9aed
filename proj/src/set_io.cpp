#include "b1set/set_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace b1set {

using nlohmann::json;

namespace {

bool nonneg_integer(const json& v) {
    return v.is_number_unsigned() || (v.is_number_integer() && v.get<long long>() >= 0);
}

u64 require_u64(const json& j, const char* key) {
    if (!j.contains(key)) throw std::invalid_argument(std::string("set json: missing \"") + key + "\"");
    const json& v = j.at(key);
    if (!nonneg_integer(v))
        throw std::invalid_argument(std::string("set json: \"") + key +
                                    "\" must be a nonnegative integer");
    return v.get<u64>();
}

} // namespace

RawSet parse_raw_set_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("set json: parse error: ") + e.what());
    }
    if (!j.is_object()) throw std::invalid_argument("set json: top level must be an object");
    RawSet raw;
    raw.q = require_u64(j, "q");
    if (j.contains("lambda")) {
        if (!j.at("lambda").is_number_integer() || j.at("lambda").get<long long>() < 1)
            throw std::invalid_argument("set json: \"lambda\" must be a positive integer");
        raw.lambda = j.at("lambda").get<int>();
    }
    if (!j.contains("elements") || !j.at("elements").is_array())
        throw std::invalid_argument("set json: \"elements\" must be an array");
    for (const json& e : j.at("elements")) {
        if (!nonneg_integer(e))
            throw std::invalid_argument("set json: elements must be nonnegative integers");
        raw.elements.push_back(e.get<u64>());
    }
    return raw;
}

static std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open set file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

RawSet read_raw_set_file(const std::string& path) {
    try {
        return parse_raw_set_json(slurp(path));
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(path + ": " + e.what());
    }
}

BSet parse_set_json(const std::string& text) {
    RawSet raw = parse_raw_set_json(text);
    return make_bset(raw.q, raw.lambda, std::move(raw.elements)); // range/duplicate checks
}

BSet read_set_file(const std::string& path) {
    try {
        return parse_set_json(slurp(path));
    } catch (const std::invalid_argument& e) {
        if (std::string(e.what()).rfind(path, 0) == 0) throw;
        throw std::invalid_argument(path + ": " + e.what());
    }
}

std::string set_to_json(const BSet& s) {
    json j;
    j["q"] = s.q;
    j["lambda"] = s.lambda;
    j["elements"] = s.elements;
    return j.dump();
}

void write_set_file(const std::string& path, const BSet& s) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot write set file: " + path);
    out << set_to_json(s) << "\n";
}

std::vector<u64> parse_u64_csv(const std::string& text) {
    std::vector<u64> out;
    std::string item;
    std::istringstream ss(text);
    while (std::getline(ss, item, ',')) {
        auto b = item.find_first_not_of(" \t");
        auto e = item.find_last_not_of(" \t");
        if (b == std::string::npos || item.find_first_not_of("0123456789", b) <= e)
            throw std::invalid_argument("bad integer list entry: \"" + item + "\"");
        try {
            out.push_back(std::stoull(item.substr(b, e - b + 1)));
        } catch (const std::exception&) {
            throw std::invalid_argument("integer list entry out of range: \"" + item + "\"");
        }
    }
    if (out.empty()) throw std::invalid_argument("empty integer list");
    return out;
}

} // namespace b1set
