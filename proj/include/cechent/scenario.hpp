#pragma once

#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "entropy.hpp"
#include "fiber.hpp"
#include "nerve.hpp"
#include "polynomial.hpp"
#include "systems.hpp"

namespace cechent {

using Json = nlohmann::ordered_json;

enum class LdDirection { Both, Forward, Backward };

inline const char* to_string(LdDirection d) {
    switch (d) {
    case LdDirection::Forward: return "forward";
    case LdDirection::Backward: return "backward";
    default: return "both";
    }
}

struct AnalysisOptions {
    std::size_t n_max = 4;
    int window = kDefaultFiberWindow;
    std::size_t exact_limit = kDefaultExactLimit;
    double tolerance = 1e-6;
    double eigen_tolerance = kEigenTolerance;
    int max_refinements = 3;
    std::size_t join_cap = kDefaultJoinCap;
    LdDirection ld_direction = LdDirection::Both;
};

struct Scenario {
    std::string name;
    ModelPtr model;  // null for complex-only scenarios
    std::vector<std::pair<std::string, Cover>> covers;
    /// Raw simplicial complexes given by maximal simplices.
    std::vector<std::pair<std::string, NerveComplex>> complexes;
    AnalysisOptions analysis;
};

namespace detail {

inline void reject_unknown(const Json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
    if (!obj.is_object()) throw ValidationError(path + ": expected an object");
    for (const auto& [key, value] : obj.items()) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || key == a;
        if (!ok) throw ValidationError(path + ": unknown field '" + key + "'");
    }
}

inline std::string id_of(const Json& v, const std::string& path) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    throw ValidationError(path + ": point ids must be strings or integers");
}

inline long long int_of(const Json& v, const std::string& path, long long lo, long long hi) {
    if (!v.is_number_integer()) throw ValidationError(path + ": expected an integer");
    const long long x = v.get<long long>();
    if (x < lo || x > hi) throw ValidationError(path + ": " + std::to_string(x) + " outside " + std::to_string(lo) + ".." + std::to_string(hi));
    return x;
}

inline Rational parse_rational(const std::string& text, const std::string& path) {
    try {
        const auto slash = text.find('/');
        std::size_t used = 0;
        if (slash == std::string::npos) {
            long long n = std::stoll(text, &used);
            if (used != text.size()) throw std::invalid_argument(text);
            return Rational(n);
        }
        const std::string a = text.substr(0, slash), b = text.substr(slash + 1);
        long long n = std::stoll(a, &used);
        if (used != a.size()) throw std::invalid_argument(text);
        long long d = std::stoll(b, &used);
        if (used != b.size() || d == 0) throw std::invalid_argument(text);
        return Rational(n, d);
    } catch (const std::logic_error&) {
        throw ValidationError(path + ": '" + text + "' is not a rational number");
    }
}

inline Rational rational_of(const Json& v, const std::string& path) {
    if (v.is_number_integer()) return Rational(v.get<long long>());
    if (v.is_string()) return parse_rational(v.get<std::string>(), path);
    throw ValidationError(path + ": expected an integer or a fraction string like \"1/2\"");
}

inline PLIntervalSpec interval_spec(const Json& j, const std::string& path) {
    reject_unknown(j, path, {"pieces", "resolution"});
    PLIntervalSpec spec;
    spec.resolution = static_cast<int>(int_of(j.at("resolution"), path + ".resolution", 4, 4096));
    const Json& pieces = j.at("pieces");
    if (!pieces.is_array() || pieces.empty()) throw ValidationError(path + ".pieces: expected a nonempty array");
    for (std::size_t i = 0; i < pieces.size(); ++i) {
        const std::string pp = path + ".pieces[" + std::to_string(i) + "]";
        reject_unknown(pieces[i], pp, {"from", "to", "slope", "intercept"});
        Rational from = rational_of(pieces[i].at("from"), pp + ".from");
        Rational to = rational_of(pieces[i].at("to"), pp + ".to");
        if (spec.breakpoints.empty()) spec.breakpoints.push_back(from);
        else if (spec.breakpoints.back() != from) throw ValidationError(pp + ".from: pieces must be contiguous");
        spec.breakpoints.push_back(to);
        spec.pieces.push_back({rational_of(pieces[i].at("slope"), pp + ".slope"),
                               pieces[i].contains("intercept") ? rational_of(pieces[i].at("intercept"), pp + ".intercept") : Rational(0)});
    }
    return spec;
}

/// Named cover shorthands usable in scenario files.
inline Cover named_cover(const ModelPtr& m, const std::string& spec, const std::string& path, const std::optional<Cover>& windows) {
    if (spec.rfind("cylinders:", 0) == 0) {
        int len = 0;
        try {
            len = std::stoi(spec.substr(10));
        } catch (const std::logic_error&) {
            throw ValidationError(path + ": bad cylinder length in '" + spec + "'");
        }
        return cylinder_cover(m, len);
    }
    if (spec.rfind("arcs:", 0) == 0) {
        try {
            return arc_cover(m, static_cast<std::size_t>(std::stoul(spec.substr(5))));
        } catch (const std::logic_error&) {
            throw ValidationError(path + ": bad arc count in '" + spec + "'");
        }
    }
    if (spec == "singletons") return singleton_cover(m);
    if (spec == "whole") return whole_cover(m);
    if (spec == "windows") {
        if (!windows) throw ValidationError(path + ": 'windows' needs an interval model");
        return *windows;
    }
    throw ValidationError(path + ": unknown cover shorthand '" + spec + "'");
}

inline std::vector<std::size_t> resolve_points(const ModelPtr& m, const Json& list, const std::string& path) {
    if (!list.is_array() || list.empty()) throw ValidationError(path + ": expected a nonempty array of point ids");
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < list.size(); ++i) {
        const std::string id = id_of(list[i], path + "[" + std::to_string(i) + "]");
        auto idx = m->index_of(id);
        if (!idx) throw ValidationError(path + "[" + std::to_string(i) + "]: '" + id + "' is not a point of the model");
        out.push_back(*idx);
    }
    return out;
}

inline Cover explicit_cover(const ModelPtr& m, const Json& j, const std::string& path) {
    std::vector<std::pair<std::string, std::vector<std::size_t>>> elems;
    if (j.is_array()) {
        for (std::size_t i = 0; i < j.size(); ++i)
            elems.push_back({"U" + std::to_string(i), resolve_points(m, j[i], path + "[" + std::to_string(i) + "]")});
    } else if (j.is_object()) {
        for (const auto& [name, pts] : j.items()) elems.push_back({name, resolve_points(m, pts, path + "." + name)});
    } else {
        throw ValidationError(path + ": expected a shorthand string, an array of point lists or an object");
    }
    try {
        return Cover::from_indices(m, elems);
    } catch (const ValidationError& e) {
        throw ValidationError(path + ": " + e.what());
    }
}

inline AnalysisOptions parse_analysis(const Json& j, AnalysisOptions a) {
    reject_unknown(j, "analysis", {"n_max", "window", "exact_limit", "tolerance", "eigen_tolerance", "max_refinements",
                                   "join_cap", "ld_direction"});
    if (j.contains("n_max")) a.n_max = static_cast<std::size_t>(int_of(j["n_max"], "analysis.n_max", 2, 64));
    if (j.contains("window")) a.window = static_cast<int>(int_of(j["window"], "analysis.window", 0, 64));
    if (j.contains("exact_limit")) a.exact_limit = static_cast<std::size_t>(int_of(j["exact_limit"], "analysis.exact_limit", 0, 64));
    if (j.contains("max_refinements")) a.max_refinements = static_cast<int>(int_of(j["max_refinements"], "analysis.max_refinements", 0, 8));
    if (j.contains("join_cap")) a.join_cap = static_cast<std::size_t>(int_of(j["join_cap"], "analysis.join_cap", 1, 1 << 20));
    auto positive = [](const Json& v, const std::string& path) {
        if (!v.is_number() || v.get<double>() <= 0) throw ValidationError(path + ": expected a positive number");
        return v.get<double>();
    };
    if (j.contains("tolerance")) a.tolerance = positive(j["tolerance"], "analysis.tolerance");
    if (j.contains("eigen_tolerance")) a.eigen_tolerance = positive(j["eigen_tolerance"], "analysis.eigen_tolerance");
    if (j.contains("ld_direction")) {
        const std::string d = j["ld_direction"].is_string() ? j["ld_direction"].get<std::string>() : "";
        if (d == "both") a.ld_direction = LdDirection::Both;
        else if (d == "forward") a.ld_direction = LdDirection::Forward;
        else if (d == "backward") a.ld_direction = LdDirection::Backward;
        else throw ValidationError("analysis.ld_direction: expected \"both\", \"forward\" or \"backward\"");
    }
    return a;
}

/// 1-based line and column of a byte offset.
inline std::pair<std::size_t, std::size_t> line_col(const std::string& text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

} // namespace detail

/// Strict scenario loader. Unknown fields and unresolved point ids are
/// validation errors naming the offending field.
inline Scenario parse_scenario(const std::string& text, const std::string& fallback_name = "scenario") {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        auto [line, col] = detail::line_col(text, e.byte == 0 ? 0 : e.byte - 1);
        std::string msg = e.what();
        throw ValidationError("line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + msg);
    }
    try {
        detail::reject_unknown(j, "scenario", {"name", "model", "covers", "complexes", "analysis"});
        Scenario s;
        s.name = j.contains("name") ? j["name"].get<std::string>() : fallback_name;
        std::optional<Cover> windows;
        if (j.contains("model")) {
            const Json& mj = j["model"];
            detail::reject_unknown(mj, "model", {"points", "map", "shift", "interval", "circle"});
            const int kinds = mj.contains("points") + mj.contains("shift") + mj.contains("interval") + mj.contains("circle");
            if (kinds != 1) throw ValidationError("model: give exactly one of points+map, shift, interval, circle");
            if (mj.contains("points")) {
                if (!mj.contains("map")) throw ValidationError("model.map: missing transition list");
                std::vector<std::string> pts;
                for (std::size_t i = 0; i < mj["points"].size(); ++i)
                    pts.push_back(detail::id_of(mj["points"][i], "model.points[" + std::to_string(i) + "]"));
                std::vector<std::pair<std::string, std::vector<std::string>>> tr;
                const Json& map = mj["map"];
                if (!map.is_array()) throw ValidationError("model.map: expected an array of [from, [to...]] pairs");
                for (std::size_t i = 0; i < map.size(); ++i) {
                    const std::string mp = "model.map[" + std::to_string(i) + "]";
                    if (!map[i].is_array() || map[i].size() != 2 || !map[i][1].is_array())
                        throw ValidationError(mp + ": expected [from, [to...]]");
                    std::vector<std::string> to;
                    for (std::size_t t = 0; t < map[i][1].size(); ++t)
                        to.push_back(detail::id_of(map[i][1][t], mp + "[1][" + std::to_string(t) + "]"));
                    tr.push_back({detail::id_of(map[i][0], mp + "[0]"), std::move(to)});
                }
                try {
                    s.model = Model::from_named(s.name, std::move(pts), tr);
                } catch (const ValidationError& e) {
                    throw ValidationError(std::string("model: ") + e.what());
                }
            } else if (mj.contains("shift")) {
                detail::reject_unknown(mj["shift"], "model.shift", {"k", "depth"});
                s.model = full_shift(static_cast<int>(detail::int_of(mj["shift"].at("k"), "model.shift.k", 1, 36)),
                                     static_cast<int>(detail::int_of(mj["shift"].at("depth"), "model.shift.depth", 1, 16)));
            } else if (mj.contains("interval")) {
                auto [m, w] = discretize_interval_map(detail::interval_spec(mj["interval"], "model.interval"), s.name);
                s.model = m;
                windows = w;
            } else {
                detail::reject_unknown(mj["circle"], "model.circle", {"cells", "degree"});
                s.model = circle_map(static_cast<int>(detail::int_of(mj["circle"].at("cells"), "model.circle.cells", 4, 4096)),
                                     static_cast<int>(detail::int_of(mj["circle"].at("degree"), "model.circle.degree", 0, 64)));
            }
        }
        if (j.contains("covers")) {
            if (!s.model) throw ValidationError("covers: a model is required");
            if (!j["covers"].is_object()) throw ValidationError("covers: expected an object of named covers");
            for (const auto& [name, cj] : j["covers"].items()) {
                const std::string path = "covers." + name;
                s.covers.push_back({name, cj.is_string() ? detail::named_cover(s.model, cj.get<std::string>(), path, windows)
                                                         : detail::explicit_cover(s.model, cj, path)});
            }
        } else if (windows) {
            s.covers.push_back({"windows", *windows});
        }
        if (j.contains("complexes")) {
            if (!j["complexes"].is_object()) throw ValidationError("complexes: expected an object of named complexes");
            for (const auto& [name, cj] : j["complexes"].items()) {
                const std::string path = "complexes." + name;
                if (!cj.is_array() || cj.empty()) throw ValidationError(path + ": expected an array of maximal simplices");
                std::vector<std::vector<std::string>> simplices;
                for (std::size_t i = 0; i < cj.size(); ++i) {
                    if (!cj[i].is_array() || cj[i].empty()) throw ValidationError(path + "[" + std::to_string(i) + "]: expected a vertex list");
                    std::vector<std::string> verts;
                    for (std::size_t v = 0; v < cj[i].size(); ++v)
                        verts.push_back(detail::id_of(cj[i][v], path + "[" + std::to_string(i) + "][" + std::to_string(v) + "]"));
                    simplices.push_back(std::move(verts));
                }
                try {
                    s.complexes.push_back({name, NerveComplex::from_named_simplices(simplices)});
                } catch (const ValidationError& e) {
                    throw ValidationError(path + ": " + e.what());
                }
            }
        }
        if (s.model && s.covers.empty()) throw ValidationError("covers: at least one cover is required");
        if (!s.model && s.complexes.empty()) throw ValidationError("scenario: needs a model with covers or raw complexes");
        if (j.contains("analysis")) s.analysis = detail::parse_analysis(j["analysis"], s.analysis);
        return s;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("scenario: ") + e.what());
    }
}

inline Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open scenario file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    std::string stem = path.substr(path.find_last_of("/\\") == std::string::npos ? 0 : path.find_last_of("/\\") + 1);
    if (auto dot = stem.rfind('.'); dot != std::string::npos) stem = stem.substr(0, dot);
    return parse_scenario(buf.str(), stem);
}

namespace detail {

/// "name:key=value,key=value" into the name and a key map.
inline std::pair<std::string, std::map<std::string, std::string>> split_builtin(const std::string& spec) {
    std::map<std::string, std::string> args;
    const auto colon = spec.find(':');
    const std::string name = spec.substr(0, colon);
    if (colon != std::string::npos) {
        std::stringstream ss(spec.substr(colon + 1));
        std::string part;
        while (std::getline(ss, part, ',')) {
            const auto eq = part.find('=');
            if (eq == std::string::npos || eq == 0) throw ValidationError("builtin '" + spec + "': expected key=value, got '" + part + "'");
            if (!args.emplace(part.substr(0, eq), part.substr(eq + 1)).second)
                throw ValidationError("builtin '" + spec + "': repeated key '" + part.substr(0, eq) + "'");
        }
    }
    return {name, args};
}

} // namespace detail

/// Builtin scenarios: identity, shift:k=K[,depth=D], exercise1:k=K,
/// exercise2:k=K, contraction:k=P/Q[,resolution=R] (alias exercise3),
/// circle-degree:d=D.
inline Scenario builtin_scenario(const std::string& spec) {
    auto parts = detail::split_builtin(spec);
    const std::string& name = parts.first;
    auto& args = parts.second;
    auto take = [&](const std::string& key, const std::string& fallback) {
        auto it = args.find(key);
        if (it == args.end()) return fallback;
        std::string v = it->second;
        args.erase(it);
        return v;
    };
    auto as_int = [&](const std::string& key, const std::string& v) {
        try {
            std::size_t used = 0;
            int x = std::stoi(v, &used);
            if (used != v.size()) throw std::invalid_argument(v);
            return x;
        } catch (const std::logic_error&) {
            throw ValidationError("builtin '" + spec + "': " + key + " must be an integer");
        }
    };
    Scenario s;
    s.name = spec;
    System sys;
    if (name == "identity") {
        sys = identity_system(as_int("cells", take("cells", "16")));
    } else if (name == "shift") {
        const int k = as_int("k", take("k", "2"));
        const int depth = as_int("depth", take("depth", "4"));
        sys = shift_system(k, depth);
        s.analysis.n_max = static_cast<std::size_t>(std::max(2, depth));
    } else if (name == "exercise1") {
        sys = exercise1(as_int("k", take("k", "2")));
        s.analysis.ld_direction = LdDirection::Forward;
    } else if (name == "exercise2") {
        sys = exercise2(as_int("k", take("k", "2")));
    } else if (name == "contraction" || name == "exercise3") {
        const Rational k = detail::parse_rational(take("k", "1/2"), "builtin '" + spec + "': k");
        sys = contraction_system(k, as_int("resolution", take("resolution", "32")));
    } else if (name == "circle-degree") {
        sys = circle_degree_system(as_int("d", take("d", "2")));
        s.analysis.n_max = 3;
    } else {
        throw ValidationError("unknown builtin '" + name + "'");
    }
    if (!args.empty()) throw ValidationError("builtin '" + spec + "': unknown key '" + args.begin()->first + "'");
    s.model = sys.model;
    s.covers = std::move(sys.covers);
    return s;
}

/// The builtin set every verdict run is expected to satisfy.
inline const std::vector<std::string>& builtin_catalog() {
    static const std::vector<std::string> names{
        "identity",         "shift:k=2,depth=4",    "shift:k=3,depth=4",    "exercise1:k=2",   "exercise1:k=3",
        "exercise2:k=2",    "exercise2:k=3",        "contraction:k=1/2",    "contraction:k=1/4", "circle-degree:d=1",
        "circle-degree:d=2", "circle-degree:d=3"};
    return names;
}

} // namespace cechent
