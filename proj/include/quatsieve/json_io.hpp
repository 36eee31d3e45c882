#pragma once

#include "quatsieve/criteria.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace quatsieve {

using nlohmann::json;

// Integers are emitted as JSON numbers when they fit a signed 64-bit word and
// as decimal strings otherwise; both forms are accepted on input.
inline json int_to_json(const Int& v) {
    if (v.fits_slong_p()) return json(static_cast<std::int64_t>(v.get_si()));
    return json(v.get_str());
}

inline void to_json(json& j, const AlgInt& a) {
    j = json{{"x", int_to_json(a.x)}, {"y", int_to_json(a.y)}};
}

inline void to_json(json& j, const FieldDesc& f) {
    j = json{{"degree", f.degree}};
    if (f.degree == 2) j["D"] = int_to_json(f.D);
}

inline void to_json(json& j, const PrimeIdealF& pr) {
    j = json{{"p", int_to_json(pr.p)}, {"kind", kind_name(pr.kind)}};
    if (pr.kind == IdealKind::split) j["root"] = int_to_json(pr.root);
}

inline void to_json(json& j, const QuatDisc& d) {
    j = json{{"field", d.field}, {"primes", d.primes}};
}

inline void to_json(json& j, const ExceptionalSet& s) {
    j = json{{"ell", int_to_json(s.ell)},
             {"field", s.field},
             {"variant", variant_name(s.variant)},
             {"members", s.members}};
}

inline void to_json(json& j, const Witness& w) {
    j = json{{"criterion", w.criterion}, {"reason", w.reason}};
    if (w.ell) j["ell"] = int_to_json(*w.ell);
    if (w.prime_ideal) j["prime_ideal"] = *w.prime_ideal;
}

inline void to_json(json& j, const Verdict& v) {
    j = json{{"status", status_name(v.status)}};
    if (v.witness) j["witness"] = *v.witness;
    if (v.bound) j["bound"] = int_to_json(*v.bound);
    if (v.unmet) j["unmet"] = *v.unmet;
}

inline void to_json(json& j, const ModularTriplet& t) {
    j = json{{"field", t.field},
             {"m", t.m},
             {"disc", t.disc.primes},
             {"d", int_to_json(t.d)},
             {"assume_locally_maximal", t.assume_locally_maximal}};
}

// ---------------------------------------------------------------------------
// pointered parsing
// ---------------------------------------------------------------------------

struct ParseErrors {
    std::vector<std::string> items;
    bool ok() const { return items.empty(); }
    void add(const std::string& path, const std::string& msg) {
        items.push_back(path + ": " + msg);
    }
};

inline std::optional<Int> parse_int(const json& j, const std::string& path,
                                    ParseErrors& errs) {
    if (j.is_number_integer()) return Int(static_cast<long>(j.get<std::int64_t>()));
    if (j.is_number_unsigned()) {
        Int v;
        mpz_set_str(v.get_mpz_t(), std::to_string(j.get<std::uint64_t>()).c_str(), 10);
        return v;
    }
    if (j.is_string()) {
        Int v;
        if (mpz_set_str(v.get_mpz_t(), j.get<std::string>().c_str(), 10) == 0) return v;
        errs.add(path, "not a decimal integer string");
        return std::nullopt;
    }
    errs.add(path, "expected integer");
    return std::nullopt;
}

inline std::optional<FieldDesc> parse_field(const json& j, const std::string& path,
                                            ParseErrors& errs) {
    if (j.is_string() && j.get<std::string>() == "Q") return FieldDesc::rationals();
    if (!j.is_object()) {
        errs.add(path, "expected object or \"Q\"");
        return std::nullopt;
    }
    if (!j.contains("degree") || !j["degree"].is_number_integer()) {
        errs.add(path + "/degree", "expected 1 or 2");
        return std::nullopt;
    }
    int deg = j["degree"].get<int>();
    if (deg == 1) return FieldDesc::rationals();
    if (deg != 2) {
        errs.add(path + "/degree", "expected 1 or 2");
        return std::nullopt;
    }
    if (!j.contains("D")) {
        errs.add(path + "/D", "required for degree 2");
        return std::nullopt;
    }
    auto D = parse_int(j["D"], path + "/D", errs);
    if (!D) return std::nullopt;
    if (*D <= 1 || !is_squarefree(*D)) {
        errs.add(path + "/D", "must be square-free and > 1");
        return std::nullopt;
    }
    return FieldDesc::real_quadratic(*D);
}

inline std::optional<AlgInt> parse_algint(const json& j, const std::string& path,
                                          ParseErrors& errs) {
    if (j.is_number_integer() || j.is_number_unsigned() || j.is_string()) {
        auto x = parse_int(j, path, errs);
        if (!x) return std::nullopt;
        return AlgInt(*x);
    }
    if (!j.is_object() || !j.contains("x")) {
        errs.add(path, "expected {\"x\":..,\"y\":..} or an integer");
        return std::nullopt;
    }
    auto x = parse_int(j["x"], path + "/x", errs);
    std::optional<Int> y = Int(0);
    if (j.contains("y")) y = parse_int(j["y"], path + "/y", errs);
    if (!x || !y) return std::nullopt;
    return AlgInt(*x, *y);
}

inline std::optional<PrimeIdealF> parse_prime_ideal(const json& j, const std::string& path,
                                                    ParseErrors& errs) {
    if (!j.is_object() || !j.contains("p") || !j.contains("kind")) {
        errs.add(path, "expected {\"p\":..,\"kind\":..,\"root\"?:..}");
        return std::nullopt;
    }
    auto p = parse_int(j["p"], path + "/p", errs);
    if (!p) return std::nullopt;
    if (!j["kind"].is_string()) {
        errs.add(path + "/kind", "expected \"split\"|\"inert\"|\"ramified\"");
        return std::nullopt;
    }
    std::string k = j["kind"].get<std::string>();
    IdealKind kind;
    if (k == "split") kind = IdealKind::split;
    else if (k == "inert") kind = IdealKind::inert;
    else if (k == "ramified") kind = IdealKind::ramified;
    else {
        errs.add(path + "/kind", "expected \"split\"|\"inert\"|\"ramified\"");
        return std::nullopt;
    }
    Int root = 0;
    if (j.contains("root")) {
        auto r = parse_int(j["root"], path + "/root", errs);
        if (!r) return std::nullopt;
        root = *r;
    }
    return PrimeIdealF{*p, kind, root};
}

// schema parse of the triplet format; semantic checks live in validate_triplet
inline std::optional<ModularTriplet> parse_triplet(const json& j, ParseErrors& errs) {
    if (!j.is_object()) {
        errs.add("", "expected a JSON object");
        return std::nullopt;
    }
    for (const char* key : {"field", "m", "disc", "d"})
        if (!j.contains(key)) errs.add(std::string("/") + key, "missing");
    if (!errs.ok()) return std::nullopt;
    auto field = parse_field(j["field"], "/field", errs);
    auto m = parse_algint(j["m"], "/m", errs);
    auto d = parse_int(j["d"], "/d", errs);
    if (!j["disc"].is_array()) errs.add("/disc", "expected array");
    if (!field || !m || !d || !errs.ok()) return std::nullopt;
    ModularTriplet t;
    t.field = *field;
    t.m = *m;
    t.d = *d;
    t.disc.field = *field;
    for (std::size_t i = 0; i < j["disc"].size(); ++i) {
        auto pr = parse_prime_ideal(j["disc"][i], "/disc/" + std::to_string(i), errs);
        if (pr) t.disc.primes.push_back(*pr);
    }
    if (j.contains("assume_locally_maximal")) {
        if (!j["assume_locally_maximal"].is_boolean())
            errs.add("/assume_locally_maximal", "expected boolean");
        else
            t.assume_locally_maximal = j["assume_locally_maximal"].get<bool>();
    }
    if (!errs.ok()) return std::nullopt;
    return t;
}

} // namespace quatsieve
