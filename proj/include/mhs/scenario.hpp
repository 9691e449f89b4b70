#pragma once

// JSON scenarios and reports (format 1).

#include "mhs/deformation.hpp"
#include "mhs/fixtures.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace mhs {

using json = nlohmann::ordered_json;

/// Malformed scenario; the message names the offending field.
class ParseError : public std::runtime_error {
  public:
    ParseError(const std::string& field, const std::string& what)
        : std::runtime_error(field + ": " + what), field_(field)
    {
    }
    const std::string& field() const { return field_; }

  private:
    std::string field_;
};

struct SampleSpec {
    std::vector<std::complex<double>> t;
    std::complex<double> lambda;
};

struct ScenarioParameters {
    std::optional<Gauss> a;
    std::optional<Gauss> C;
    std::optional<Gauss> lambda; // nullopt: symbolic
    int n = 1;
    std::optional<std::vector<Rational>> c;
    int truncation = 6;
    std::uint64_t seed = 1;
    int max_n = 5;
    std::vector<SampleSpec> samples;
};

struct Scenario {
    std::string name;
    std::string mode = "gaussian";
    std::vector<std::string> labels;
    NilpotentOrbit orbit;
    std::optional<std::array<GVec, 4>> basis;
    std::optional<Gauss> basis_a;
    ScenarioParameters params;
    std::vector<std::string> checks;
};

// --- scalar and vector encodings ---------------------------------------------

inline json to_json(const Gauss& g) { return g.str(); }

inline json to_json(const GVec& v)
{
    json a = json::array();
    for (const auto& x : v)
        a.push_back(to_json(x));
    return a;
}

inline json to_json(const GMatrix& m)
{
    json a = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i)
        a.push_back(to_json(m.row(i)));
    return a;
}

inline json to_json(const GSpace& s)
{
    json a = json::array();
    for (const auto& v : s.basis_vectors())
        a.push_back(to_json(v));
    return a;
}

inline json to_json(const IncreasingFiltration& w)
{
    json o = json::object();
    for (int k = w.lo(); k <= w.hi(); ++k)
        o[std::to_string(k)] = to_json(w.at(k));
    return o;
}

inline json to_json(const DecreasingFiltration& f)
{
    json o = json::object();
    for (int p = f.hi(); p >= f.lo(); --p)
        o[std::to_string(p)] = to_json(f.at(p));
    return o;
}

namespace detail {

inline Gauss parse_scalar_json(const json& j, const std::string& field)
{
    try {
        if (j.is_string())
            return parse_gauss(j.get<std::string>());
        if (j.is_number_integer())
            return Gauss(Rational(j.get<long>()));
    } catch (const std::exception& e) {
        throw ParseError(field, e.what());
    }
    throw ParseError(field, "expected a scalar string such as \"1/2\" or \"-2 i\"");
}

inline GVec parse_vector_json(const json& j, std::size_t dim, const std::string& field)
{
    if (!j.is_array())
        throw ParseError(field, "expected an array of scalars");
    if (j.size() != dim)
        throw ParseError(field, "expected " + std::to_string(dim) + " entries, got " + std::to_string(j.size()));
    GVec v;
    for (std::size_t i = 0; i < j.size(); ++i)
        v.push_back(parse_scalar_json(j[i], field + "[" + std::to_string(i) + "]"));
    return v;
}

inline GMatrix parse_matrix_json(const json& j, std::size_t dim, const std::string& field)
{
    if (!j.is_array() || j.size() != dim)
        throw ParseError(field, "expected " + std::to_string(dim) + " rows");
    GMatrix m(dim, dim);
    for (std::size_t i = 0; i < dim; ++i) {
        GVec r = parse_vector_json(j[i], dim, field + "[" + std::to_string(i) + "]");
        for (std::size_t c = 0; c < dim; ++c)
            m(i, c) = r[c];
    }
    return m;
}

inline GSpace parse_span_json(const json& j, std::size_t dim, const std::string& field)
{
    if (!j.is_array())
        throw ParseError(field, "expected a list of vectors");
    std::vector<GVec> vs;
    for (std::size_t i = 0; i < j.size(); ++i)
        vs.push_back(parse_vector_json(j[i], dim, field + "[" + std::to_string(i) + "]"));
    return GSpace::span(dim, vs);
}

/// Index -> span map with contiguous integer keys.
inline std::pair<int, std::vector<GSpace>> parse_indexed(const json& j, std::size_t dim, const std::string& field)
{
    if (!j.is_object() || j.empty())
        throw ParseError(field, "expected a nonempty object mapping indices to vector lists");
    std::map<int, GSpace> m;
    for (const auto& [key, val] : j.items()) {
        int k = 0;
        try {
            std::size_t used = 0;
            k = std::stoi(key, &used);
            if (used != key.size())
                throw std::invalid_argument(key);
        } catch (const std::exception&) {
            throw ParseError(field, "index '" + key + "' is not an integer");
        }
        m[k] = parse_span_json(val, dim, field + "[" + key + "]");
    }
    int lo = m.begin()->first, hi = m.rbegin()->first;
    if (static_cast<int>(m.size()) != hi - lo + 1)
        throw ParseError(field, "indices must be contiguous from " + std::to_string(lo) + " to " + std::to_string(hi));
    std::vector<GSpace> pieces;
    for (auto& [k, s] : m)
        pieces.push_back(std::move(s));
    return {lo, std::move(pieces)};
}

inline std::complex<double> parse_complex_json(const json& j, const std::string& field)
{
    if (j.is_number())
        return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return {j[0].get<double>(), j[1].get<double>()};
    if (j.is_string())
        return parse_scalar_json(j, field).to_complex();
    throw ParseError(field, "expected a number, [re, im] or a scalar string");
}

inline const json& require(const json& j, const std::string& key, const std::string& where)
{
    if (!j.contains(key))
        throw ParseError(where.empty() ? key : where + "." + key, "missing field");
    return j.at(key);
}

} // namespace detail

inline std::vector<SampleSpec> parse_samples(const json& j, const std::string& field = "samples")
{
    if (!j.is_array())
        throw ParseError(field, "expected a list of samples");
    std::vector<SampleSpec> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        std::string f = field + "[" + std::to_string(i) + "]";
        SampleSpec s;
        const auto& t = detail::require(j[i], "t", f);
        if (!t.is_array() || t.empty())
            throw ParseError(f + ".t", "expected a nonempty list");
        for (std::size_t k = 0; k < t.size(); ++k)
            s.t.push_back(detail::parse_complex_json(t[k], f + ".t[" + std::to_string(k) + "]"));
        s.lambda = j[i].contains("lambda") ? detail::parse_complex_json(j[i]["lambda"], f + ".lambda") : 0.0;
        out.push_back(std::move(s));
    }
    return out;
}

inline std::optional<Gauss> parse_lambda(const std::string& text)
{
    if (text == "symbolic" || text == "lambda" || text == "λ")
        return std::nullopt;
    return parse_gauss(text);
}

inline Scenario parse_scenario(const json& j)
{
    using namespace detail;
    if (!j.is_object())
        throw ParseError("<root>", "expected a JSON object");
    const auto& fmt = require(j, "format", "");
    if (!fmt.is_number_integer() || fmt.get<int>() != 1)
        throw ParseError("format", "unsupported format (expected 1)");
    Scenario s;
    s.name = j.value("name", std::string("scenario"));
    const auto& space = require(j, "space", "");
    const auto& dimj = require(space, "dimension", "space");
    if (!dimj.is_number_integer() || dimj.get<int>() < 0)
        throw ParseError("space.dimension", "expected a nonnegative integer");
    std::size_t d = dimj.get<std::size_t>();
    s.mode = space.value("mode", std::string("gaussian"));
    if (s.mode != "rational" && s.mode != "gaussian" && s.mode != "real-form")
        throw ParseError("space.mode", "expected rational, gaussian or real-form");
    if (space.contains("labels")) {
        const auto& l = space["labels"];
        if (!l.is_array() || l.size() != d)
            throw ParseError("space.labels", "expected " + std::to_string(d) + " labels");
        for (const auto& x : l)
            s.labels.push_back(x.get<std::string>());
    }
    auto& h = s.orbit.limit;
    h.dim = d;
    h.conj_matrix = space.contains("conjugation") ? parse_matrix_json(space["conjugation"], d, "space.conjugation")
                                                  : GMatrix::identity(d);
    if (!(h.conj_matrix * h.conj_matrix.conj() == GMatrix::identity(d)))
        throw ParseError("space.conjugation", "conjugation is not an involution");

    auto [wlo, wp] = parse_indexed(require(j, "weight", ""), d, "weight");
    h.W = IncreasingFiltration(d, wlo, std::move(wp));
    if (auto k = h.W.first_violation())
        throw ParseError("weight[" + std::to_string(*k) + "]", "filtration is not increasing at index " + std::to_string(*k));
    auto [flo, fp] = parse_indexed(require(j, "hodge", ""), d, "hodge");
    h.F = DecreasingFiltration(d, flo, std::move(fp));
    if (auto p = h.F.first_violation())
        throw ParseError("hodge[" + std::to_string(*p) + "]", "filtration is not decreasing at index " + std::to_string(*p));

    const auto& nj = require(j, "nilpotent", "");
    if (!nj.is_array() || nj.empty())
        throw ParseError("nilpotent", "expected a nonempty list of matrices");
    for (std::size_t i = 0; i < nj.size(); ++i)
        s.orbit.family.N.push_back(parse_matrix_json(nj[i], d, "nilpotent[" + std::to_string(i) + "]"));
    if (auto p = s.orbit.family.problem(d); !p.empty())
        throw ParseError("nilpotent", p);

    if (j.contains("pairing")) {
        const auto& pj = j["pairing"];
        Pairing q;
        q.form = parse_matrix_json(require(pj, "matrix", "pairing"), d, "pairing.matrix");
        q.weight = pj.value("weight", -1);
        q.skew = pj.value("skew", true);
        s.orbit.pairing = q;
    }
    s.orbit.weight = j.value("orbit_weight", -1);

    if (s.mode == "rational") {
        auto real_entries = [](const GMatrix& m) {
            for (std::size_t r = 0; r < m.rows(); ++r)
                for (std::size_t c = 0; c < m.cols(); ++c)
                    if (!m(r, c).is_real())
                        return false;
            return true;
        };
        for (std::size_t i = 0; i < s.orbit.family.size(); ++i)
            if (!real_entries(s.orbit.family.N[i]))
                throw ParseError("nilpotent[" + std::to_string(i) + "]", "non-real entry in rational mode");
        if (!real_entries(h.conj_matrix))
            throw ParseError("space.conjugation", "non-real entry in rational mode");
    }

    if (j.contains("basis")) {
        const auto& bj = j["basis"];
        const auto& uj = require(bj, "u", "basis");
        if (!uj.is_array() || uj.size() != 4)
            throw ParseError("basis.u", "expected four vectors");
        std::array<GVec, 4> u;
        for (std::size_t i = 0; i < 4; ++i)
            u[i] = parse_vector_json(uj[i], d, "basis.u[" + std::to_string(i) + "]");
        s.basis = u;
        s.basis_a = parse_scalar_json(require(bj, "a", "basis"), "basis.a");
    }

    if (j.contains("parameters")) {
        const auto& pj = j["parameters"];
        auto& p = s.params;
        if (pj.contains("a"))
            p.a = parse_scalar_json(pj["a"], "parameters.a");
        if (pj.contains("C"))
            p.C = parse_scalar_json(pj["C"], "parameters.C");
        if (pj.contains("lambda")) {
            const auto& lj = pj["lambda"];
            try {
                p.lambda = lj.is_string() ? parse_lambda(lj.get<std::string>()) : parse_scalar_json(lj, "parameters.lambda");
            } catch (const ParseError&) {
                throw;
            } catch (const std::exception& e) {
                throw ParseError("parameters.lambda", e.what());
            }
        }
        auto positive_int = [&](const char* key, int& out, int minimum) {
            if (!pj.contains(key))
                return;
            if (!pj[key].is_number_integer() || pj[key].get<int>() < minimum)
                throw ParseError(std::string("parameters.") + key, "expected an integer >= " + std::to_string(minimum));
            out = pj[key].get<int>();
        };
        positive_int("n", p.n, 1);
        positive_int("truncation", p.truncation, 0);
        positive_int("max_n", p.max_n, 1);
        if (pj.contains("seed")) {
            if (!pj["seed"].is_number_unsigned())
                throw ParseError("parameters.seed", "expected a nonnegative integer");
            p.seed = pj["seed"].get<std::uint64_t>();
        }
        if (pj.contains("c")) {
            const auto& cj = pj["c"];
            if (!cj.is_array())
                throw ParseError("parameters.c", "expected a list of rationals");
            std::vector<Rational> c;
            for (std::size_t i = 0; i < cj.size(); ++i) {
                Gauss g = parse_scalar_json(cj[i], "parameters.c[" + std::to_string(i) + "]");
                if (!g.is_real())
                    throw ParseError("parameters.c[" + std::to_string(i) + "]", "expected a rational");
                c.push_back(g.re());
            }
            p.c = c;
        }
        if (pj.contains("samples"))
            p.samples = parse_samples(pj["samples"], "parameters.samples");
    }

    if (j.contains("checks")) {
        const auto& cj = j["checks"];
        if (!cj.is_array())
            throw ParseError("checks", "expected a list of check names");
        for (const auto& c : cj)
            s.checks.push_back(c.get<std::string>());
    }
    return s;
}

inline json read_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ParseError(path, "cannot open file");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError(path, std::string("invalid JSON: ") + e.what());
    }
}

inline Scenario load_scenario(const std::string& path) { return parse_scenario(read_json_file(path)); }

inline json to_json(const Scenario& s)
{
    const auto& h = s.orbit.limit;
    json j;
    j["format"] = 1;
    j["name"] = s.name;
    json space;
    space["dimension"] = h.dim;
    space["mode"] = s.mode;
    if (!s.labels.empty())
        space["labels"] = s.labels;
    space["conjugation"] = to_json(h.conj_matrix);
    j["space"] = space;
    j["weight"] = to_json(h.W);
    j["hodge"] = to_json(h.F);
    json ns = json::array();
    for (const auto& m : s.orbit.family.N)
        ns.push_back(to_json(m));
    j["nilpotent"] = ns;
    if (s.orbit.pairing)
        j["pairing"] = {{"matrix", to_json(s.orbit.pairing->form)}, {"weight", s.orbit.pairing->weight}};
    j["orbit_weight"] = s.orbit.weight;
    if (s.basis) {
        json u = json::array();
        for (const auto& v : *s.basis)
            u.push_back(to_json(v));
        j["basis"] = {{"u", u}, {"a", to_json(*s.basis_a)}};
    }
    json p;
    const auto& q = s.params;
    if (q.a)
        p["a"] = to_json(*q.a);
    if (q.C)
        p["C"] = to_json(*q.C);
    p["lambda"] = q.lambda ? to_json(*q.lambda) : json("symbolic");
    p["n"] = q.n;
    if (q.c) {
        json c = json::array();
        for (const auto& x : *q.c)
            c.push_back(x.get_str());
        p["c"] = c;
    }
    p["truncation"] = q.truncation;
    p["seed"] = q.seed;
    p["max_n"] = q.max_n;
    j["parameters"] = p;
    j["checks"] = s.checks;
    return j;
}

/// Built-in scenarios matching the shipped fixture files.
inline Scenario builtin_h1_scenario()
{
    auto f = fixtures::h1_orbit();
    Scenario s;
    s.name = "h1_orbit";
    s.labels = {"u1", "u2", "u3", "u4"};
    s.orbit = f.orbit;
    s.basis = f.u;
    s.basis_a = f.a;
    s.params.c = std::vector<Rational>{1, 0};
    s.params.n = 2;
    s.params.lambda = Gauss(Rational(1, 100));
    s.params.truncation = 3;
    s.checks = {"mhs", "orbit", "prop21", "h1-dims"};
    return s;
}

inline Scenario builtin_remark25_scenario()
{
    Scenario s;
    s.name = "remark25";
    s.mode = "real-form";
    s.labels = {"e1", "e2", "f1", "f2"};
    s.orbit = fixtures::remark25();
    s.params.n = 3;
    s.checks = {"mhs", "h1"};
    return s;
}

// --- reports -----------------------------------------------------------------

struct CheckResult {
    std::string name;
    std::string anchor;
    std::string status; // pass | fail | none
    std::string detail;
    json data = json::object();
};

struct Report {
    std::string command;
    std::string scenario;
    std::uint64_t seed = 1;
    std::vector<CheckResult> checks;

    bool ok() const
    {
        for (const auto& c : checks)
            if (c.status == "fail")
                return false;
        return true;
    }

    json to_json() const
    {
        json j;
        j["format"] = 1;
        j["command"] = command;
        j["scenario"] = scenario;
        j["seed"] = seed;
        j["status"] = ok() ? "pass" : "fail";
        json cs = json::array();
        for (const auto& c : checks) {
            json o;
            o["name"] = c.name;
            o["anchor"] = c.anchor;
            o["status"] = c.status;
            o["detail"] = c.detail;
            if (!c.data.empty())
                o["data"] = c.data;
            cs.push_back(o);
        }
        j["checks"] = cs;
        return j;
    }

    std::string to_text() const
    {
        std::ostringstream os;
        for (const auto& c : checks) {
            os << c.name << " [" << c.anchor << "]: " << c.status;
            if (!c.detail.empty())
                os << "; " << c.detail;
            os << "\n";
        }
        return os.str();
    }
};

inline const std::vector<std::string>& known_checks()
{
    static const std::vector<std::string> order = {"mhs",          "orbit",         "prop21",      "complexes",
                                                   "h1",           "h1-dims",       "h1-inclusion", "remark24",
                                                   "transversality",
                                                   "orthogonality", "independence", "positivity",  "limit",
                                                   "theorem15",    "certificate"};
    return order;
}

inline std::string anchor_of(const std::string& check)
{
    static const std::map<std::string, std::string> anchors = {
        {"mhs", "mixed-hodge-structure"},
        {"orbit", "nilpotent-orbit"},
        {"prop21", "four-vector-basis"},
        {"h1", "intersection-complex-h1"},
        {"h1-dims", "pullback-h1-dimensions"},
        {"h1-inclusion", "intersection-into-koszul"},
        {"remark24", "vanishing-criterion"},
        {"transversality", "deformation-transversality"},
        {"orthogonality", "deformation-orthogonality"},
        {"independence", "deformation-frame-determinant"},
        {"positivity", "deformation-positivity"},
        {"limit", "deformation-limit-fiber"},
        {"theorem15", "vector-field-stability"},
        {"certificate", "obstruction-certificate"},
        {"complexes", "koszul-and-intersection-complexes"},
        {"build-ext", "extension-constructor"},
        {"class", "extension-class"},
    };
    auto it = anchors.find(check);
    return it == anchors.end() ? "unknown" : it->second;
}

namespace detail {

inline std::string dims_string(const std::vector<std::size_t>& d)
{
    std::string s = "(";
    for (std::size_t i = 0; i < d.size(); ++i)
        s += (i ? "," : "") + std::to_string(d[i]);
    return s + ")";
}

inline std::pair<std::array<GVec, 4>, Gauss> scenario_basis(const Scenario& s)
{
    if (s.basis)
        return {*s.basis, *s.basis_a};
    NilpotentOrbit single = s.orbit;
    single.family.N.resize(1);
    auto b = construct_prop21_basis(single);
    return {b.u, b.a};
}

inline NilpotentOrbit single_operator(const Scenario& s)
{
    NilpotentOrbit o = s.orbit;
    o.family.N.resize(1);
    return o;
}

inline FamilyParams family_params(const Scenario& s)
{
    FamilyParams p;
    p.n = s.params.n;
    p.lambda = s.params.lambda;
    p.a = s.params.a;
    p.C = s.params.C;
    p.truncation = s.params.truncation;
    return p;
}

inline std::vector<Sample> scenario_samples(const Scenario& s)
{
    if (s.params.samples.empty()) {
        if (s.params.lambda)
            return default_samples(s.params.n, {s.params.lambda->to_complex()});
        return default_samples(s.params.n);
    }
    std::vector<Sample> out;
    for (const auto& x : s.params.samples) {
        Sample smp;
        smp.at.t = x.t;
        if (smp.at.t.size() == 1 && s.params.n > 1)
            smp.at.t.assign(static_cast<std::size_t>(s.params.n), x.t[0]);
        smp.at.lambda = x.lambda;
        std::ostringstream os;
        os << "t=" << x.t[0] << " lambda=" << x.lambda;
        smp.label = os.str();
        out.push_back(std::move(smp));
    }
    return out;
}

inline std::string complex_str(std::complex<double> z)
{
    std::ostringstream os;
    os.precision(12);
    os << z.real();
    if (z.imag() != 0.0)
        os << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag()) << "i";
    return os.str();
}

inline std::string certificate_line(const Certificate& c)
{
    std::string head = c.feasible ? (*c.feasible ? "feasible" : "infeasible") : "not solved";
    return head + "; identity " + c.identity + "; target dim " + std::to_string(c.target_dim);
}

inline json certificate_json(const Certificate& c)
{
    json d;
    d["n"] = c.n;
    d["target_dim"] = c.target_dim;
    d["equation"] = c.equation;
    d["identity"] = c.identity;
    d["identity_verified"] = c.identity_verified;
    d["lambda"] = c.lambda ? json(c.lambda->str()) : json("symbolic");
    if (c.feasible)
        d["feasible"] = *c.feasible;
    json cs = json::array();
    for (const auto& x : c.c)
        cs.push_back(x.get_str());
    d["c"] = cs;
    d["truncation"] = c.truncation;
    d["unknowns"] = c.unknowns;
    d["equations"] = c.equations;
    return d;
}

} // namespace detail

/// Runs one named check; failures of the underlying operations become failed checks.
inline CheckResult run_check(const Scenario& s, const std::string& name)
{
    CheckResult r{name, anchor_of(name), "pass", "", json::object()};
    auto fail = [&](std::string why) {
        r.status = "fail";
        r.detail = std::move(why);
    };
    try {
        const auto& h = s.orbit.limit;
        if (name == "mhs") {
            auto v = check_mhs(h);
            if (!v) {
                fail(v.reason);
                r.data["weight"] = v.weight;
                r.data["level"] = v.level;
                r.data["witness"] = to_json(v.witness);
            }
        } else if (name == "orbit") {
            auto v = check_pure_nilpotent_orbit(s.orbit);
            if (!v) {
                fail("clause (" + std::string(1, v.clause) + "): " + v.reason);
                r.data["clause"] = std::string(1, v.clause);
                if (!v.witness.empty())
                    r.data["witness"] = to_json(v.witness);
            }
        } else if (name == "prop21") {
            auto o = detail::single_operator(s);
            std::array<GVec, 4> u;
            Gauss a;
            if (s.basis) {
                u = *s.basis;
                a = *s.basis_a;
            } else {
                auto b = construct_prop21_basis(o);
                u = b.u;
                a = b.a;
            }
            auto v = validate_prop21_basis(h, o.family.N[0], *o.pairing, u, a);
            json viol = json::array();
            for (int c : v.violated)
                viol.push_back(c);
            r.data["violated"] = viol;
            r.data["a"] = to_json(a);
            if (!v)
                fail(v.reasons.front());
            else
                r.detail = "a = " + a.str();
        } else if (name == "h1") {
            auto ic = ic_complex(h, s.orbit.family);
            auto h1 = mhs::h(ic, 1);
            r.data["terms"] = ic.dims();
            r.data["h1"] = h1.dim;
            r.detail = "terms " + detail::dims_string(ic.dims()) + ", dim H^1 = " + std::to_string(h1.dim);
        } else if (name == "complexes") {
            auto ic = ic_complex_with_inclusion(h, s.orbit.family);
            std::vector<std::size_t> hi, hk;
            for (int k = 0; k < static_cast<int>(ic.complex.length()); ++k) {
                hi.push_back(mhs::h(ic.complex, k).dim);
                hk.push_back(mhs::h(ic.koszul, k).dim);
            }
            r.data["intersection_terms"] = ic.complex.dims();
            r.data["intersection_cohomology"] = hi;
            r.data["koszul_terms"] = ic.koszul.dims();
            r.data["koszul_cohomology"] = hk;
            r.detail = "I terms " + detail::dims_string(ic.complex.dims()) + " H " + detail::dims_string(hi) + "; K terms " +
                       detail::dims_string(ic.koszul.dims()) + " H " + detail::dims_string(hk);
            if (!ic.complex.is_complex() || !ic.koszul.is_complex())
                fail("d^2 != 0");
        } else if (name == "h1-dims") {
            std::vector<std::size_t> dims, homs;
            bool ok = true;
            for (int n = 1; n <= s.params.max_n; ++n) {
                auto fam = NilpotentFamily::pullback(s.orbit.family.N.at(0), n);
                auto h1 = mhs::h(ic_complex(h, fam), 1);
                dims.push_back(h1.dim);
                homs.push_back(hom_from_Q(h1).dim());
                if (h1.dim != static_cast<std::size_t>(n - 1) || homs.back() != h1.dim)
                    ok = false;
            }
            r.data["h1"] = dims;
            r.data["hodge_classes"] = homs;
            r.detail = "dims " + detail::dims_string(dims);
            if (!ok)
                fail("dims " + detail::dims_string(dims) + " differ from n-1");
        } else if (name == "h1-inclusion") {
            auto m = h1_inclusion(h, s.orbit.family);
            r.detail = "injective, rank " + std::to_string(m.cols());
        } else if (name == "remark24") {
            NilpotentFamily fam = NilpotentFamily::pullback(s.orbit.family.N.at(0), s.params.n);
            bool v = check_remark24_vanishing(h, fam);
            r.data["holds"] = v;
            r.detail = v ? "true" : "false";
        } else {
            static const std::set<std::string> deform = {"transversality", "orthogonality", "independence", "positivity",
                                                         "limit",          "theorem15",     "certificate"};
            if (!deform.count(name)) {
                r.status = "none";
                r.detail = "unknown check";
                return r;
            }
            auto [u, a] = detail::scenario_basis(s);
            auto o = detail::single_operator(s);
            if (name == "certificate") {
                auto cert = theorem23_certificate(o, u, a, detail::family_params(s), s.params.c, s.params.truncation);
                r.detail = detail::certificate_line(cert);
                r.data = detail::certificate_json(cert);
                if (!cert.identity_verified)
                    fail("identity not verified: " + r.detail);
                return r;
            }
            auto fam = build_family(o, u, a, detail::family_params(s));
            if (name == "transversality") {
                auto v = check_transversality(fam);
                if (!v)
                    fail(v.failure + ": " + v.witness);
            } else if (name == "orthogonality") {
                auto v = check_orthogonality(fam);
                if (!v)
                    fail(v.failure + " = " + v.witness);
            } else if (name == "independence") {
                auto samples = detail::scenario_samples(s);
                auto v = check_frame_independence(fam, samples);
                r.data["determinant"] = v.symbolic.str();
                json vals = json::array();
                for (auto z : v.values)
                    vals.push_back(detail::complex_str(z));
                r.data["values"] = vals;
                if (!v)
                    fail(v.failure);
                else
                    r.detail = std::to_string(samples.size()) + " samples nonsingular";
            } else if (name == "positivity") {
                auto v = check_positivity(fam, detail::scenario_samples(s));
                json rows = json::array();
                std::string csv = "sample,p=1,p=0,p=-1,p=-2";
                for (const auto& smp : v.samples) {
                    json row;
                    row["sample"] = smp.label;
                    row["ok"] = smp.ok;
                    std::string line = smp.label;
                    json vals = json::array();
                    for (auto z : smp.values) {
                        vals.push_back(detail::complex_str(z));
                        line += "," + detail::complex_str(z);
                    }
                    row["values"] = vals;
                    if (!smp.ok)
                        row["reason"] = smp.reason;
                    rows.push_back(row);
                    csv += "\n" + line;
                }
                r.data["samples"] = rows;
                r.data["csv"] = csv;
                if (!v) {
                    for (const auto& smp : v.samples)
                        if (!smp.ok) {
                            fail(smp.label + ": " + smp.reason);
                            break;
                        }
                } else {
                    r.detail = std::to_string(v.samples.size()) + " samples positive";
                }
            } else if (name == "limit") {
                auto lf = limit_fiber(fam);
                json frame = json::array();
                for (const auto& v : lf.frame)
                    frame.push_back(to_json(v));
                r.data["frame"] = frame;
                r.data["lambda_free"] = lf.lambda_free;
                if (!lf.lambda_free)
                    fail("limit frame depends on lambda");
                else if (!lf.verdict)
                    fail("limit is not a mixed Hodge structure: " + lf.verdict.reason);
            } else if (name == "theorem15") {
                auto v = check_theorem15_hypothesis(fam);
                r.data["holds"] = v.holds;
                r.detail = v.holds ? "true" : "false; " + v.witness;
            }
        }
    } catch (const std::exception& e) {
        fail(std::string("error: ") + e.what());
    }
    return r;
}

/// Runs the requested checks in dependency order.
inline Report run_scenario(const Scenario& s, const std::string& command = "check")
{
    Report rep;
    rep.command = command;
    rep.scenario = s.name;
    rep.seed = s.params.seed;
    std::set<std::string> wanted(s.checks.begin(), s.checks.end());
    for (const auto& c : known_checks())
        if (wanted.erase(c))
            rep.checks.push_back(run_check(s, c));
    for (const auto& c : wanted)
        rep.checks.push_back(run_check(s, c));
    return rep;
}

// --- extension files ---------------------------------------------------------

/// Extension data together with the scenario describing its base orbit.
inline json extension_to_json(const Scenario& base, const ExtensionData& e, const GVec& alpha_coeffs)
{
    Scenario b = base;
    b.orbit = e.base;
    b.checks.clear();
    json j;
    j["format"] = 1;
    j["kind"] = "extension";
    j["base"] = to_json(b);
    j["alpha"] = to_json(alpha_coeffs);
    j["alpha_Q"] = to_json(e.alpha_Q);
    j["alpha_F"] = to_json(e.alpha_F);
    j["beta"] = to_json(e.beta);
    j["lift_Q"] = e.lift_Q;
    j["lift_F"] = e.lift_F;
    const auto& x = e.extension.structure;
    j["conjugation"] = to_json(x.conj_matrix);
    j["weight"] = to_json(x.W);
    j["weight_prime"] = to_json(e.extension.relative_to);
    j["hodge"] = to_json(x.F);
    json ns = json::array();
    for (const auto& m : e.extension.family.N)
        ns.push_back(to_json(m));
    j["nilpotent"] = ns;
    return j;
}

struct ExtensionFile {
    Scenario base;
    ExtensionData data;
    GVec alpha;
};

inline ExtensionFile extension_from_json(const json& j)
{
    using namespace detail;
    if (!j.is_object() || j.value("kind", std::string()) != "extension")
        throw ParseError("kind", "expected an extension document");
    const auto& fmt = require(j, "format", "");
    if (!fmt.is_number_integer() || fmt.get<int>() != 1)
        throw ParseError("format", "unsupported format (expected 1)");
    ExtensionFile out;
    out.base = parse_scenario(require(j, "base", ""));
    std::size_t d = out.base.orbit.limit.dim, n = out.base.orbit.family.size();
    auto& e = out.data;
    e.base = out.base.orbit;
    const auto& aj = require(j, "alpha", "");
    out.alpha = parse_vector_json(aj, aj.is_array() ? aj.size() : 0, "alpha");
    e.alpha_Q = parse_vector_json(require(j, "alpha_Q", ""), n * d, "alpha_Q");
    e.alpha_F = parse_vector_json(require(j, "alpha_F", ""), n * d, "alpha_F");
    e.beta = parse_vector_json(require(j, "beta", ""), d, "beta");
    e.lift_Q = j.value("lift_Q", std::string());
    e.lift_F = j.value("lift_F", std::string());
    auto& x = e.extension.structure;
    x.dim = d + 1;
    x.conj_matrix = parse_matrix_json(require(j, "conjugation", ""), d + 1, "conjugation");
    auto [wlo, wp] = parse_indexed(require(j, "weight", ""), d + 1, "weight");
    x.W = IncreasingFiltration(d + 1, wlo, std::move(wp));
    auto [plo, pp] = parse_indexed(require(j, "weight_prime", ""), d + 1, "weight_prime");
    e.extension.relative_to = IncreasingFiltration(d + 1, plo, std::move(pp));
    auto [flo, fp] = parse_indexed(require(j, "hodge", ""), d + 1, "hodge");
    x.F = DecreasingFiltration(d + 1, flo, std::move(fp));
    const auto& nj = require(j, "nilpotent", "");
    if (!nj.is_array() || nj.size() != n)
        throw ParseError("nilpotent", "expected " + std::to_string(n) + " matrices");
    for (std::size_t i = 0; i < n; ++i)
        e.extension.family.N.push_back(parse_matrix_json(nj[i], d + 1, "nilpotent[" + std::to_string(i) + "]"));
    return out;
}

} // namespace mhs
