#pragma once

#include "gysin.hpp"
#include "qtorus.hpp"
#include "series.hpp"
#include "toric.hpp"

#include <nlohmann/json.hpp>

#include <initializer_list>
#include <set>
#include <stdexcept>
#include <string>

namespace shodge {

using Json = nlohmann::json;

// Malformed input: `pointer` is the JSON pointer to the offending value.
class schema_error : public std::runtime_error {
public:
    schema_error(std::string pointer, const std::string& what)
        : std::runtime_error((pointer.empty() ? std::string("/") : pointer) + ": " + what), pointer_(std::move(pointer))
    {
    }
    const std::string& pointer() const { return pointer_; }

private:
    std::string pointer_;
};

namespace json_detail {

inline std::string child(const std::string& ptr, const std::string& key)
{
    std::string k;
    for (char c : key) {
        if (c == '~') {
            k += "~0";
        } else if (c == '/') {
            k += "~1";
        } else {
            k += c;
        }
    }
    return ptr + "/" + k;
}
inline std::string child(const std::string& ptr, std::size_t i) { return ptr + "/" + std::to_string(i); }

inline void expect_object(const Json& j, const std::string& ptr, std::initializer_list<const char*> required,
                          std::initializer_list<const char*> optional = {})
{
    if (!j.is_object()) {
        throw schema_error(ptr, "expected an object");
    }
    std::set<std::string> known;
    for (auto k : required) {
        known.insert(k);
        if (!j.contains(k)) {
            throw schema_error(child(ptr, k), "missing required field");
        }
    }
    for (auto k : optional) {
        known.insert(k);
    }
    for (auto& [k, v] : j.items()) {
        if (!known.count(k)) {
            throw schema_error(child(ptr, k), "unknown field");
        }
    }
}

inline const Json& expect_array(const Json& j, const std::string& ptr)
{
    if (!j.is_array()) {
        throw schema_error(ptr, "expected an array");
    }
    return j;
}

inline long get_int(const Json& j, const std::string& ptr)
{
    if (!j.is_number_integer()) {
        throw schema_error(ptr, "expected an integer");
    }
    return j.get<long>();
}

inline std::size_t get_count(const Json& j, const std::string& ptr)
{
    long v = get_int(j, ptr);
    if (v < 0) {
        throw schema_error(ptr, "expected a nonnegative integer");
    }
    return static_cast<std::size_t>(v);
}

inline bool get_bool(const Json& j, const std::string& ptr)
{
    if (!j.is_boolean()) {
        throw schema_error(ptr, "expected a boolean");
    }
    return j.get<bool>();
}

inline const std::string& get_string(const Json& j, const std::string& ptr)
{
    if (!j.is_string()) {
        throw schema_error(ptr, "expected a string");
    }
    return j.get_ref<const std::string&>();
}

} // namespace json_detail

// Integers: JSON numbers when they fit in a long, decimal strings otherwise.
inline Json integer_to_json(const Integer& z)
{
    if (z.fits_slong_p()) {
        return z.get_si();
    }
    return z.get_str();
}

inline Integer integer_from_json(const Json& j, const std::string& ptr = "")
{
    if (j.is_number_integer()) {
        return Integer(j.get<long>());
    }
    Integer z;
    if (j.is_string() && parse_integer(j.get_ref<const std::string&>(), z)) {
        return z;
    }
    throw schema_error(ptr, "expected an integer");
}

inline Json rational_to_json(const Rational& r) { return to_string(r); }

inline Rational rational_from_json(const Json& j, const std::string& ptr = "")
{
    const auto& s = json_detail::get_string(j, ptr);
    try {
        return parse_rational(s);
    } catch (const std::invalid_argument&) {
        throw schema_error(ptr, "expected a rational string \"p/q\"");
    }
}

// tau-Laurent polynomial: [[power, "p/q"], ...] sorted by power.
inline Json tau_to_json(const TauScalar& s)
{
    Json a = Json::array();
    for (auto& [k, c] : s.terms()) {
        a.push_back(Json::array({k, rational_to_json(c)}));
    }
    return a;
}

inline TauScalar tau_from_json(const Json& j, const std::string& ptr = "")
{
    using namespace json_detail;
    expect_array(j, ptr);
    TauScalar s;
    std::set<long> seen;
    for (std::size_t i = 0; i < j.size(); ++i) {
        auto p = child(ptr, i);
        const Json& t = j[i];
        if (!t.is_array() || t.size() != 2) {
            throw schema_error(p, "expected [power, \"p/q\"]");
        }
        long k = get_int(t[0], child(p, 0));
        if (!seen.insert(k).second) {
            throw schema_error(child(p, 0), "repeated tau power");
        }
        s += TauScalar::tau_power(static_cast<int>(k), rational_from_json(t[1], child(p, 1)));
    }
    return s;
}

// Elements of Q(tau): a bare Laurent polynomial, or {"num", "den"}.
inline Json fraction_to_json(const TauFraction& f)
{
    if (f.is_laurent()) {
        return tau_to_json(f.numerator());
    }
    return {{"num", tau_to_json(f.numerator())}, {"den", tau_to_json(f.denominator())}};
}

inline TauFraction fraction_from_json(const Json& j, const std::string& ptr = "")
{
    using namespace json_detail;
    if (j.is_array()) {
        return TauFraction(tau_from_json(j, ptr));
    }
    expect_object(j, ptr, {"num", "den"});
    auto den = tau_from_json(j["den"], child(ptr, "den"));
    if (den.is_zero()) {
        throw schema_error(child(ptr, "den"), "zero denominator");
    }
    return TauFraction(tau_from_json(j["num"], child(ptr, "num")), den);
}

inline Json exp_to_json(const ExpValue& e) { return {{"log", tau_to_json(e.log())}}; }

inline ExpValue exp_from_json(const Json& j, const std::string& ptr = "")
{
    json_detail::expect_object(j, ptr, {"log"});
    return ExpValue(tau_from_json(j["log"], json_detail::child(ptr, "log")));
}

// Keys "i,j" are 1-based.
inline std::string pair_key(int i, int j) { return std::to_string(i + 1) + "," + std::to_string(j + 1); }

inline std::pair<int, int> pair_from_key(const std::string& key, const std::string& ptr)
{
    auto comma = key.find(',');
    Integer a, b;
    if (comma == std::string::npos || !parse_integer(key.substr(0, comma), a) ||
        !parse_integer(key.substr(comma + 1), b) || !a.fits_sint_p() || !b.fits_sint_p()) {
        throw schema_error(ptr, "expected a key \"i,j\"");
    }
    int i = static_cast<int>(a.get_si()), j = static_cast<int>(b.get_si());
    if (i < 1 || j <= i) {
        throw schema_error(ptr, "pair key needs 1 <= i < j");
    }
    return {i - 1, j - 1};
}

inline Json pair_map_to_json(const std::map<std::pair<int, int>, ExpValue>& m)
{
    Json o = Json::object();
    for (auto& [ij, e] : m) {
        o[pair_key(ij.first, ij.second)] = exp_to_json(e);
    }
    return o;
}

inline std::map<std::pair<int, int>, ExpValue> pair_map_from_json(const Json& j, const std::string& ptr = "")
{
    if (!j.is_object()) {
        throw schema_error(ptr, "expected an object");
    }
    std::map<std::pair<int, int>, ExpValue> m;
    for (auto& [k, v] : j.items()) {
        auto p = json_detail::child(ptr, k);
        m[pair_from_key(k, p)] = exp_from_json(v, p);
    }
    return m;
}

inline Json lambda_to_json(const ToricPoissonStructure& s)
{
    Json o = Json::object();
    for (auto [i, j] : s.pairs()) {
        if (!s.at(i, j).is_zero()) {
            o[pair_key(i, j)] = tau_to_json(s.at(i, j));
        }
    }
    return o;
}

// With n = 0 the dimension is the largest index present.
inline ToricPoissonStructure lambda_from_json(const Json& j, int n = 0, const std::string& ptr = "")
{
    if (!j.is_object()) {
        throw schema_error(ptr, "expected an object of \"i,j\" entries");
    }
    std::map<std::pair<int, int>, TauScalar> entries;
    int top = 0;
    for (auto& [k, v] : j.items()) {
        auto p = json_detail::child(ptr, k);
        auto ij = pair_from_key(k, p);
        if (n > 0 && ij.second >= n) {
            throw schema_error(p, "index exceeds the torus dimension " + std::to_string(n));
        }
        top = std::max(top, ij.second + 1);
        entries[ij] = tau_from_json(v, p);
    }
    if (n == 0) {
        if (top == 0) {
            throw schema_error(ptr, "cannot infer the dimension from an empty object");
        }
        n = top;
    }
    ToricPoissonStructure s(n);
    for (auto& [ij, v] : entries) {
        s.set(ij.first, ij.second, v);
    }
    return s;
}

inline Json int_matrix_to_json(const IntMatrix& m)
{
    Json a = Json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Json r = Json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) {
            r.push_back(integer_to_json(m(i, j)));
        }
        a.push_back(std::move(r));
    }
    return a;
}

// Rows and columns are explicit so empty shapes survive.
inline IntMatrix int_rows_from_json(const Json& j, std::size_t cols, const std::string& ptr)
{
    json_detail::expect_array(j, ptr);
    IntMatrix m(j.size(), cols);
    for (std::size_t i = 0; i < j.size(); ++i) {
        auto p = json_detail::child(ptr, i);
        if (!j[i].is_array() || j[i].size() != cols) {
            throw schema_error(p, "expected a row of length " + std::to_string(cols));
        }
        for (std::size_t c = 0; c < cols; ++c) {
            m(i, c) = integer_from_json(j[i][c], json_detail::child(p, c));
        }
    }
    return m;
}

inline IntMatrix int_matrix_from_json(const Json& j, const std::string& ptr = "")
{
    json_detail::expect_array(j, ptr);
    std::size_t cols = j.empty() || !j[0].is_array() ? 0 : j[0].size();
    return int_rows_from_json(j, cols, ptr);
}

template <class T, class F>
Json matrix_to_json(const Matrix<T>& m, F&& entry)
{
    Json a = Json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Json r = Json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) {
            r.push_back(entry(m(i, j)));
        }
        a.push_back(std::move(r));
    }
    return a;
}

template <class T, class F>
Matrix<T> matrix_from_json(const Json& j, std::size_t rows, std::size_t cols, const std::string& ptr, F&& entry)
{
    json_detail::expect_array(j, ptr);
    if (j.size() != rows) {
        throw schema_error(ptr, "expected " + std::to_string(rows) + " rows");
    }
    Matrix<T> m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        auto p = json_detail::child(ptr, i);
        if (!j[i].is_array() || j[i].size() != cols) {
            throw schema_error(p, "expected a row of length " + std::to_string(cols));
        }
        for (std::size_t c = 0; c < cols; ++c) {
            m(i, c) = entry(j[i][c], json_detail::child(p, c));
        }
    }
    return m;
}

inline Json exp_matrix_to_json(const Matrix<ExpValue>& m)
{
    return matrix_to_json(m, [](const ExpValue& e) { return exp_to_json(e); });
}

inline Json subspace_to_json(const Subspace& s)
{
    Json rows = Json::array();
    for (auto& r : s.rows()) {
        Json row = Json::array();
        for (auto& x : r) {
            row.push_back(fraction_to_json(x));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

inline Subspace subspace_from_json(const Json& j, std::size_t ambient, const std::string& ptr)
{
    json_detail::expect_array(j, ptr);
    std::vector<std::vector<TauFraction>> rows;
    for (std::size_t i = 0; i < j.size(); ++i) {
        auto p = json_detail::child(ptr, i);
        if (!j[i].is_array() || j[i].size() != ambient) {
            throw schema_error(p, "expected a vector of length " + std::to_string(ambient));
        }
        std::vector<TauFraction> v;
        for (std::size_t c = 0; c < ambient; ++c) {
            v.push_back(fraction_from_json(j[i][c], json_detail::child(p, c)));
        }
        rows.push_back(std::move(v));
    }
    return Subspace(ambient, rows);
}

inline Json filtration_to_json(const Filtration& f)
{
    Json steps = Json::array();
    for (auto& s : f.steps()) {
        steps.push_back(subspace_to_json(s));
    }
    return {{"kind", f.kind() == Filtration::Kind::increasing ? "increasing" : "decreasing"},
            {"ambient", f.ambient()},
            {"lo", f.lo()},
            {"steps", steps}};
}

inline Filtration filtration_from_json(const Json& j, const std::string& ptr = "")
{
    using namespace json_detail;
    expect_object(j, ptr, {"kind", "ambient", "lo", "steps"});
    const auto& kind = get_string(j["kind"], child(ptr, "kind"));
    if (kind != "increasing" && kind != "decreasing") {
        throw schema_error(child(ptr, "kind"), "expected \"increasing\" or \"decreasing\"");
    }
    std::size_t ambient = get_count(j["ambient"], child(ptr, "ambient"));
    int lo = static_cast<int>(get_int(j["lo"], child(ptr, "lo")));
    auto sp = child(ptr, "steps");
    expect_array(j["steps"], sp);
    std::vector<Subspace> steps;
    for (std::size_t i = 0; i < j["steps"].size(); ++i) {
        steps.push_back(subspace_from_json(j["steps"][i], ambient, child(sp, i)));
    }
    return Filtration(kind == "increasing" ? Filtration::Kind::increasing : Filtration::Kind::decreasing, ambient, lo,
                      std::move(steps));
}

// The lattice is recorded by a presentation whose rows are the generators.
inline Json mhs_to_json(const MixedHodgeStructure& v)
{
    return {{"lattice", {{"relations", v.lattice.presentation().cols()},
                         {"presentation", int_matrix_to_json(v.lattice.presentation())}}},
            {"comparison", matrix_to_json(v.comparison, [](const TauScalar& s) { return tau_to_json(s); })},
            {"weight", filtration_to_json(v.weight)},
            {"hodge", filtration_to_json(v.hodge)}};
}

inline MixedHodgeStructure mhs_from_json(const Json& j, const std::string& ptr = "")
{
    using namespace json_detail;
    expect_object(j, ptr, {"lattice", "comparison", "weight", "hodge"});
    auto lp = child(ptr, "lattice");
    expect_object(j["lattice"], lp, {"relations", "presentation"});
    std::size_t rel = get_count(j["lattice"]["relations"], child(lp, "relations"));
    IntMatrix pres = int_rows_from_json(j["lattice"]["presentation"], rel, child(lp, "presentation"));
    auto weight = filtration_from_json(j["weight"], child(ptr, "weight"));
    auto hodge = filtration_from_json(j["hodge"], child(ptr, "hodge"));
    if (weight.kind() != Filtration::Kind::increasing || hodge.kind() != Filtration::Kind::decreasing) {
        throw schema_error(ptr, "weight must be increasing and hodge decreasing");
    }
    if (hodge.ambient() != weight.ambient()) {
        throw schema_error(child(ptr, "hodge"), "ambient differs from the weight filtration");
    }
    auto comparison = matrix_from_json<TauScalar>(j["comparison"], weight.ambient(), pres.rows(),
                                                   child(ptr, "comparison"), tau_from_json);
    return {FgAbGroup(pres), comparison, weight, hodge};
}

inline Json group_to_json(const FgAbGroup& g)
{
    Json o = {{"free", g.free_rank()}};
    if (!g.torsion().empty()) {
        Json t = Json::array();
        for (auto& d : g.torsion()) {
            t.push_back(integer_to_json(d));
        }
        o["torsion"] = t;
    }
    return o;
}

inline FgAbGroup group_from_json(const Json& j, const std::string& ptr = "")
{
    using namespace json_detail;
    expect_object(j, ptr, {"free"}, {"torsion"});
    std::vector<Integer> t;
    if (j.contains("torsion")) {
        auto tp = child(ptr, "torsion");
        expect_array(j["torsion"], tp);
        for (std::size_t i = 0; i < j["torsion"].size(); ++i) {
            Integer d = integer_from_json(j["torsion"][i], child(tp, i));
            if (d < 2) {
                throw schema_error(child(tp, i), "torsion orders must be at least 2");
            }
            t.push_back(d);
        }
    }
    auto g = FgAbGroup::from_invariants(get_count(j["free"], child(ptr, "free")), t);
    if (g.torsion() != t) {
        throw schema_error(child(ptr, "torsion"), "torsion must be a divisibility chain");
    }
    return g;
}

inline Json graded_to_json(const GradedKResult& r)
{
    Json o = Json::object();
    for (auto& [w, g] : r) {
        o["w" + std::to_string(w)] = group_to_json(g);
    }
    return o;
}

inline GradedKResult graded_from_json(const Json& j, const std::string& ptr = "")
{
    if (!j.is_object()) {
        throw schema_error(ptr, "expected an object");
    }
    GradedKResult r;
    for (auto& [k, v] : j.items()) {
        auto p = json_detail::child(ptr, k);
        Integer w;
        if (k.size() < 2 || k[0] != 'w' || !parse_integer(k.substr(1), w) || !w.fits_sint_p()) {
            throw schema_error(p, "expected a weight key \"w<k>\"");
        }
        r.emplace(static_cast<int>(w.get_si()), group_from_json(v, p));
    }
    return r;
}

inline Json gysin_input_to_json(const GysinInput& g)
{
    Json cols = Json::array();
    for (std::size_t c = 0; c < g.pushforward.cols(); ++c) {
        Json col = Json::array();
        for (std::size_t r = 0; r < g.rank(); ++r) {
            col.push_back(integer_to_json(g.pushforward(r, c)));
        }
        cols.push_back(std::move(col));
    }
    return {{"ambient", g.labels},
            {"pushforward", cols},
            {"odd", {{"rank", g.odd_rank}, {"weight", g.odd_weight}}},
            {"even_weight", g.even_weight},
            {"reduced", g.reduced}};
}

// "pushforward" lists the images of the submanifold classes, one column per entry.
inline GysinInput gysin_input_from_json(const Json& j, const std::string& ptr = "")
{
    using namespace json_detail;
    expect_object(j, ptr, {"ambient", "pushforward", "odd"}, {"source", "even_weight", "reduced", "note"});
    GysinInput g;
    auto ap = child(ptr, "ambient");
    expect_array(j["ambient"], ap);
    for (std::size_t i = 0; i < j["ambient"].size(); ++i) {
        g.labels.push_back(get_string(j["ambient"][i], child(ap, i)));
    }
    auto pp = child(ptr, "pushforward");
    IntMatrix cols = int_rows_from_json(j["pushforward"], g.labels.size(), pp);
    g.pushforward = cols.transpose();
    if (j.contains("source")) {
        auto sp = child(ptr, "source");
        expect_array(j["source"], sp);
        if (j["source"].size() != cols.rows()) {
            throw schema_error(sp, "expected one label per pushforward column");
        }
        for (std::size_t i = 0; i < j["source"].size(); ++i) {
            get_string(j["source"][i], child(sp, i));
        }
    }
    auto op = child(ptr, "odd");
    expect_object(j["odd"], op, {"rank", "weight"});
    g.odd_rank = get_count(j["odd"]["rank"], child(op, "rank"));
    g.odd_weight = static_cast<int>(get_int(j["odd"]["weight"], child(op, "weight")));
    if (j.contains("even_weight")) {
        g.even_weight = static_cast<int>(get_int(j["even_weight"], child(ptr, "even_weight")));
    }
    if (j.contains("reduced")) {
        g.reduced = get_bool(j["reduced"], child(ptr, "reduced"));
    }
    if (j.contains("note")) {
        get_string(j["note"], child(ptr, "note"));
    }
    return g;
}

inline Json poly_to_json(const CoeffPoly& p)
{
    Json a = Json::array();
    for (auto& [m, c] : p.terms()) {
        Json mono = Json::object();
        for (auto& [v, e] : m) {
            mono[v] = e;
        }
        a.push_back({{"mono", mono}, {"val", rational_to_json(c)}});
    }
    return a;
}

inline CoeffPoly poly_from_json(const Json& j, const std::string& ptr = "")
{
    using namespace json_detail;
    expect_array(j, ptr);
    CoeffPoly p;
    std::set<CoeffPoly::Monomial> seen;
    for (std::size_t i = 0; i < j.size(); ++i) {
        auto tp = child(ptr, i);
        expect_object(j[i], tp, {"mono", "val"});
        auto mp = child(tp, "mono");
        if (!j[i]["mono"].is_object()) {
            throw schema_error(mp, "expected an object of symbol exponents");
        }
        CoeffPoly::Monomial m;
        for (auto& [v, e] : j[i]["mono"].items()) {
            long k = get_int(e, child(mp, v));
            if (k < 0) {
                throw schema_error(child(mp, v), "negative exponent");
            }
            if (v.empty()) {
                throw schema_error(child(mp, v), "empty symbol name");
            }
            if (k > 0) {
                m[v] = static_cast<int>(k);
            }
        }
        if (!seen.insert(m).second) {
            throw schema_error(mp, "repeated monomial");
        }
        p.add(m, rational_from_json(j[i]["val"], child(tp, "val")));
    }
    return p;
}

inline Json series_to_json(const TruncatedSeries& s)
{
    Json coeffs = Json::array();
    for (int k = 0; k <= s.order(); ++k) {
        if (!s[k].is_zero()) {
            coeffs.push_back({{"pow", k}, {"poly", poly_to_json(s[k])}});
        }
    }
    Json o = {{"order", s.order()}, {"coeffs", coeffs}};
    auto syms = s.symbols();
    if (!syms.empty()) {
        o["symbols"] = syms;
    }
    return o;
}

inline TruncatedSeries series_from_json(const Json& j, const std::string& ptr = "")
{
    using namespace json_detail;
    expect_object(j, ptr, {"order", "coeffs"}, {"symbols", "note"});
    long order = get_int(j["order"], child(ptr, "order"));
    if (order < 0) {
        throw schema_error(child(ptr, "order"), "order must be nonnegative");
    }
    TruncatedSeries s(static_cast<int>(order));
    auto cp = child(ptr, "coeffs");
    expect_array(j["coeffs"], cp);
    std::set<long> seen;
    for (std::size_t i = 0; i < j["coeffs"].size(); ++i) {
        auto ep = child(cp, i);
        expect_object(j["coeffs"][i], ep, {"pow", "poly"});
        long k = get_int(j["coeffs"][i]["pow"], child(ep, "pow"));
        if (k < 0 || k > order) {
            throw schema_error(child(ep, "pow"), "power outside 0..order");
        }
        if (!seen.insert(k).second) {
            throw schema_error(child(ep, "pow"), "repeated power");
        }
        s.set(static_cast<int>(k), poly_from_json(j["coeffs"][i]["poly"], child(ep, "poly")));
    }
    if (j.contains("symbols")) {
        auto sp = child(ptr, "symbols");
        expect_array(j["symbols"], sp);
        std::set<std::string> declared;
        for (std::size_t i = 0; i < j["symbols"].size(); ++i) {
            declared.insert(get_string(j["symbols"][i], child(sp, i)));
        }
        for (auto& v : s.symbols()) {
            if (!declared.count(v)) {
                throw schema_error(sp, "symbol '" + v + "' is used but not declared");
            }
        }
    }
    if (j.contains("note")) {
        get_string(j["note"], child(ptr, "note"));
    }
    return s;
}

inline Json qcoeff_to_json(const QCoeff& q)
{
    Json a = Json::array();
    for (auto& [e, c] : q.terms()) {
        a.push_back({{"log", tau_to_json(e.log())}, {"c", fraction_to_json(c)}});
    }
    return a;
}

inline QCoeff qcoeff_from_json(const Json& j, const std::string& ptr = "")
{
    using namespace json_detail;
    expect_array(j, ptr);
    QCoeff q;
    for (std::size_t i = 0; i < j.size(); ++i) {
        auto p = child(ptr, i);
        expect_object(j[i], p, {"log", "c"});
        q.add(ExpValue(tau_from_json(j[i]["log"], child(p, "log"))), fraction_from_json(j[i]["c"], child(p, "c")));
    }
    return q;
}

inline Json qtorus_element_to_json(const QTorusElement& a)
{
    Json terms = Json::array();
    for (auto& [k, c] : a.terms()) {
        terms.push_back({{"exponent", k}, {"coeff", qcoeff_to_json(c)}});
    }
    return {{"n", a.params().n}, {"lambda", lambda_to_json(a.params().poisson())}, {"terms", terms}};
}

inline QTorusElement qtorus_element_from_json(const Json& j, const std::string& ptr = "")
{
    using namespace json_detail;
    expect_object(j, ptr, {"n", "lambda", "terms"});
    long n = get_int(j["n"], child(ptr, "n"));
    if (n < 1 || n > 16) {
        throw schema_error(child(ptr, "n"), "dimension must lie in 1..16");
    }
    QTorusParams params(lambda_from_json(j["lambda"], static_cast<int>(n), child(ptr, "lambda")));
    QTorusElement a(params);
    auto tp = child(ptr, "terms");
    expect_array(j["terms"], tp);
    for (std::size_t i = 0; i < j["terms"].size(); ++i) {
        auto p = child(tp, i);
        expect_object(j["terms"][i], p, {"exponent", "coeff"});
        auto ep = child(p, "exponent");
        expect_array(j["terms"][i]["exponent"], ep);
        if (j["terms"][i]["exponent"].size() != static_cast<std::size_t>(n)) {
            throw schema_error(ep, "expected " + std::to_string(n) + " exponents");
        }
        Exponent k;
        for (std::size_t c = 0; c < static_cast<std::size_t>(n); ++c) {
            k.push_back(get_int(j["terms"][i]["exponent"][c], child(ep, c)));
        }
        a.add(k, qcoeff_from_json(j["terms"][i]["coeff"], child(p, "coeff")));
    }
    return a;
}

inline Json polyvector_to_json(const Polyvector& p)
{
    Json a = Json::array();
    for (auto& [J, c] : p.terms()) {
        Json idx = Json::array();
        for (int i : members(J)) {
            idx.push_back(i + 1);
        }
        a.push_back({{"wedge", idx}, {"c", fraction_to_json(c)}});
    }
    return a;
}

inline Polyvector polyvector_from_json(const Json& j, TorusContext ctx, const std::string& ptr = "")
{
    using namespace json_detail;
    expect_array(j, ptr);
    Polyvector p(ctx);
    for (std::size_t i = 0; i < j.size(); ++i) {
        auto tp = child(ptr, i);
        expect_object(j[i], tp, {"wedge", "c"});
        auto wp = child(tp, "wedge");
        expect_array(j[i]["wedge"], wp);
        std::vector<int> idx;
        for (std::size_t c = 0; c < j[i]["wedge"].size(); ++c) {
            long v = get_int(j[i]["wedge"][c], child(wp, c));
            if (v < 1 || v > ctx.n || (!idx.empty() && v - 1 <= idx.back())) {
                throw schema_error(child(wp, c), "indices must increase within 1..n");
            }
            idx.push_back(static_cast<int>(v - 1));
        }
        p.add(index_set(idx), fraction_from_json(j[i]["c"], child(tp, "c")));
    }
    return p;
}

inline Json connection_to_json(const ConnectionOperator& op)
{
    Json terms = Json::array();
    for (auto& [m, p] : op.terms()) {
        terms.push_back({{"u", m}, {"poly", polyvector_to_json(p)}});
    }
    return {{"n", op.context().n}, {"terms", terms}};
}

inline Json zero_obstruction_to_json(const ZeroObstruction& z)
{
    Json v = Json::object();
    for (auto& [ij, s] : z.values) {
        v[pair_key(ij.first, ij.second)] = tau_to_json(s);
    }
    return {{"values", v}, {"is_morphism", z.is_morphism}};
}

inline Json flag_to_json(const KBasis& basis, const Filtration& f)
{
    Json b = Json::array();
    for (std::size_t i = 0; i < basis.size(); ++i) {
        Json idx = Json::array();
        for (int k : members(basis[i])) {
            idx.push_back(k + 1);
        }
        b.push_back(idx);
    }
    return {{"basis", b}, {"filtration", filtration_to_json(f)}};
}

} // namespace shodge
