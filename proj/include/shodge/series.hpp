#pragma once

#include "rational.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace shodge {

// Multivariate polynomial over Q in named symbols.
class CoeffPoly {
public:
    using Monomial = std::map<std::string, int>;
    using Terms = std::map<Monomial, Rational>;

    CoeffPoly() = default;
    CoeffPoly(const Rational& c) { add({}, c); }
    CoeffPoly(long c) : CoeffPoly(Rational(c)) {}
    static CoeffPoly symbol(const std::string& s, int power = 1, const Rational& c = 1)
    {
        CoeffPoly p;
        p.add(power == 0 ? Monomial{} : Monomial{{s, power}}, c);
        return p;
    }

    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty()); }
    Rational constant() const
    {
        auto it = terms_.find(Monomial{});
        return it == terms_.end() ? Rational(0) : it->second;
    }
    std::set<std::string> symbols() const
    {
        std::set<std::string> s;
        for (auto& [m, c] : terms_) {
            for (auto& [v, e] : m) {
                s.insert(v);
            }
        }
        return s;
    }

    void add(Monomial m, const Rational& c)
    {
        for (auto it = m.begin(); it != m.end();) {
            if (it->second < 0) {
                throw domain_error("negative symbol exponent");
            }
            it = it->second == 0 ? m.erase(it) : std::next(it);
        }
        if (c == 0) {
            return;
        }
        auto [it, fresh] = terms_.emplace(std::move(m), c);
        if (!fresh) {
            it->second += c;
            if (it->second == 0) {
                terms_.erase(it);
            }
        }
    }

    friend CoeffPoly operator+(CoeffPoly a, const CoeffPoly& b)
    {
        for (auto& [m, c] : b.terms_) {
            a.add(m, c);
        }
        return a;
    }
    friend CoeffPoly operator-(const CoeffPoly& a)
    {
        CoeffPoly r;
        for (auto& [m, c] : a.terms_) {
            r.add(m, -c);
        }
        return r;
    }
    friend CoeffPoly operator-(const CoeffPoly& a, const CoeffPoly& b) { return a + (-b); }
    friend CoeffPoly operator*(const CoeffPoly& a, const CoeffPoly& b)
    {
        CoeffPoly r;
        for (auto& [m, c] : a.terms_) {
            for (auto& [k, d] : b.terms_) {
                Monomial mk = m;
                for (auto& [v, e] : k) {
                    mk[v] += e;
                }
                r.add(std::move(mk), c * d);
            }
        }
        return r;
    }
    CoeffPoly& operator+=(const CoeffPoly& o) { return *this = *this + o; }
    friend bool operator==(const CoeffPoly& a, const CoeffPoly& b) { return a.terms_ == b.terms_; }

private:
    Terms terms_;
};

inline std::string to_string(const CoeffPoly& p)
{
    if (p.is_zero()) {
        return "0";
    }
    std::string s;
    for (auto& [m, c] : p.terms()) {
        if (!s.empty()) {
            s += " + ";
        }
        s += to_string(c);
        for (auto& [v, e] : m) {
            s += "*" + v + (e == 1 ? "" : "^" + std::to_string(e));
        }
    }
    return s;
}

// c_0 + c_1 hbar + ... + c_N hbar^N, valid through hbar^N.
class TruncatedSeries {
public:
    explicit TruncatedSeries(int order) : coeffs_(static_cast<std::size_t>(check(order)) + 1) {}
    TruncatedSeries(int order, std::vector<CoeffPoly> c) : coeffs_(std::move(c))
    {
        check(order);
        coeffs_.resize(static_cast<std::size_t>(order) + 1);
    }
    static TruncatedSeries exp_series(int order)
    {
        TruncatedSeries s(order);
        for (int k = 0; k <= order; ++k) {
            s.coeffs_[static_cast<std::size_t>(k)] = CoeffPoly(Rational(1) / factorial_rational(k));
        }
        return s;
    }

    int order() const { return static_cast<int>(coeffs_.size()) - 1; }
    const std::vector<CoeffPoly>& coeffs() const { return coeffs_; }
    const CoeffPoly& operator[](int k) const { return coeffs_.at(static_cast<std::size_t>(k)); }
    void set(int k, const CoeffPoly& c) { coeffs_.at(static_cast<std::size_t>(k)) = c; }
    TruncatedSeries truncated(int order) const
    {
        int n = std::min(order, this->order());
        return TruncatedSeries(n, std::vector<CoeffPoly>(coeffs_.begin(), coeffs_.begin() + n + 1));
    }
    std::set<std::string> symbols() const
    {
        std::set<std::string> s;
        for (auto& c : coeffs_) {
            auto t = c.symbols();
            s.insert(t.begin(), t.end());
        }
        return s;
    }

    friend TruncatedSeries operator+(const TruncatedSeries& a, const TruncatedSeries& b)
    {
        int n = std::min(a.order(), b.order());
        TruncatedSeries r(n);
        for (int k = 0; k <= n; ++k) {
            r.set(k, a[k] + b[k]);
        }
        return r;
    }
    friend bool operator==(const TruncatedSeries& a, const TruncatedSeries& b) { return a.coeffs_ == b.coeffs_; }

private:
    static int check(int order)
    {
        if (order < 0) {
            throw domain_error("truncation order must be nonnegative");
        }
        return order;
    }
    std::vector<CoeffPoly> coeffs_;
};

inline TruncatedSeries series_mul(const TruncatedSeries& a, const TruncatedSeries& b)
{
    int n = std::min(a.order(), b.order());
    TruncatedSeries r(n);
    for (int k = 0; k <= n; ++k) {
        CoeffPoly c;
        for (int i = 0; i <= k; ++i) {
            if (!a[i].is_zero() && !b[k - i].is_zero()) {
                c += a[i] * b[k - i];
            }
        }
        r.set(k, c);
    }
    return r;
}

inline TruncatedSeries series_inv(const TruncatedSeries& a)
{
    if (!a[0].is_constant() || a[0].is_zero()) {
        throw domain_error("series constant term is not an invertible rational");
    }
    Rational c0inv = Rational(1) / a[0].constant();
    TruncatedSeries r(a.order());
    r.set(0, CoeffPoly(c0inv));
    for (int k = 1; k <= a.order(); ++k) {
        CoeffPoly s;
        for (int i = 1; i <= k; ++i) {
            s += a[i] * r[k - i];
        }
        r.set(k, CoeffPoly(-c0inv) * s);
    }
    return r;
}

// hbar -> -hbar
inline TruncatedSeries flip(const TruncatedSeries& a)
{
    TruncatedSeries r(a.order());
    for (int k = 0; k <= a.order(); ++k) {
        r.set(k, k % 2 ? -a[k] : a[k]);
    }
    return r;
}

inline TruncatedSeries q_parameter(const TruncatedSeries& w)
{
    if (!(w[0] == CoeffPoly(1))) {
        throw domain_error("q-parameter needs w(0) = 1");
    }
    return series_mul(w, series_inv(flip(w)));
}

struct ExpComparison {
    bool match = true;
    int through = 0;
    std::optional<int> first_mismatch;
};

inline ExpComparison compare_exp(const TruncatedSeries& q)
{
    ExpComparison c;
    c.through = q.order();
    auto e = TruncatedSeries::exp_series(q.order());
    for (int k = 0; k <= q.order(); ++k) {
        if (!(q[k] == e[k])) {
            c.match = false;
            c.first_mismatch = k;
            break;
        }
    }
    return c;
}

} // namespace shodge
