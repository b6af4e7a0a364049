#pragma once

#include "rational.hpp"

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace shodge {

// Laurent polynomial in the transcendental tau = 2*pi*i over Q.
class TauScalar {
public:
    using Terms = std::map<int, Rational>;

    TauScalar() = default;
    TauScalar(const Rational& c) { set(0, c); }
    TauScalar(long c) : TauScalar(Rational(c)) {}
    explicit TauScalar(Terms t)
    {
        for (auto& [k, c] : t) {
            set(k, c);
        }
    }

    static TauScalar tau_power(int k, const Rational& c = 1)
    {
        TauScalar s;
        s.set(k, c);
        return s;
    }
    static TauScalar tau() { return tau_power(1); }

    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == 0); }
    Rational coeff(int k) const
    {
        auto it = terms_.find(k);
        return it == terms_.end() ? Rational(0) : it->second;
    }
    int min_degree() const { return terms_.empty() ? 0 : terms_.begin()->first; }
    int max_degree() const { return terms_.empty() ? 0 : terms_.rbegin()->first; }

    TauScalar shifted(int k) const
    {
        TauScalar r;
        for (auto& [e, c] : terms_) {
            r.terms_.emplace(e + k, c);
        }
        return r;
    }

    TauScalar& operator+=(const TauScalar& o)
    {
        for (auto& [k, c] : o.terms_) {
            add(k, c);
        }
        return *this;
    }
    TauScalar& operator-=(const TauScalar& o)
    {
        for (auto& [k, c] : o.terms_) {
            add(k, -c);
        }
        return *this;
    }
    TauScalar& operator*=(const TauScalar& o) { return *this = *this * o; }

    friend TauScalar operator+(TauScalar a, const TauScalar& b) { return a += b; }
    friend TauScalar operator-(TauScalar a, const TauScalar& b) { return a -= b; }
    friend TauScalar operator-(const TauScalar& a)
    {
        TauScalar r;
        for (auto& [k, c] : a.terms_) {
            r.terms_.emplace(k, -c);
        }
        return r;
    }
    friend TauScalar operator*(const TauScalar& a, const TauScalar& b)
    {
        TauScalar r;
        for (auto& [i, x] : a.terms_) {
            for (auto& [j, y] : b.terms_) {
                r.add(i + j, x * y);
            }
        }
        return r;
    }
    friend TauScalar operator*(const TauScalar& a, const Rational& c)
    {
        if (c == 0) {
            return {};
        }
        TauScalar r;
        for (auto& [k, x] : a.terms_) {
            r.terms_.emplace(k, x * c);
        }
        return r;
    }

    friend bool operator==(const TauScalar& a, const TauScalar& b) { return a.terms_ == b.terms_; }

    // Total order used for map keys: lexicographic on (exponent, coefficient) pairs.
    friend bool operator<(const TauScalar& a, const TauScalar& b)
    {
        auto i = a.terms_.begin();
        auto j = b.terms_.begin();
        for (; i != a.terms_.end() && j != b.terms_.end(); ++i, ++j) {
            if (i->first != j->first) {
                return i->first < j->first;
            }
            if (i->second != j->second) {
                return i->second < j->second;
            }
        }
        return i == a.terms_.end() && j != b.terms_.end();
    }

private:
    void set(int k, const Rational& c)
    {
        if (c != 0) {
            terms_[k] = c;
        }
    }
    void add(int k, const Rational& c)
    {
        if (c == 0) {
            return;
        }
        auto [it, fresh] = terms_.emplace(k, c);
        if (!fresh) {
            it->second += c;
            if (it->second == 0) {
                terms_.erase(it);
            }
        }
    }

    Terms terms_;
};

inline TauScalar tau_conjugate(const TauScalar& s)
{
    TauScalar::Terms t;
    for (auto& [k, c] : s.terms()) {
        t.emplace(k, (k % 2 == 0) ? c : Rational(-c));
    }
    return TauScalar(std::move(t));
}

inline std::string to_string(const TauScalar& s)
{
    if (s.is_zero()) {
        return "0";
    }
    std::string out;
    for (auto& [k, c] : s.terms()) {
        if (!out.empty()) {
            out += " + ";
        }
        out += "(" + to_string(c) + ")";
        if (k != 0) {
            out += "t^" + std::to_string(k);
        }
    }
    return out;
}

namespace detail {

// Dense polynomials over Q, lowest degree first, no trailing zeros.
using DensePoly = std::vector<Rational>;

inline void trim(DensePoly& p)
{
    while (!p.empty() && p.back() == 0) {
        p.pop_back();
    }
}

inline DensePoly to_dense(const TauScalar& s)
{
    DensePoly p;
    int lo = s.min_degree();
    for (auto& [k, c] : s.terms()) {
        std::size_t idx = static_cast<std::size_t>(k - lo);
        if (p.size() <= idx) {
            p.resize(idx + 1, Rational(0));
        }
        p[idx] = c;
    }
    return p;
}

inline TauScalar from_dense(const DensePoly& p, int shift = 0)
{
    TauScalar::Terms t;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] != 0) {
            t.emplace(static_cast<int>(i) + shift, p[i]);
        }
    }
    return TauScalar(std::move(t));
}

inline std::pair<DensePoly, DensePoly> divmod(DensePoly a, const DensePoly& b)
{
    DensePoly q;
    trim(a);
    if (a.size() < b.size()) {
        return {q, a};
    }
    q.assign(a.size() - b.size() + 1, Rational(0));
    const Rational& lead = b.back();
    for (std::size_t s = a.size() - b.size() + 1; s-- > 0;) {
        Rational c = a[s + b.size() - 1] / lead;
        q[s] = c;
        if (c != 0) {
            for (std::size_t j = 0; j < b.size(); ++j) {
                a[s + j] -= c * b[j];
            }
        }
    }
    trim(a);
    trim(q);
    return {q, a};
}

inline DensePoly monic(DensePoly p)
{
    trim(p);
    if (!p.empty()) {
        Rational lead = p.back();
        for (auto& c : p) {
            c /= lead;
        }
    }
    return p;
}

inline DensePoly poly_gcd(DensePoly a, DensePoly b)
{
    trim(a);
    trim(b);
    while (!b.empty()) {
        auto r = divmod(a, b).second;
        a = std::move(b);
        b = std::move(r);
    }
    return monic(a);
}

} // namespace detail

// Element of the fraction field Q(tau). The canonical form has a denominator
// with nonzero constant term and leading coefficient 1, coprime to the numerator.
class TauFraction {
public:
    TauFraction() : den_(1) {}
    TauFraction(const TauScalar& s) : num_(s), den_(1) {}
    TauFraction(const Rational& c) : num_(c), den_(1) {}
    TauFraction(long c) : num_(c), den_(1) {}
    TauFraction(const TauScalar& num, const TauScalar& den) : num_(num), den_(den) { canonicalize(); }

    const TauScalar& numerator() const { return num_; }
    const TauScalar& denominator() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }
    bool is_laurent() const { return den_ == TauScalar(1); }
    bool is_rational() const { return is_laurent() && num_.is_constant(); }
    Rational rational_value() const { return num_.coeff(0); }

    TauFraction inverse() const
    {
        if (is_zero()) {
            throw domain_error("division by zero in Q(tau)");
        }
        return TauFraction(den_, num_);
    }

    friend TauFraction operator+(const TauFraction& a, const TauFraction& b)
    {
        if (a.is_laurent() && b.is_laurent()) {
            return TauFraction(a.num_ + b.num_);
        }
        if (a.den_ == b.den_) {
            return TauFraction(a.num_ + b.num_, a.den_);
        }
        return TauFraction(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend TauFraction operator-(const TauFraction& a)
    {
        TauFraction r = a;
        r.num_ = -r.num_;
        return r;
    }
    friend TauFraction operator-(const TauFraction& a, const TauFraction& b) { return a + (-b); }
    friend TauFraction operator*(const TauFraction& a, const TauFraction& b)
    {
        if (a.is_laurent() && b.is_laurent()) {
            return TauFraction(a.num_ * b.num_);
        }
        return TauFraction(a.num_ * b.num_, a.den_ * b.den_);
    }
    friend TauFraction operator/(const TauFraction& a, const TauFraction& b) { return a * b.inverse(); }
    TauFraction& operator+=(const TauFraction& o) { return *this = *this + o; }
    TauFraction& operator-=(const TauFraction& o) { return *this = *this - o; }
    TauFraction& operator*=(const TauFraction& o) { return *this = *this * o; }
    TauFraction& operator/=(const TauFraction& o) { return *this = *this / o; }

    friend bool operator==(const TauFraction& a, const TauFraction& b)
    {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }

private:
    void canonicalize()
    {
        if (den_.is_zero()) {
            throw domain_error("zero denominator in Q(tau)");
        }
        if (num_.is_zero()) {
            den_ = TauScalar(1);
            return;
        }
        int a = den_.min_degree();
        num_ = num_.shifted(-a);
        den_ = den_.shifted(-a);
        if (den_.terms().size() == 1) {
            num_ = num_ * (Rational(1) / den_.coeff(0));
            den_ = TauScalar(1);
            return;
        }
        int b = num_.min_degree();
        auto np = detail::to_dense(num_);
        auto dp = detail::to_dense(den_);
        auto g = detail::poly_gcd(np, dp);
        if (g.size() > 1) {
            np = detail::divmod(np, g).first;
            dp = detail::divmod(dp, g).first;
        }
        Rational lead = dp.back();
        for (auto& c : np) {
            c /= lead;
        }
        for (auto& c : dp) {
            c /= lead;
        }
        num_ = detail::from_dense(np, b);
        den_ = detail::from_dense(dp);
    }

    TauScalar num_;
    TauScalar den_;
};

inline TauFraction tau_conjugate(const TauFraction& f)
{
    return TauFraction(tau_conjugate(f.numerator()), tau_conjugate(f.denominator()));
}

inline std::string to_string(const TauFraction& f)
{
    if (f.is_laurent()) {
        return to_string(f.numerator());
    }
    return "[" + to_string(f.numerator()) + "] / [" + to_string(f.denominator()) + "]";
}

// Exp(log) with log taken modulo tau*Z; the tau^1 coefficient is kept in [0,1).
class ExpValue {
public:
    ExpValue() = default;
    explicit ExpValue(const TauScalar& log) : log_(reduce(log)) {}

    const TauScalar& log() const { return log_; }

    friend ExpValue operator*(const ExpValue& a, const ExpValue& b) { return ExpValue(a.log_ + b.log_); }
    ExpValue inverse() const { return ExpValue(-log_); }
    ExpValue pow(const Integer& k) const { return ExpValue(log_ * Rational(k)); }
    bool is_identity() const { return log_.is_zero(); }

    friend bool operator==(const ExpValue& a, const ExpValue& b) { return a.log_ == b.log_; }
    friend bool operator<(const ExpValue& a, const ExpValue& b) { return a.log_ < b.log_; }

private:
    static TauScalar reduce(const TauScalar& s)
    {
        Rational c = s.coeff(1);
        if (c == 0) {
            return s;
        }
        Integer f = floor_of(c);
        if (f == 0) {
            return s;
        }
        return s - TauScalar::tau_power(1, Rational(f));
    }

    TauScalar log_;
};

inline bool exp_equal(const ExpValue& a, const ExpValue& b) { return a == b; }

inline std::optional<Integer> exp_torsion_order(const ExpValue& a)
{
    const auto& t = a.log().terms();
    if (t.empty()) {
        return Integer(1);
    }
    if (t.size() != 1 || t.begin()->first != 1) {
        return std::nullopt;
    }
    return t.begin()->second.get_den();
}

inline std::string to_string(const ExpValue& e) { return "Exp(" + to_string(e.log()) + ")"; }

} // namespace shodge
