#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <string_view>

namespace shodge {

using Integer = mpz_class;
using Rational = mpq_class;

// Raised when an operation is asked to leave its mathematical domain.
class domain_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline Rational make_rational(const Integer& num, const Integer& den = 1)
{
    if (den == 0) {
        throw domain_error("rational with zero denominator");
    }
    Rational r(num, den);
    r.canonicalize();
    return r;
}

// Canonical text form "p/q" with q > 0, also for integers.
inline std::string to_string(const Rational& r)
{
    return r.get_num().get_str() + "/" + r.get_den().get_str();
}

inline std::string to_string(const Integer& z) { return z.get_str(); }

inline bool parse_integer(std::string_view s, Integer& out)
{
    if (s.empty()) {
        return false;
    }
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) {
        return false;
    }
    for (std::size_t k = i; k < s.size(); ++k) {
        if (s[k] < '0' || s[k] > '9') {
            return false;
        }
    }
    std::string digits(s[0] == '+' ? s.substr(1) : s);
    return out.set_str(digits, 10) == 0;
}

// Accepts "p/q" or "p"; throws std::invalid_argument on anything else.
inline Rational parse_rational(std::string_view s)
{
    Integer num, den = 1;
    auto slash = s.find('/');
    if (slash == std::string_view::npos) {
        if (!parse_integer(s, num)) {
            throw std::invalid_argument("not a rational: '" + std::string(s) + "'");
        }
    } else {
        if (!parse_integer(s.substr(0, slash), num) || !parse_integer(s.substr(slash + 1), den) || den == 0) {
            throw std::invalid_argument("not a rational: '" + std::string(s) + "'");
        }
    }
    return make_rational(num, den);
}

inline Integer floor_of(const Rational& r)
{
    Integer q;
    mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
    return q;
}

inline bool is_integer(const Rational& r) { return r.get_den() == 1; }

inline Integer gcd(const Integer& a, const Integer& b)
{
    Integer g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

inline Integer lcm(const Integer& a, const Integer& b)
{
    Integer l;
    mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return l;
}

inline Rational factorial_rational(unsigned m)
{
    Integer f;
    mpz_fac_ui(f.get_mpz_t(), m);
    return Rational(f);
}

} // namespace shodge
