#pragma once

#include "exterior.hpp"
#include "tau.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace shodge {

// Deterministic generator of small exact inputs.
class Sampler {
public:
    explicit Sampler(std::uint64_t seed) : rng_(seed) {}

    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
    bool coin() { return integer(0, 1) == 1; }

    Rational rational(int range = 5, int max_den = 4)
    {
        return make_rational(integer(-range, range), integer(1, max_den));
    }
    Rational nonzero_rational(int range = 5, int max_den = 4)
    {
        Rational r;
        do {
            r = rational(range, max_den);
        } while (r == 0);
        return r;
    }

    // Laurent polynomial with up to `terms` terms in degrees [lo, hi].
    TauScalar tau_scalar(int terms = 3, int lo = -1, int hi = 2)
    {
        TauScalar s;
        int k = integer(0, terms);
        for (int i = 0; i < k; ++i) {
            s += TauScalar::tau_power(integer(lo, hi), rational());
        }
        return s;
    }
    TauScalar nonzero_tau_scalar(int terms = 3, int lo = -1, int hi = 2)
    {
        TauScalar s;
        do {
            s = tau_scalar(terms, lo, hi);
        } while (s.is_zero());
        return s;
    }
    TauFraction tau_fraction()
    {
        TauScalar num = tau_scalar();
        TauScalar den = coin() ? TauScalar(1) : nonzero_tau_scalar(2, 0, 2);
        return TauFraction(num, den);
    }
    TauFraction nonzero_tau_fraction()
    {
        TauFraction f;
        do {
            f = tau_fraction();
        } while (f.is_zero());
        return f;
    }

    std::vector<int> int_vector(int n, int lo, int hi)
    {
        std::vector<int> v(static_cast<std::size_t>(n));
        for (auto& x : v) {
            x = integer(lo, hi);
        }
        return v;
    }

    std::mt19937_64& engine() { return rng_; }

private:
    std::mt19937_64 rng_;
};


inline LogForm random_form(Sampler& g, TorusContext ctx, int max_terms = 5, int mono_range = 2, bool invariant = false)
{
    LogForm f(ctx);
    int k = g.integer(1, max_terms);
    for (int i = 0; i < k; ++i) {
        std::vector<int> m = invariant ? std::vector<int>(static_cast<std::size_t>(ctx.n), 0)
                                       : g.int_vector(ctx.n, -mono_range, mono_range);
        IndexSet I = static_cast<IndexSet>(g.integer(0, static_cast<int>(ctx.top())));
        f.add(m, I, TauFraction(g.tau_scalar(2)));
    }
    return f;
}

inline PeriodicForm random_periodic(Sampler& g, TorusContext ctx, int max_terms = 5, bool invariant = false)
{
    PeriodicForm w(ctx);
    int levels = g.integer(1, 3);
    for (int i = 0; i < levels; ++i) {
        w.add(g.integer(-1, 2), random_form(g, ctx, max_terms, 2, invariant));
    }
    return w;
}

inline Polyvector random_bivector(Sampler& g, TorusContext ctx)
{
    Polyvector s(ctx);
    for (int i = 0; i < ctx.n; ++i) {
        for (int j = i + 1; j < ctx.n; ++j) {
            s.add(index_set({i, j}), TauFraction(g.tau_scalar(2)));
        }
    }
    return s;
}

} // namespace shodge
