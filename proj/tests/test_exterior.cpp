#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "random_inputs.hpp"

#include <shodge/exterior.hpp>

#include <algorithm>

using namespace shodge;
using namespace shodge::testing;

namespace {

const TorusContext T2{2}, T3{3}, T4{4};

IndexSet I(std::initializer_list<int> one_based)
{
    IndexSet s = 0;
    for (int i : one_based) {
        s |= IndexSet{1} << (i - 1);
    }
    return s;
}

TauFraction lam(const char* c) { return TauFraction(parse_rational(c)); }

// Sign of the permutation sorting `seq`, or 0 on repeats.
int perm_sign(std::vector<int> seq)
{
    int sign = 1;
    for (std::size_t i = 0; i < seq.size(); ++i) {
        for (std::size_t j = i + 1; j < seq.size(); ++j) {
            if (seq[i] == seq[j]) {
                return 0;
            }
            if (seq[i] > seq[j]) {
                sign = -sign;
            }
        }
    }
    return sign;
}

// dlog_I as an alternating multilinear function evaluated on frame vectors.
int evaluate(IndexSet form, const std::vector<int>& args)
{
    auto sorted = args;
    std::sort(sorted.begin(), sorted.end());
    if (index_set(sorted) != form || static_cast<int>(sorted.size()) != degree_of(form)) {
        return 0;
    }
    return perm_sign(args);
}

// Oracle: coefficient of dlog_K in iota_{e_J} dlog_I, inserting e_{j_m}, ..., e_{j_1} in that order.
int contraction_oracle(IndexSet J, IndexSet form, IndexSet K)
{
    auto js = members(J);
    std::vector<int> args(js.rbegin(), js.rend());
    for (int k : members(K)) {
        args.push_back(k);
    }
    return evaluate(form, args);
}

} // namespace

TEST_CASE("wedge examples")
{
    CHECK(wedge(LogForm::dlog(T2, I({1})), LogForm::dlog(T2, I({2}))) == LogForm::dlog(T2, I({1, 2})));
    CHECK(wedge(LogForm::dlog(T2, I({2})), LogForm::dlog(T2, I({1}))) == LogForm::dlog(T2, I({1, 2}), -1));
    auto a = LogForm::term(T2, {1, 0}, I({1}), 1);
    auto b = LogForm::term(T2, {2, 0}, I({2}), 1);
    CHECK(wedge(a, b) == LogForm::term(T2, {3, 0}, I({1, 2}), 1));
    CHECK(wedge(LogForm::dlog(T2, I({1})), LogForm::dlog(T2, I({1}))).is_zero());
}

TEST_CASE("wedge is graded commutative and associative")
{
    Gen g(21);
    for (int trial = 0; trial < 60; ++trial) {
        TorusContext ctx(g.integer(1, 3));
        auto a = random_form(g, ctx, 3), b = random_form(g, ctx, 3), c = random_form(g, ctx, 3);
        CHECK(wedge(wedge(a, b), c) == wedge(a, wedge(b, c)));
        // Check the Koszul sign on homogeneous pieces.
        for (auto& [ka, x] : a.terms()) {
            for (auto& [kb, y] : b.terms()) {
                auto p = LogForm::term(ctx, ka.monomial, ka.indices, x);
                auto q = LogForm::term(ctx, kb.monomial, kb.indices, y);
                int s = (degree_of(ka.indices) * degree_of(kb.indices)) % 2 ? -1 : 1;
                CHECK(wedge(p, q) == TauFraction(s) * wedge(q, p));
            }
        }
    }
}

TEST_CASE("exterior_d examples and d^2 = 0")
{
    CHECK(exterior_d(LogForm::term(T2, {1, 0}, 0, 1)) == LogForm::term(T2, {1, 0}, I({1}), 1));
    CHECK(exterior_d(LogForm::dlog(T2, I({1}))).is_zero());
    // d(x1 x2) ^ dlog x2 = x1 x2 (dlog x1 + dlog x2) ^ dlog x2
    CHECK(exterior_d(LogForm::term(T2, {1, 1}, I({2}), 1)) == LogForm::term(T2, {1, 1}, I({1, 2}), 1));

    Gen g(22);
    for (int trial = 0; trial < 100; ++trial) {
        TorusContext ctx(g.integer(1, 4));
        auto a = random_form(g, ctx);
        CHECK(exterior_d(exterior_d(a)).is_zero());
        auto b = random_form(g, ctx);
        // Leibniz rule for the graded derivation d.
        LogForm expected = wedge(exterior_d(a), b);
        for (auto& [ka, x] : a.terms()) {
            auto p = LogForm::term(ctx, ka.monomial, ka.indices, x);
            int s = degree_of(ka.indices) % 2 ? -1 : 1;
            expected += TauFraction(s) * wedge(p, exterior_d(b));
        }
        CHECK(exterior_d(wedge(a, b)) == expected);
    }
}

TEST_CASE("contract examples")
{
    // Anchor: iota_{e1 ^ e2}(dlog x2 ^ dlog x1) = 1.
    auto e12 = Polyvector::frame(T2, I({1, 2}));
    CHECK(contract(e12, wedge(LogForm::dlog(T2, I({2})), LogForm::dlog(T2, I({1})))) == LogForm::dlog(T2, 0));
    CHECK(contract(Polyvector::frame(T2, I({1})), LogForm::dlog(T2, I({1, 2}))) == LogForm::dlog(T2, I({2})));
    CHECK(contract(e12, LogForm::dlog(T2, I({1, 2}))) == LogForm::dlog(T2, 0, -1));
    CHECK(contract(Polyvector::frame(T2, I({1})), LogForm::dlog(T2, I({2}))).is_zero());
}

TEST_CASE("contract agrees with multilinear evaluation")
{
    for (int n = 1; n <= 4; ++n) {
        TorusContext ctx(n);
        for (IndexSet J = 0; J <= ctx.top(); ++J) {
            auto p = Polyvector::frame(ctx, J);
            for (IndexSet F = 0; F <= ctx.top(); ++F) {
                auto r = contract(p, LogForm::dlog(ctx, F));
                for (IndexSet K = 0; K <= ctx.top(); ++K) {
                    CHECK(r.invariant_coeff(K) == TauFraction(contraction_oracle(J, F, K)));
                }
            }
        }
    }
}

TEST_CASE("contraction composes as iota_{xi ^ eta} = iota_xi iota_eta")
{
    Gen g(23);
    for (int trial = 0; trial < 60; ++trial) {
        TorusContext ctx(g.integer(2, 4));
        Polyvector a(ctx), b(ctx);
        a.add(static_cast<IndexSet>(g.integer(0, static_cast<int>(ctx.top()))), TauFraction(g.tau_scalar()));
        b.add(static_cast<IndexSet>(g.integer(0, static_cast<int>(ctx.top()))), TauFraction(g.tau_scalar()));
        auto w = random_form(g, ctx);
        CHECK(contract(wedge(a, b), w) == contract(a, contract(b, w)));
    }
}

TEST_CASE("poisson_delta examples")
{
    TauFraction l = lam("3/2") + TauFraction(TauScalar::tau());
    auto sigma = Polyvector::frame(T2, I({1, 2}), l);
    CHECK(poisson_delta(sigma, LogForm::term(T2, {2, -1}, 0, 5)).is_zero());
    for (IndexSet F = 0; F < 4; ++F) {
        CHECK(poisson_delta(sigma, LogForm::dlog(T2, F)).is_zero());
    }
    // iota_sigma(x1 dlog x1 ^ dlog x2) = -l x1 and d of it is -l x1 dlog x1; the other term vanishes.
    CHECK(poisson_delta(sigma, LogForm::term(T2, {1, 0}, I({1, 2}), 1)) == LogForm::term(T2, {1, 0}, I({1}), -l));
    CHECK_THROWS_AS(poisson_delta(Polyvector::frame(T2, I({1})), LogForm::dlog(T2, 0)), domain_error);
}

TEST_CASE("delta_sigma squares to zero and anticommutes with d")
{
    Gen g(24);
    for (int trial = 0; trial < 80; ++trial) {
        TorusContext ctx(g.integer(2, 4));
        auto sigma = random_bivector(g, ctx);
        auto a = random_form(g, ctx);
        CHECK(poisson_delta(sigma, poisson_delta(sigma, a)).is_zero());
        CHECK((exterior_d(poisson_delta(sigma, a)) + poisson_delta(sigma, exterior_d(a))).is_zero());
    }
}

TEST_CASE("contraction maps invariant forms to invariant forms")
{
    Gen g(25);
    for (int trial = 0; trial < 50; ++trial) {
        TorusContext ctx(g.integer(2, 4));
        auto w = random_form(g, ctx, 5, 2, true);
        CHECK(contract(random_bivector(g, ctx), w).is_invariant());
    }
}

TEST_CASE("transport_operator examples")
{
    TauFraction l = lam("-2/7") + TauFraction(TauScalar::tau_power(2, 3));
    auto sigma = Polyvector::frame(T2, I({1, 2}), l);
    auto one = PeriodicForm::at_level(0, LogForm::dlog(T2, 0));
    CHECK(transport_operator(sigma, one) == one);

    auto w = PeriodicForm::at_level(0, wedge(LogForm::dlog(T2, I({2})), LogForm::dlog(T2, I({1}))));
    CHECK(transport_operator(sigma, w) == w + PeriodicForm::at_level(-1, LogForm::dlog(T2, 0, l)));
}

TEST_CASE("n=4 transport of the top form")
{
    Gen g(26);
    auto sigma = random_bivector(g, T4);
    auto top = PeriodicForm::at_level(0, LogForm::dlog(T4, T4.top()));
    auto result = transport_operator(sigma, top);

    // u^-1 term: one contraction per pair, C(4,2) terms.
    auto first = result.level(-1);
    CHECK(first.terms().size() == sigma.terms().size());
    for (auto& [J, c] : sigma.terms()) {
        IndexSet rest = T4.top() & ~J;
        TauFraction expected = TauFraction(contraction_oracle(J, T4.top(), rest)) * c;
        CHECK(first.invariant_coeff(rest) == expected);
        CHECK((expected == c || expected == -c));
    }

    // u^-2 term: (1/2) sum over ordered pairs of bivector terms, brute force.
    TauFraction expected = 0;
    for (auto& [J, a] : sigma.terms()) {
        for (auto& [K, b] : sigma.terms()) {
            if (J & K) {
                continue;
            }
            auto js = members(J), ks = members(K);
            // iota_J iota_K top = top(e_{k2}, e_{k1}, e_{j2}, e_{j1})
            expected += TauFraction(evaluate(T4.top(), {ks[1], ks[0], js[1], js[0]})) * a * b;
        }
    }
    expected = expected / TauFraction(2);
    CHECK(result.level(-2).invariant_coeff(0) == expected);
    CHECK(result.level(-2).terms().size() <= 1);
}

TEST_CASE("exp-conjugation identity on random inputs")
{
    Gen g(27);
    for (int trial = 0; trial < 60; ++trial) {
        TorusContext ctx(g.integer(1, 3));
        Polyvector sigma = ctx.n >= 2 ? random_bivector(g, ctx) : Polyvector(ctx);
        auto w = random_periodic(g, ctx, 5);
        Polyvector neg = TauFraction(-1) * sigma;
        auto lhs = transport_operator(neg, exterior_d(transport_operator(sigma, w)).u_shifted(1));
        auto rhs = poisson_delta(sigma, w) + exterior_d(w).u_shifted(1);
        CHECK(lhs == rhs);
    }
}

TEST_CASE("mukai_involution examples")
{
    auto one = LogForm::dlog(T2, 0);
    CHECK(mukai_involution(PeriodicForm::at_level(0, one)) == PeriodicForm::at_level(0, one));
    auto top = LogForm::dlog(T2, I({1, 2}));
    CHECK(mukai_involution(PeriodicForm::at_level(0, top)) == PeriodicForm::at_level(0, top));
    CHECK(mukai_involution(PeriodicForm::at_level(1, one)) == PeriodicForm::at_level(1, -one));
    Gen g(28);
    for (int trial = 0; trial < 50; ++trial) {
        auto w = random_periodic(g, TorusContext(g.integer(1, 4)));
        CHECK(mukai_involution(mukai_involution(w)) == w);
    }
}

TEST_CASE("integration_pairing examples")
{
    auto one = PeriodicForm::at_level(0, LogForm::dlog(T2, 0));
    auto top = PeriodicForm::at_level(0, LogForm::dlog(T2, I({1, 2})));
    CHECK(integration_pairing(one, top) == USeries{{0, TauFraction(TauScalar::tau_power(2))}});
    auto d1 = PeriodicForm::at_level(0, LogForm::dlog(T2, I({1})));
    CHECK(integration_pairing(d1, d1).empty());
    CHECK_THROWS_AS(integration_pairing(PeriodicForm::at_level(0, LogForm::term(T2, {1, 0}, 0, 1)), top),
                    domain_error);

    Gen g(29);
    auto sigma = random_bivector(g, T2);
    auto r = integration_pairing(transport_operator(sigma, top), transport_operator(sigma, one));
    for (auto& [k, c] : r) {
        CHECK(k >= 0);
    }
    CHECK(r == USeries{{0, TauFraction(TauScalar::tau_power(2))}});
}

TEST_CASE("filtered pairing lands in u^(p+q) C[[u]]")
{
    Gen g(30);
    for (int trial = 0; trial < 80; ++trial) {
        TorusContext ctx(g.integer(1, 3));
        Polyvector sigma = ctx.n >= 2 ? random_bivector(g, ctx) : Polyvector(ctx);
        int p = g.integer(-1, 2), q = g.integer(-1, 2);
        auto v0 = random_periodic(g, ctx, 4, true);
        auto w0 = random_periodic(g, ctx, 4, true);
        // Keep levels >= p (resp. q): elements of the u-adic filtration.
        PeriodicForm v(ctx), w(ctx);
        for (auto& [j, f] : v0.levels()) {
            v.add(std::max(j, p), f);
        }
        for (auto& [j, f] : w0.levels()) {
            w.add(std::max(j, q), f);
        }
        auto r = integration_pairing(transport_operator(sigma, v), transport_operator(sigma, w));
        for (auto& [k, c] : r) {
            CHECK(k >= p + q);
        }
        CHECK(r == integration_pairing(v, w));
    }
}
