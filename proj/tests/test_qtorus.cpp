#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "random_inputs.hpp"

#include <shodge/qtorus.hpp>

#include <algorithm>

using namespace shodge;
using namespace shodge::testing;

namespace {

QTorusParams random_params(Gen& g, int n)
{
    QTorusParams p(n);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            p.log_lift(i, j) = g.tau_scalar(2, 0, 2);
        }
    }
    return p;
}

Exponent random_exponent(Gen& g, int n, long range = 2)
{
    Exponent k;
    for (int i = 0; i < n; ++i) {
        k.push_back(static_cast<long>(g.integer(-range, range)));
    }
    return k;
}

QTorusElement random_element(Gen& g, const QTorusParams& p, int terms = 3)
{
    QTorusElement a(p);
    for (int t = 0; t < terms; ++t) {
        a.add(random_exponent(g, p.n), QCoeff(g.tau_fraction()));
    }
    return a;
}

// Oracle: write both monomials as words in x_i^{+-1}, bubble-sort by index using x_i x_j = q_ij x_j x_i.
QTorusElement word_product(const QTorusParams& p, const Exponent& k, const Exponent& m)
{
    std::vector<std::pair<int, int>> word;
    for (const Exponent* e : {&k, &m}) {
        for (int i = 0; i < p.n; ++i) {
            long c = (*e)[static_cast<std::size_t>(i)];
            for (long t = 0; t < std::abs(c); ++t) {
                word.emplace_back(i, c > 0 ? 1 : -1);
            }
        }
    }
    ExpValue factor;
    for (std::size_t pass = 0; pass < word.size(); ++pass) {
        for (std::size_t s = 0; s + 1 < word.size(); ++s) {
            auto [i, a] = word[s];
            auto [j, b] = word[s + 1];
            if (i > j) {
                factor = factor * p.q(i, j).pow(Integer(a * b));
                std::swap(word[s], word[s + 1]);
            }
        }
    }
    Exponent sum(static_cast<std::size_t>(p.n), 0);
    for (auto [i, a] : word) {
        sum[static_cast<std::size_t>(i)] += a;
    }
    return QTorusElement::monomial(p, sum, QCoeff::exp(factor));
}

Chain random_chain(Gen& g, const QTorusParams& p, int degree, int terms = 2, bool invariant = false)
{
    Chain c(p, degree);
    for (int t = 0; t < terms; ++t) {
        Chain::Key key;
        Exponent sum(static_cast<std::size_t>(p.n), 0);
        for (int s = 0; s <= degree; ++s) {
            key.push_back(random_exponent(g, p.n));
            sum = exponent_sum(sum, key.back());
        }
        if (invariant) {
            for (int i = 0; i < p.n; ++i) {
                key[0][static_cast<std::size_t>(i)] -= sum[static_cast<std::size_t>(i)];
            }
        }
        c.add(key, QCoeff(g.nonzero_tau_fraction()));
    }
    return c;
}

QTorusElement x(const QTorusParams& p, std::initializer_list<long> k) { return QTorusElement::monomial(p, Exponent(k)); }

QTorusParams two(const TauScalar& l)
{
    QTorusParams p(2);
    p.log_lift(0, 1) = l;
    return p;
}

} // namespace

TEST_CASE("quantum torus multiplication")
{
    TauScalar l = TauScalar(Rational(5, 3)) + TauScalar::tau_power(2);
    auto p = two(l);
    auto x1 = QTorusElement::generator(p, 0), x2 = QTorusElement::generator(p, 1);
    CHECK(qt_mul(x1, x2) == x(p, {1, 1}));
    CHECK(qt_mul(x2, x1) == QCoeff::exp(ExpValue(-l)) * x(p, {1, 1}));
    CHECK(qt_mul(x1, x2) == QCoeff::exp(p.q(0, 1)) * qt_mul(x2, x1));
    CHECK(qt_mul(x(p, {2, 1}), x(p, {1, 3})) == QCoeff::exp(ExpValue(TauScalar(1) * -l)) * x(p, {3, 4}));

    auto flat = QTorusParams(2);
    CHECK(qt_mul(x(flat, {2, -1}), x(flat, {-1, 4})) == x(flat, {1, 3}));

    Gen g(3);
    for (int n = 1; n <= 4; ++n) {
        auto q = random_params(g, n);
        for (int trial = 0; trial < 15; ++trial) {
            auto k = random_exponent(g, n), m = random_exponent(g, n);
            CHECK(qt_mul(QTorusElement::monomial(q, k), QTorusElement::monomial(q, m)) == word_product(q, k, m));
            auto a = random_element(g, q), b = random_element(g, q), c = random_element(g, q);
            CHECK(qt_mul(qt_mul(a, b), c) == qt_mul(a, qt_mul(b, c)));
            auto one = QTorusElement::monomial(q, Exponent(static_cast<std::size_t>(n), 0));
            CHECK(qt_mul(one, a) == a);
            CHECK(qt_mul(a, one) == a);
        }
    }
    CHECK_THROWS_AS(qt_mul(x1, QTorusElement::generator(two(TauScalar(1)), 0)), domain_error);
}

TEST_CASE("derivations and trace")
{
    Gen g(5);
    auto p = random_params(g, 3);
    auto x1 = QTorusElement::generator(p, 0);
    CHECK(qt_derivation(0, x1) == x1);
    CHECK(qt_derivation(0, QTorusElement::generator(p, 1, 5)).is_zero());
    CHECK_THROWS_AS(qt_derivation(3, x1), domain_error);
    CHECK(qt_trace(x(p, {0, 0, 0})) == QCoeff(1));
    CHECK(qt_trace(x1).is_zero());
    CHECK(qt_trace(qt_mul(x1, QTorusElement::generator(p, 0, -1))) == QCoeff(1));
    for (int trial = 0; trial < 20; ++trial) {
        auto a = random_element(g, p), b = random_element(g, p);
        for (int i = 0; i < 3; ++i) {
            CHECK(qt_derivation(i, qt_mul(a, b)) == qt_mul(qt_derivation(i, a), b) + qt_mul(a, qt_derivation(i, b)));
        }
        CHECK(qt_trace(qt_mul(a, b)) == qt_trace(qt_mul(b, a)));
        CHECK(qt_trace(qt_mul(a, b) - qt_mul(b, a)).is_zero());
    }
}

TEST_CASE("Hochschild and Connes operators")
{
    TauScalar l = TauScalar(Rational(1, 2));
    auto p = two(l);
    auto x1 = QTorusElement::generator(p, 0), x2 = QTorusElement::generator(p, 1);
    auto bx = hochschild_b(Chain::elementary({x1, x2}));
    Chain expect(p, 0);
    expect.add({{1, 1}}, QCoeff(1) - QCoeff::exp(ExpValue(-l)));
    CHECK(bx == expect);
    CHECK(hochschild_b(Chain::elementary({x1, x2})).is_zero() == false);
    CHECK(hochschild_b(Chain::elementary({QTorusElement::generator(QTorusParams(2), 0),
                                          QTorusElement::generator(QTorusParams(2), 1)}))
              .is_zero());
    auto one = x(p, {0, 0});
    auto B1 = connes_B(Chain::elementary({one}));
    CHECK(B1.is_zero()); // 1 (x) 1 is degenerate in the normalized complex
    auto Bx = connes_B(Chain::elementary({x1}));
    Chain e1(p, 1);
    e1.add({{0, 0}, {1, 0}}, 1);
    CHECK(Bx == e1);

    Gen g(7);
    for (int trial = 0; trial < 60; ++trial) {
        int n = static_cast<int>(g.integer(1, 3));
        auto q = random_params(g, n);
        int k = static_cast<int>(g.integer(0, 3));
        auto c = random_chain(g, q, k);
        CHECK(hochschild_b(hochschild_b(c)).is_zero());
        CHECK(connes_B(connes_B(c)).is_zero());
        auto anti = hochschild_b(connes_B(c));
        if (k > 0) {
            anti = anti + connes_B(hochschild_b(c));
        }
        CHECK(anti.is_zero());
    }
}

TEST_CASE("HKR pairing values")
{
    TauScalar l = TauScalar(Rational(3, 4));
    auto p = two(l);
    TorusContext ctx{2};
    auto e1 = Polyvector::frame(ctx, index_set({0}));
    auto e2 = Polyvector::frame(ctx, index_set({1}));
    CHECK(hkr_pairing(e1, Chain::elementary({x(p, {-1, 0}), x(p, {1, 0})})) == QCoeff(1));
    CHECK(hkr_pairing(e1, Chain::elementary({x(p, {0, 0}), x(p, {0, 1})})).is_zero());
    auto chain = Chain::elementary({x(p, {-1, -1}), x(p, {1, 0}), x(p, {0, 1})});
    auto e12 = wedge(e1, e2), e21 = wedge(e2, e1);
    CHECK(hkr_pairing(e12, chain) == QCoeff::exp(ExpValue(l), TauFraction(Rational(1, 2))));
    CHECK(hkr_pairing(e21, chain) == -hkr_pairing(e12, chain));
    auto swapped = Chain::elementary({x(p, {-1, -1}), x(p, {0, 1}), x(p, {1, 0})});
    CHECK(hkr_pairing(e12, swapped) == QCoeff(TauFraction(Rational(-1, 2))));
    CHECK_THROWS_AS(hkr_pairing(e1, chain), domain_error);
}

TEST_CASE("HKR pairing descends to Hochschild homology on invariant chains")
{
    Gen g(11);
    int nonzero = 0;
    for (int trial = 0; trial < 60; ++trial) {
        int n = static_cast<int>(g.integer(1, 4));
        auto q = random_params(g, n);
        int k = static_cast<int>(g.integer(0, std::min(n, 3)));
        auto c = random_chain(g, q, k + 1, 3, true);
        Polyvector xi(TorusContext{n});
        for (IndexSet J = 0; J <= TorusContext(n).top(); ++J) {
            if (degree_of(J) == k) {
                xi.add(J, g.tau_fraction());
            }
        }
        CHECK(hkr_pairing(xi, hochschild_b(c)).is_zero());
        nonzero += hkr_pairing(xi, random_chain(g, q, k, 3, true)).is_zero() ? 0 : 1;
    }
    CHECK(nonzero > 10);
}

TEST_CASE("at q = 1 the pairing is the commutative HKR map")
{
    Gen g(13);
    for (int trial = 0; trial < 60; ++trial) {
        int n = static_cast<int>(g.integer(1, 3));
        int k = static_cast<int>(g.integer(0, n));
        QTorusParams p(n);
        TorusContext ctx{n};
        auto c = random_chain(g, p, k, 1, g.coin());
        if (c.is_zero()) {
            continue;
        }
        auto& [key, coef] = *c.terms().begin();
        // a_0 da_1 ^ ... ^ da_k as a log form.
        Exponent sum = key[0];
        LogForm dforms = LogForm::term(ctx, std::vector<int>(static_cast<std::size_t>(n), 0), 0, 1);
        for (int t = 1; t <= k; ++t) {
            sum = exponent_sum(sum, key[t]);
            LogForm da(ctx);
            for (int i = 0; i < n; ++i) {
                if (key[t][static_cast<std::size_t>(i)] != 0) {
                    da += LogForm::dlog(ctx, index_set({i}), TauFraction(key[t][static_cast<std::size_t>(i)]));
                }
            }
            dforms = wedge(dforms, da);
        }
        for (IndexSet J = 0; J <= ctx.top(); ++J) {
            if (degree_of(J) != k) {
                continue;
            }
            auto xi = Polyvector::frame(ctx, J);
            TauFraction expected;
            if (is_unit_exponent(sum)) {
                TauFraction sign = (k * (k - 1) / 2) % 2 ? -1 : 1;
                expected = sign * contract(xi, dforms).invariant_coeff(0) / TauFraction(factorial_rational(k));
            }
            Chain single(p, k);
            single.add(key, 1);
            CHECK(hkr_pairing(xi, single) == QCoeff(expected));
        }
    }
}

TEST_CASE("centre")
{
    for (int n = 1; n <= 3; ++n) {
        QTorusParams one(n);
        Gen g(17);
        CHECK(centre_membership(random_exponent(g, n), one));
        CHECK(centre_generators_torsion(one) == IntMatrix::identity(static_cast<std::size_t>(n)));
    }
    for (int j = 2; j <= 6; ++j) {
        auto p = two(TauScalar::tau_power(1, Rational(1, j)));
        auto gens = centre_generators_torsion(p);
        CHECK(abs(determinant(gens)) == Integer(j * j));
        CHECK(centre_membership({j, 0}, p));
        CHECK(centre_membership({0, -j}, p));
        CHECK_FALSE(centre_membership({1, 0}, p));
    }
    auto generic = two(TauScalar(1));
    CHECK(centre_membership({0, 0}, generic));
    CHECK_FALSE(centre_membership({0, 1}, generic));
    CHECK_FALSE(centre_membership({3, 0}, generic));
    CHECK_THROWS_AS(centre_generators_torsion(generic), domain_error);

    // Random torsion parameters: the computed lattice is exactly the central exponents.
    Gen g(19);
    for (int trial = 0; trial < 10; ++trial) {
        QTorusParams p(3);
        for (int i = 0; i < 3; ++i) {
            for (int k = i + 1; k < 3; ++k) {
                p.log_lift(i, k) = TauScalar::tau_power(1, Rational(g.integer(-3, 3), g.integer(1, 4)));
            }
        }
        auto gens = centre_generators_torsion(p);
        for (std::size_t r = 0; r < gens.rows(); ++r) {
            CHECK(centre_membership({gens(r, 0).get_si(), gens(r, 1).get_si(), gens(r, 2).get_si()}, p));
        }
        for (int t = 0; t < 30; ++t) {
            auto k = random_exponent(g, 3, 6);
            std::vector<Integer> kz(k.begin(), k.end());
            bool in = integer_solve(gens.transpose(), kz).has_value();
            CHECK(in == centre_membership(k, p));
        }
    }
}

TEST_CASE("Gauss-Manin transport and monodromy")
{
    TorusContext ctx{3};
    CHECK(gauss_manin_transport(QTorusParams(3)) == ConnectionOperator(ctx));
    Gen g(23);
    for (int trial = 0; trial < 10; ++trial) {
        auto a = random_params(g, 3), b = random_params(g, 3);
        auto sum = QTorusParams(3, a.log_lift + b.log_lift);
        CHECK(gauss_manin_transport(a) * gauss_manin_transport(b) == gauss_manin_transport(sum));
        CHECK(gauss_manin_transport(a).is_unipotent());
        auto w = random_periodic(g, ctx, 4, true);
        CHECK(gauss_manin_transport(a).apply(w) == transport_operator(a.poisson().bivector(), w));
    }
    TorusContext c2{2};
    auto m = monodromy(0, 1, 2);
    auto v = PeriodicForm::at_level(0, LogForm::dlog(c2, index_set({0, 1}), -1));
    CHECK(m.apply(v) == v + PeriodicForm::at_level(-1, LogForm::dlog(c2, 0, TauScalar::tau())));
    CHECK(m.is_unipotent());
    CHECK_THROWS_AS(monodromy(1, 0, 2), domain_error);
}

TEST_CASE("transported lattice")
{
    TauScalar l = TauScalar(Rational(2, 7)) + TauScalar::tau_power(2, Rational(-1, 3));
    auto L = k_lattice(two(l));
    TorusContext c2{2};
    // tau^{-1} (u dlog1^dlog2 - lambda)
    auto expect = PeriodicForm::at_level(1, LogForm::dlog(c2, index_set({0, 1}), TauFraction(TauScalar::tau_power(-1)))) +
                  PeriodicForm::at_level(0, LogForm::dlog(c2, 0, TauFraction(-l * TauScalar::tau_power(-1))));
    CHECK(L.generators.at(1) == expect);
    CHECK(L.generators.at(0) == PeriodicForm::at_level(0, LogForm::dlog(c2, 0)));

    Gen g(29);
    for (int n = 1; n <= 4; ++n) {
        for (int d : {0, 1}) {
            auto base = k_lattice(QTorusParams(n), d).k.mhs;
            auto toric = build_toric_k_mhs(ToricPoissonStructure(n), d).mhs;
            CHECK(lattice_frame(base) == lattice_frame(toric));
            for (std::size_t i = 0; i < base.rank(); ++i) {
                CHECK((base.comparison(i, i) == toric.comparison(i, i) || base.comparison(i, i) == -toric.comparison(i, i)));
            }
            for (int trial = 0; trial < 3; ++trial) {
                auto K = k_lattice(random_params(g, n), d);
                auto diag = validate_mhs(K.k.mhs);
                for (auto& c : diag.checks) {
                    INFO(c.name << ": " << c.witness);
                    CHECK(c.passed);
                }
                for (int i = 0; i < n; ++i) {
                    for (int j = i + 1; j < n; ++j) {
                        auto M = lattice_matrix(monodromy(i, j, n), K);
                        REQUIRE(M.has_value());
                        CHECK(is_unipotent(*M));
                        CHECK(is_unimodular(*M));
                    }
                }
            }
        }
    }
}

TEST_CASE("extension classes agree with the Poisson side")
{
    auto zero = extension_class(QTorusParams(3));
    for (auto& [ij, v] : zero) {
        CHECK(v.is_identity());
    }
    CHECK(compare_with_poisson(QTorusParams(3)));
    TauScalar l = TauScalar(Rational(-4, 9));
    CHECK(extension_class(two(l)).at({0, 1}) == ExpValue(l));

    Gen g(31);
    for (int n = 2; n <= 4; ++n) {
        for (int trial = 0; trial < 4; ++trial) {
            auto p = random_params(g, n);
            CHECK(compare_with_poisson(p));
            auto shifted = p;
            for (int i = 0; i < n; ++i) {
                for (int j = i + 1; j < n; ++j) {
                    shifted.log_lift(i, j) += TauScalar::tau_power(1, Rational(g.integer(-3, 3)));
                }
            }
            CHECK(extension_class(shifted) == extension_class(p));
            CHECK(jacobian_equal(lattice_extension(shifted), lattice_extension(p)) == true);
        }
    }
}

TEST_CASE("root-of-unity Hodge classes")
{
    CHECK(hodge_class_torsion(QTorusParams(2))->order == 1);
    CHECK(hodge_class_torsion(two(TauScalar::tau_power(1, Rational(1, 3))))->order == 3);
    CHECK(hodge_class_torsion(two(TauScalar::tau_power(1, Rational(-5, 6))))->order == 6);
    CHECK_FALSE(hodge_class_torsion(two(TauScalar(1))).has_value());
    QTorusParams p(3);
    p.log_lift(0, 1) = TauScalar::tau_power(1, Rational(1, 2));
    p.log_lift(1, 2) = TauScalar::tau_power(1, Rational(2, 3));
    CHECK(hodge_class_torsion(p)->order == 6);
}
