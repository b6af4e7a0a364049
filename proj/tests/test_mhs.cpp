#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "random_inputs.hpp"

#include <shodge/mhs.hpp>

using namespace shodge;
using namespace shodge::testing;

namespace {

using Kind = Filtration::Kind;

Subspace span(std::size_t d, std::vector<std::vector<TauFraction>> rows) { return Subspace(d, rows); }

// Extension of Z(0) by Z(1) whose second lattice vector is e1 - lambda e0.
MixedHodgeStructure kummer(const TauScalar& lambda)
{
    Matrix<TauScalar> c(2, 2);
    c(0, 0) = TauScalar::tau();
    c(0, 1) = -lambda;
    c(1, 1) = TauScalar(1);
    return {FgAbGroup::free(2), c,
            Filtration(Kind::increasing, 2, -2, {span(2, {{1, 0}}), span(2, {{1, 0}}), Subspace::whole(2)}),
            Filtration(Kind::decreasing, 2, -1, {Subspace::whole(2), span(2, {{0, 1}})})};
}

IntMatrix rows(std::size_t cols, std::vector<std::vector<Integer>> r) { return IntMatrix::from_rows(cols, r); }

JacobianElement extension_class(const MixedHodgeStructure& e, const IntMatrix& sub, const IntMatrix& comp)
{
    auto s = sub_structure(e, sub);
    auto q = quotient_structure(e, sub, comp);
    return carlson_class(s.mhs, e, q.mhs, s.inclusion, q.projection);
}

JacobianElement kummer_class(const TauScalar& lambda)
{
    return extension_class(kummer(lambda), rows(2, {{1, 0}}), rows(2, {{0, 1}}));
}

ExpValue single_exp(const JacobianElement& x)
{
    auto m = to_exp_values(x);
    REQUIRE(m.rows() == 1);
    REQUIRE(m.cols() == 1);
    return m(0, 0);
}

} // namespace

TEST_CASE("Tate structures satisfy the axioms")
{
    for (int j = -3; j <= 3; ++j) {
        CHECK(validate_mhs(tate_structure(j)).ok());
    }
    CHECK(validate_mhs(direct_sum(tate_structure(0), tate_structure(1))).ok());
    CHECK(validate_mhs(kummer(TauScalar(Rational(3, 7)))).ok());
}

TEST_CASE("validation reports witnesses")
{
    auto bad = kummer(TauScalar(2));
    bad.hodge = Filtration(Kind::decreasing, 2, -1, {Subspace::whole(2), span(2, {{1, 0}})});
    auto d = validate_mhs(bad);
    CHECK_FALSE(d.ok());
    bool found = false;
    for (auto& c : d.checks) {
        if (c.name == "opposedness") {
            CHECK_FALSE(c.passed);
            CHECK_FALSE(c.witness.empty());
            found = true;
        }
    }
    CHECK(found);

    auto singular = tate_structure(0);
    singular.comparison(0, 0) = TauScalar();
    CHECK_FALSE(validate_mhs(singular).checks.front().passed);

    // A weight step spanned by a non-rational lattice vector.
    auto irr = direct_sum(tate_structure(0), tate_structure(0));
    irr.weight = Filtration(Kind::increasing, 2, -1, {span(2, {{TauFraction(TauScalar::tau()), 1}}), Subspace::whole(2)});
    auto di = validate_mhs(irr);
    CHECK_FALSE(di.ok());
    CHECK_FALSE(di.checks[2].passed);
}

TEST_CASE("Tate twist")
{
    CHECK(tate_twist(tate_structure(0), 1) == tate_structure(1));
    Gen g(11);
    for (int trial = 0; trial < 20; ++trial) {
        auto v = kummer(g.tau_scalar(2, -1, 2));
        int j = static_cast<int>(g.integer(-3, 3));
        CHECK(tate_twist(tate_twist(v, j), -j) == v);
        CHECK(validate_mhs(tate_twist(v, j)).ok());
    }
}

TEST_CASE("Kummer class is Exp(lambda)")
{
    for (const char* s : {"0", "1/2", "3", "-5/3"}) {
        Rational l = parse_rational(s);
        CHECK(single_exp(kummer_class(TauScalar(l))) == ExpValue(TauScalar(l)));
    }
    auto split = kummer_class(TauScalar());
    CHECK(is_identity(split));
}

TEST_CASE("Jacobian equality is modulo the lattice")
{
    TauScalar l = TauScalar(Rational(2, 5)) + TauScalar::tau_power(2, Rational(1, 3));
    CHECK(jacobian_equal(kummer_class(l), kummer_class(l + TauScalar::tau())));
    CHECK(jacobian_equal(kummer_class(l), kummer_class(l - TauScalar::tau_power(1, 4))));
    CHECK_FALSE(jacobian_equal(kummer_class(TauScalar(1)), kummer_class(TauScalar(2))));
    CHECK_FALSE(jacobian_equal(kummer_class(TauScalar::tau_power(1, Rational(1, 2))), kummer_class(TauScalar())));
    CHECK(is_identity(kummer_class(TauScalar::tau_power(1, 3))));
}

TEST_CASE("Baer sum is additive")
{
    Gen g(5);
    for (int trial = 0; trial < 8; ++trial) {
        TauScalar l = g.tau_scalar(2, 0, 2), m = g.tau_scalar(2, 0, 2);
        auto e = direct_sum(kummer(l), kummer(m));
        // Pull back along the diagonal of the quotients, push out along the sum of the subs.
        auto p = sub_structure(e, rows(4, {{1, 0, 0, 0}, {0, 0, 1, 0}, {0, 1, 0, 1}}));
        auto baer = quotient_structure(p.mhs, rows(3, {{1, -1, 0}}), rows(3, {{1, 0, 0}, {0, 0, 1}}));
        REQUIRE(validate_mhs(baer.mhs).ok());
        auto c = extension_class(baer.mhs, rows(2, {{1, 0}}), rows(2, {{0, 1}}));
        CHECK(single_exp(c) == ExpValue(l + m));
        CHECK(jacobian_equal(c, kummer_class(l) + kummer_class(m)));
        CHECK(jacobian_equal(c, kummer_class(l + m)));
    }
}

TEST_CASE("pullback along multiplication by j")
{
    Gen g(8);
    for (int trial = 0; trial < 8; ++trial) {
        TauScalar l = g.tau_scalar(2, 0, 2);
        long j = static_cast<long>(g.integer(-4, 4));
        if (j == 0) {
            continue;
        }
        auto e = kummer(l);
        // Sublattice generated by g0 and j g1: the pullback along j on Z(0).
        Matrix<TauScalar> scale(2, 2);
        scale(0, 0) = TauScalar(1);
        scale(1, 1) = TauScalar(j);
        MixedHodgeStructure pulled{e.lattice, e.comparison * scale, e.weight, e.hodge};
        REQUIRE(validate_mhs(pulled).ok());
        auto c = extension_class(pulled, rows(2, {{1, 0}}), rows(2, {{0, 1}}));
        CHECK(jacobian_equal(c, kummer_class(l).times(j)));
        CHECK(single_exp(c) == ExpValue(l).pow(j));
    }
}

TEST_CASE("weight sub and quotient objects")
{
    auto e = kummer(TauScalar(Rational(1, 3)));
    auto s = weight_subobject(e, -2);
    auto q = weight_quotient(e, -2);
    CHECK(s.mhs.rank() == 1);
    CHECK(q.mhs.rank() == 1);
    CHECK(validate_mhs(s.mhs).ok());
    CHECK(validate_mhs(q.mhs).ok());
    CHECK(q.projection * s.inclusion == IntMatrix(1, 1));
    CHECK_THROWS_AS(sub_structure(e, rows(2, {{2, 0}})), domain_error);
}

TEST_CASE("invalid extension data is rejected")
{
    auto e = kummer(TauScalar(1));
    auto s = sub_structure(e, rows(2, {{1, 0}}));
    auto q = quotient_structure(e, rows(2, {{1, 0}}), rows(2, {{0, 1}}));
    CHECK_THROWS_AS(carlson_class(s.mhs, e, q.mhs, s.inclusion, rows(2, {{1, 0}})), domain_error);
    CHECK_THROWS_AS(carlson_class(s.mhs, e, q.mhs, s.inclusion, rows(2, {{0, 2}})), domain_error);
    // Hodge filtration on the quotient that the projection does not map onto.
    auto q2 = q.mhs;
    q2.hodge = Filtration(Kind::decreasing, 1, 1, {Subspace::whole(1)});
    CHECK_THROWS_AS(carlson_class(s.mhs, e, q2, s.inclusion, q.projection), domain_error);
}

TEST_CASE("Ext of finite groups")
{
    CHECK(ext1(FgAbGroup::from_invariants(0, {3}), FgAbGroup::free(1)) == FgAbGroup::from_invariants(0, {3}));
    CHECK(ext1(FgAbGroup::from_invariants(0, {4}), FgAbGroup::from_invariants(0, {6})) ==
          FgAbGroup::from_invariants(0, {2}));
    CHECK(ext1(FgAbGroup::free(2), FgAbGroup::from_invariants(1, {5})).is_trivial());
}
