#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "random_inputs.hpp"

#include <shodge/json.hpp>

#include <fstream>

using namespace shodge;
using shodge::testing::Gen;

namespace {

Json load_fixture(const std::string& name)
{
    std::ifstream in(std::string(SHODGE_FIXTURE_DIR) + "/" + name);
    REQUIRE(in.good());
    return Json::parse(in);
}

std::string schema_pointer(const std::function<void()>& f)
{
    try {
        f();
    } catch (const schema_error& e) {
        return e.pointer();
    }
    return "<no error>";
}

ToricPoissonStructure random_sigma(Gen& g, int n)
{
    ToricPoissonStructure s(n);
    for (auto [i, j] : s.pairs()) {
        s.set(i, j, g.tau_scalar(2, 0, 2));
    }
    return s;
}

// Emitted text re-parses to the same text.
template <class From, class To>
void check_stable(const Json& j, From from, To to)
{
    auto text = j.dump();
    auto again = to(from(Json::parse(text))).dump();
    CHECK(again == text);
}

} // namespace

TEST_CASE("scalar codecs")
{
    Integer big("123456789012345678901234567890");
    CHECK(integer_to_json(big) == Json("123456789012345678901234567890"));
    CHECK(integer_from_json(integer_to_json(big)) == big);
    CHECK(integer_from_json(Json(-7)) == -7);
    CHECK(rational_to_json(make_rational(-6, 4)) == Json("-3/2"));
    CHECK(rational_from_json(Json("4")) == 4);
    CHECK(tau_to_json(TauScalar::tau_power(1, make_rational(1, 3)) + TauScalar(2)).dump() == R"([[0,"2/1"],[1,"1/3"]])");

    Gen g(11);
    for (int i = 0; i < 50; ++i) {
        auto s = g.tau_scalar(4, -2, 3);
        CHECK(tau_from_json(tau_to_json(s)) == s);
        auto f = g.tau_fraction();
        CHECK(fraction_from_json(fraction_to_json(f)) == f);
        ExpValue e(s);
        CHECK(exp_from_json(exp_to_json(e)) == e);
    }
}

TEST_CASE("lambda codec")
{
    auto s = lambda_from_json(Json::parse(R"({"1,2":[[0,"0/1"]]})"), 2);
    CHECK(s == ToricPoissonStructure(2));
    auto t = lambda_from_json(load_fixture("lambda-3.json"));
    CHECK(t.n == 3);
    CHECK(t.at(1, 2) == TauScalar(make_rational(-2, 3)) + TauScalar::tau());
    CHECK(lambda_from_json(lambda_to_json(t), 3) == t);
    CHECK(lambda_from_json(Json::object(), 4) == ToricPoissonStructure(4));

    CHECK(schema_pointer([] { lambda_from_json(Json::parse(R"({"2,1":[]})")); }) == "/2,1");
    CHECK(schema_pointer([] { lambda_from_json(Json::parse(R"({"1,x":[]})")); }) == "/1,x");
    CHECK(schema_pointer([] { lambda_from_json(Json::parse(R"({"1,3":[]})"), 2); }) == "/1,3");
    CHECK(schema_pointer([] { lambda_from_json(Json::parse(R"({"1,2":[[0,"1/0"]]})")); }) == "/1,2/0/1");
    CHECK(schema_pointer([] { lambda_from_json(Json::parse(R"({"1,2":[[0,"1"],[0,"2"]]})")); }) == "/1,2/1/0");
    CHECK(schema_pointer([] { lambda_from_json(Json::object()); }) == "");
}

TEST_CASE("structure codecs round-trip")
{
    Gen g(12);
    for (int trial = 0; trial < 8; ++trial) {
        int n = g.integer(1, 3);
        auto s = random_sigma(g, n);
        auto k = build_toric_k_mhs(s, trial % 2);
        auto j = mhs_to_json(k.mhs);
        auto back = mhs_from_json(j);
        CHECK(back == k.mhs);
        CHECK(validate_mhs(back).ok());
        check_stable(j, [](const Json& x) { return mhs_from_json(x); }, mhs_to_json);
        CHECK(filtration_from_json(filtration_to_json(k.mhs.hodge)) == k.mhs.hodge);
        check_stable(flag_to_json(k.basis, k.mhs.hodge)["filtration"],
                     [](const Json& x) { return filtration_from_json(x); }, filtration_to_json);

        if (n >= 2) {
            auto q = quantum_parameter(s);
            CHECK(pair_map_from_json(pair_map_to_json(q)) == q);
            CHECK(lambda_from_json(lambda_to_json(s), n) == s);
        }
    }
    CHECK(mhs_from_json(mhs_to_json(zero_structure())) == zero_structure());
}

TEST_CASE("integer matrices and groups")
{
    IntMatrix m(2, 3);
    m(0, 1) = 5;
    m(1, 2) = Integer("-99999999999999999999");
    CHECK(int_matrix_from_json(int_matrix_to_json(m)) == m);
    CHECK(int_matrix_from_json(Json::array()).rows() == 0);
    CHECK(schema_pointer([] { int_matrix_from_json(Json::parse("[[1,2],[3]]")); }) == "/1");

    GradedKResult r{{0, FgAbGroup::from_invariants(1, {3})}, {1, FgAbGroup::free(2)}};
    CHECK(graded_to_json(r).dump() == R"({"w0":{"free":1,"torsion":[3]},"w1":{"free":2}})");
    CHECK(graded_from_json(graded_to_json(r)) == r);
    CHECK(schema_pointer([] { graded_from_json(Json::parse(R"({"w0":{"free":1,"torsion":[2,3]}})")); }) ==
          "/w0/torsion");
    CHECK(schema_pointer([] { graded_from_json(Json::parse(R"({"w0":{"free":1,"extra":0}})")); }) == "/w0/extra");
    CHECK(schema_pointer([] { graded_from_json(Json::parse(R"({"x0":{"free":1}})")); }) == "/x0");
}

TEST_CASE("gysin fixtures")
{
    auto cubic = gysin_input_from_json(load_fixture("cubic-p2.json"));
    CHECK(cubic.labels == std::vector<std::string>{"e0", "e1", "e2"});
    CHECK(cubic.pushforward.rows() == 3);
    CHECK(cubic.pushforward.cols() == 2);
    CHECK(cubic.pushforward(1, 1) == 3);
    CHECK(graded_to_json(gysin_weight_graded(cubic)).dump() == R"({"w0":{"free":1,"torsion":[3]},"w1":{"free":2}})");

    auto skl = gysin_input_from_json(load_fixture("sklyanin-p3.json"));
    CHECK(skl.reduced);
    CHECK(graded_to_json(gysin_weight_graded(skl)).dump() == R"({"w0":{"free":1,"torsion":[4]},"w1":{"free":2}})");

    for (auto* g : {&cubic, &skl}) {
        auto back = gysin_input_from_json(gysin_input_to_json(*g));
        CHECK(back.labels == g->labels);
        CHECK(back.pushforward == g->pushforward);
        CHECK(back.odd_rank == g->odd_rank);
        CHECK(back.reduced == g->reduced);
    }

    auto bad = load_fixture("cubic-p2.json");
    bad["pushforward"][1] = Json::parse("[0,3]");
    CHECK(schema_pointer([&] { gysin_input_from_json(bad); }) == "/pushforward/1");
    bad = load_fixture("cubic-p2.json");
    bad["odd"]["colour"] = "red";
    CHECK(schema_pointer([&] { gysin_input_from_json(bad); }) == "/odd/colour");
    bad = load_fixture("cubic-p2.json");
    bad.erase("odd");
    CHECK(schema_pointer([&] { gysin_input_from_json(bad); }) == "/odd");
    bad = load_fixture("cubic-p2.json");
    bad["source"] = Json::parse(R"(["O_p"])");
    CHECK(schema_pointer([&] { gysin_input_from_json(bad); }) == "/source");
}

TEST_CASE("series fixtures and codec")
{
    for (auto name : {"w-at.json", "w-kz.json", "w-3d.json"}) {
        auto j = load_fixture(name);
        auto w = series_from_json(j);
        CHECK(w[0] == CoeffPoly(1));
        check_stable(series_to_json(w), [](const Json& x) { return series_from_json(x); }, series_to_json);
        CHECK(series_from_json(series_to_json(w)) == w);
        CHECK(compare_exp(q_parameter(w)).match);
    }
    auto at = series_from_json(load_fixture("w-at.json"));
    CHECK(at.order() == 6);
    CHECK(at[6] == CoeffPoly::symbol("z", 1, make_rational(251, 2048)) + CoeffPoly(make_rational(-17, 184320)));
    CHECK(series_from_json(load_fixture("w-3d.json")).symbols() == std::set<std::string>{"a", "b"});

    CHECK(series_to_json(TruncatedSeries::exp_series(1)).dump() ==
          R"({"coeffs":[{"poly":[{"mono":{},"val":"1/1"}],"pow":0},{"poly":[{"mono":{},"val":"1/1"}],"pow":1}],"order":1})");

    auto bad = load_fixture("w-at.json");
    bad["symbols"] = Json::array();
    CHECK(schema_pointer([&] { series_from_json(bad); }) == "/symbols");
    bad = load_fixture("w-at.json");
    bad["coeffs"][2]["pow"] = 9;
    CHECK(schema_pointer([&] { series_from_json(bad); }) == "/coeffs/2/pow");
    bad = load_fixture("w-at.json");
    bad["coeffs"][6]["poly"][0]["mono"]["z"] = -1;
    CHECK(schema_pointer([&] { series_from_json(bad); }) == "/coeffs/6/poly/0/mono/z");
    bad = load_fixture("w-at.json");
    bad["coeffs"][6]["poly"][1]["val"] = 0.5;
    CHECK(schema_pointer([&] { series_from_json(bad); }) == "/coeffs/6/poly/1/val");
    bad = load_fixture("w-at.json");
    bad["order"] = "6";
    CHECK(schema_pointer([&] { series_from_json(bad); }) == "/order");

    Gen g(13);
    for (int trial = 0; trial < 20; ++trial) {
        TruncatedSeries s(g.integer(0, 5));
        for (int k = 0; k <= s.order(); ++k) {
            CoeffPoly c(g.rational());
            if (g.coin()) {
                c += CoeffPoly::symbol(g.coin() ? "u" : "v", g.integer(1, 3), g.rational());
            }
            s.set(k, c);
        }
        CHECK(series_from_json(series_to_json(s)) == s);
    }
}

TEST_CASE("quantum torus codecs")
{
    Gen g(14);
    for (int trial = 0; trial < 10; ++trial) {
        int n = g.integer(1, 3);
        QTorusParams p(random_sigma(g, n));
        QTorusElement a(p);
        for (int t = 0; t < 3; ++t) {
            auto v = g.int_vector(n, -2, 2);
            a.add(Exponent(v.begin(), v.end()),
                  QCoeff::exp(ExpValue(g.tau_scalar()), g.nonzero_tau_fraction()));
        }
        auto j = qtorus_element_to_json(a);
        auto back = qtorus_element_from_json(j);
        CHECK(back.params() == a.params());
        CHECK(qtorus_element_to_json(back).dump() == j.dump());

        TorusContext ctx{n};
        auto sigma = random_bivector(g, ctx);
        CHECK(polyvector_to_json(polyvector_from_json(polyvector_to_json(sigma), ctx)).dump() ==
              polyvector_to_json(sigma).dump());
    }
    auto j = Json::parse(R"({"n":2,"lambda":{},"terms":[{"exponent":[1],"coeff":[]}]})");
    CHECK(schema_pointer([&] { qtorus_element_from_json(j); }) == "/terms/0/exponent");
    j = Json::parse(R"({"n":2,"lambda":{},"terms":[{"exponent":[1,0],"coeff":[{"log":[],"c":[],"x":1}]}]})");
    CHECK(schema_pointer([&] { qtorus_element_from_json(j); }) == "/terms/0/coeff/0/x");
    CHECK(schema_pointer([] { polyvector_from_json(Json::parse(R"([{"wedge":[2,1],"c":[]}])"), TorusContext{2}); }) ==
          "/0/wedge/1");
}

TEST_CASE("output is canonical")
{
    // sorted keys and canonical rationals, independent of input spelling
    auto a = series_from_json(Json::parse(R"({"order":1,"coeffs":[{"poly":[{"val":"2/4","mono":{}}],"pow":1}]})"));
    auto b = series_from_json(Json::parse(R"({"coeffs":[{"pow":1,"poly":[{"mono":{},"val":"1/2"}]}],"order":1})"));
    CHECK(series_to_json(a).dump() == series_to_json(b).dump());
    auto l1 = lambda_from_json(Json::parse(R"({"2,3":[[0,"1"]],"1,2":[[1,"3/6"]]})"));
    auto l2 = lambda_from_json(Json::parse(R"({"1,2":[[1,"1/2"]],"2,3":[[0,"1/1"]]})"));
    CHECK(lambda_to_json(l1).dump() == lambda_to_json(l2).dump());
}
