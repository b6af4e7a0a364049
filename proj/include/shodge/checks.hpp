#pragma once

#include "gysin.hpp"
#include "json.hpp"
#include "qtorus.hpp"
#include "sampling.hpp"
#include "series.hpp"
#include "toric.hpp"

#include <chrono>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

namespace shodge {

struct CheckResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0;
    double budget = 0;
};

namespace check_detail {

// Records the first failure; later ones only bump the count.
struct Tally {
    long cases = 0;
    long failures = 0;
    std::string first;

    void expect(bool ok, const std::string& what)
    {
        ++cases;
        if (!ok) {
            if (failures++ == 0) {
                first = what;
            }
        }
    }
    std::string summary() const
    {
        std::ostringstream s;
        s << cases << " cases";
        if (failures) {
            s << ", " << failures << " failed; first: " << first;
        }
        return s.str();
    }
};

inline Json read_json(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw domain_error("cannot open " + path);
    }
    return Json::parse(in);
}

inline ToricPoissonStructure random_sigma(Sampler& g, int n)
{
    ToricPoissonStructure s(n);
    for (auto [i, j] : s.pairs()) {
        s.set(i, j, g.tau_scalar(2, 0, 2));
    }
    return s;
}

inline Exponent random_exponent(Sampler& g, int n, int range = 2)
{
    Exponent k;
    for (int i = 0; i < n; ++i) {
        k.push_back(g.integer(-range, range));
    }
    return k;
}

// With `invariant` each term's exponents sum to zero.
inline Chain random_chain(Sampler& g, const QTorusParams& p, int degree, int terms, bool invariant)
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
            for (std::size_t i = 0; i < sum.size(); ++i) {
                key[0][i] -= sum[i];
            }
        }
        c.add(key, QCoeff(g.nonzero_tau_fraction()));
    }
    return c;
}

inline std::string q_text(const TruncatedSeries& q, int upto)
{
    std::string s;
    for (int k = 0; k <= std::min(upto, q.order()); ++k) {
        s += (k ? ", " : "") + to_string(q[k]);
    }
    return s;
}

inline void series_check(Tally& t, const std::string& path)
{
    auto w = series_from_json(read_json(path));
    auto q = q_parameter(w);
    auto cmp = compare_exp(q);
    t.expect(cmp.match, "q = " + q_text(q, q.order()));
    t.expect(q == TruncatedSeries::exp_series(q.order()), "exact equality with the exponential");
    t.expect(q.symbols().empty(), "symbols survive in q");
    t.expect(series_mul(q, flip(w)) == w, "q w(-hbar) != w");
}

inline std::string fixture(const std::string& dir, const std::string& name) { return dir + "/" + name; }

} // namespace check_detail

using CheckBody = std::function<std::string(check_detail::Tally&)>;

inline CheckResult run_check(int id, std::string name, double budget, const CheckBody& body)
{
    CheckResult r{id, std::move(name), false, "", 0, budget};
    check_detail::Tally t;
    auto start = std::chrono::steady_clock::now();
    std::string extra;
    try {
        extra = body(t);
    } catch (const std::exception& e) {
        t.expect(false, std::string("exception: ") + e.what());
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    r.passed = t.failures == 0 && t.cases > 0 && r.seconds < budget;
    r.detail = t.summary() + (extra.empty() ? "" : "; " + extra);
    if (r.seconds >= budget) {
        r.detail += "; over the time budget";
    }
    return r;
}

inline std::vector<CheckResult> run_reference_checks(const std::string& fixtures)
{
    using namespace check_detail;
    std::vector<CheckResult> out;

    out.push_back(run_check(1, "q-parameter of w_AT is e^hbar through hbar^6", 1, [&](Tally& t) {
        series_check(t, fixture(fixtures, "w-at.json"));
        return std::string();
    }));
    out.push_back(run_check(2, "q-parameter of w_KZ is e^hbar through hbar^6", 1, [&](Tally& t) {
        series_check(t, fixture(fixtures, "w-kz.json"));
        auto at = series_from_json(read_json(fixture(fixtures, "w-at.json")));
        auto kz = series_from_json(read_json(fixture(fixtures, "w-kz.json")));
        t.expect(!(at == kz), "the two weight series coincide");
        return std::string();
    }));
    out.push_back(run_check(3, "q-parameter of w_3d is e^hbar through hbar^4", 1, [&](Tally& t) {
        series_check(t, fixture(fixtures, "w-3d.json"));
        auto w = series_from_json(read_json(fixture(fixtures, "w-3d.json")));
        t.expect(w.order() == 4 && w.symbols() == std::set<std::string>{"a", "b"}, "fixture shape");
        return std::string();
    }));
    out.push_back(run_check(4, "Gysin: plane cubic gives Z + Z/3, Z^2", 1, [&](Tally& t) {
        auto r = gysin_weight_graded(gysin_input_from_json(read_json(fixture(fixtures, "cubic-p2.json"))));
        t.expect(r.at(0) == FgAbGroup::from_invariants(1, {3}), "w0 = " + graded_to_json(r).dump());
        t.expect(r.at(1) == FgAbGroup::free(2), "w1 = " + graded_to_json(r).dump());
        return graded_to_json(r).dump();
    }));
    out.push_back(run_check(5, "Gysin: reduced elliptic quartic gives Z + Z/4", 1, [&](Tally& t) {
        auto g = gysin_input_from_json(read_json(fixture(fixtures, "sklyanin-p3.json")));
        t.expect(g.reduced, "fixture is not reduced");
        auto r = gysin_weight_graded(g);
        t.expect(r.at(0) == FgAbGroup::from_invariants(1, {4}), "w0 = " + graded_to_json(r).dump());
        t.expect(r.at(1) == FgAbGroup::free(2), "w1 = " + graded_to_json(r).dump());
        return graded_to_json(r).dump();
    }));

    out.push_back(run_check(6, "transported extension class equals the Poisson quantum parameter", 30, [](Tally& t) {
        Sampler g(6001);
        for (int trial = 0; trial < 50; ++trial) {
            int n = 2 + trial % 3;
            auto s = random_sigma(g, n);
            QTorusParams p(s);
            auto lhs = extension_class(p);
            auto rhs = quantum_parameter(s);
            t.expect(lhs == rhs, "lambda = " + lambda_to_json(s).dump());
            for (auto [i, j] : s.pairs()) {
                t.expect(rhs.at({i, j}) == ExpValue(s.at(i, j)), "q_ij != Exp(lambda_ij)");
            }
        }
        return std::string();
    }));

    out.push_back(run_check(7, "exp-conjugation identity", 10, [](Tally& t) {
        Sampler g(7001);
        for (int trial = 0; trial < 100; ++trial) {
            TorusContext ctx(g.integer(1, 3));
            Polyvector sigma = ctx.n >= 2 ? random_bivector(g, ctx) : Polyvector(ctx);
            auto w = random_periodic(g, ctx, 5);
            auto lhs = transport_operator(TauFraction(-1) * sigma,
                                          exterior_d(transport_operator(sigma, w)).u_shifted(1));
            auto rhs = poisson_delta(sigma, w) + exterior_d(w).u_shifted(1);
            t.expect(lhs == rhs, "trial " + std::to_string(trial));
        }
        return std::string();
    }));

    out.push_back(run_check(8, "Hodge numbers constant and flags equivariant", 10, [](Tally& t) {
        Sampler g(8001);
        for (int n = 1; n <= 4; ++n) {
            for (int d : {0, 1}) {
                for (int trial = 0; trial < 4; ++trial) {
                    auto s = random_sigma(g, n);
                    auto f = poisson_hodge_flag(s, d);
                    auto f0 = poisson_hodge_flag(ToricPoissonStructure(n), d);
                    for (int p = f0.lo() - 1; p <= f0.hi() + 1; ++p) {
                        t.expect(f.at(p).dim() == f0.at(p).dim(), "dim F^" + std::to_string(p));
                    }
                    TauFraction h = g.nonzero_tau_fraction();
                    KBasis b(n, d);
                    t.expect(adams_scale(h, poisson_hodge_flag(s.bivector(), d), b) ==
                                 poisson_hodge_flag(h * s.bivector(), d),
                             "equivariance at n = " + std::to_string(n));
                }
            }
        }
        return std::string();
    }));

    out.push_back(run_check(9, "mixed Hodge axioms for toric and transported lattices", 30, [](Tally& t) {
        Sampler g(9001);
        auto record = [&](const MixedHodgeStructure& v, const std::string& what) {
            for (auto& c : validate_mhs(v).checks) {
                t.expect(c.passed, what + ": " + c.name + " " + c.witness);
            }
        };
        for (int n = 1; n <= 4; ++n) {
            for (int d : {0, 1}) {
                for (int trial = 0; trial < 3; ++trial) {
                    record(build_toric_k_mhs(random_sigma(g, n), d).mhs, "toric n=" + std::to_string(n));
                    record(k_lattice(QTorusParams(random_sigma(g, n)), d).k.mhs, "lattice n=" + std::to_string(n));
                }
            }
        }
        return std::string();
    }));

    out.push_back(run_check(10, "monodromy is integral and unipotent on the lattice", 5, [](Tally& t) {
        Sampler g(10001);
        for (int n = 2; n <= 4; ++n) {
            for (int d : {0, 1}) {
                for (int trial = 0; trial < 2; ++trial) {
                    auto L = k_lattice(QTorusParams(random_sigma(g, n)), d);
                    for (int i = 0; i < n; ++i) {
                        for (int j = i + 1; j < n; ++j) {
                            auto M = lattice_matrix(monodromy(i, j, n), L);
                            t.expect(M.has_value(), "monodromy leaves the lattice");
                            if (M) {
                                t.expect(is_unipotent(*M), "not unipotent");
                                t.expect(is_unimodular(*M), "not an automorphism of the lattice");
                            }
                        }
                    }
                }
            }
        }
        return std::string();
    }));

    out.push_back(run_check(11, "mixed complex identities and the HKR pairing", 30, [](Tally& t) {
        Sampler g(11001);
        for (int trial = 0; trial < 200; ++trial) {
            int n = g.integer(1, 3);
            int k = g.integer(0, 4);
            QTorusParams p(random_sigma(g, n));
            auto c = random_chain(g, p, k, 2, false);
            t.expect(hochschild_b(hochschild_b(c)).is_zero(), "b^2");
            t.expect(connes_B(connes_B(c)).is_zero(), "B^2");
            auto anti = hochschild_b(connes_B(c));
            if (k > 0) {
                anti = anti + connes_B(hochschild_b(c));
            }
            t.expect(anti.is_zero(), "bB + Bb");
        }
        for (int trial = 0; trial < 40; ++trial) {
            int n = g.integer(1, 4);
            QTorusParams p(random_sigma(g, n));
            int k = g.integer(0, std::min(n, 3));
            Polyvector xi(TorusContext{n});
            for (IndexSet J = 0; J <= TorusContext(n).top(); ++J) {
                if (degree_of(J) == k) {
                    xi.add(J, g.tau_fraction());
                }
            }
            t.expect(hkr_pairing(xi, hochschild_b(random_chain(g, p, k + 1, 3, true))).is_zero(),
                     "pairing on a boundary");
        }
        // q = 1: a_0 (x) ... (x) a_k pairs like a_0 da_1 ^ ... ^ da_k
        for (int trial = 0; trial < 40; ++trial) {
            int n = g.integer(1, 3);
            int k = g.integer(0, n);
            QTorusParams p(n);
            TorusContext ctx{n};
            auto c = random_chain(g, p, k, 1, g.coin());
            if (c.is_zero()) {
                continue;
            }
            auto& key = c.terms().begin()->first;
            Exponent sum = key[0];
            LogForm forms = LogForm::term(ctx, std::vector<int>(static_cast<std::size_t>(n), 0), 0, 1);
            for (int s = 1; s <= k; ++s) {
                sum = exponent_sum(sum, key[static_cast<std::size_t>(s)]);
                LogForm da(ctx);
                for (int i = 0; i < n; ++i) {
                    long e = key[static_cast<std::size_t>(s)][static_cast<std::size_t>(i)];
                    if (e != 0) {
                        da += LogForm::dlog(ctx, index_set({i}), TauFraction(e));
                    }
                }
                forms = wedge(forms, da);
            }
            for (IndexSet J = 0; J <= ctx.top(); ++J) {
                if (degree_of(J) != k) {
                    continue;
                }
                auto xi = Polyvector::frame(ctx, J);
                TauFraction expected;
                if (is_unit_exponent(sum)) {
                    TauFraction sign = (k * (k - 1) / 2) % 2 ? -1 : 1;
                    expected = sign * contract(xi, forms).invariant_coeff(0) / TauFraction(factorial_rational(k));
                }
                Chain single(p, k);
                single.add(key, 1);
                t.expect(hkr_pairing(xi, single) == QCoeff(expected), "commutative HKR");
            }
        }
        return std::string();
    }));

    out.push_back(run_check(12, "filtered pairing lands in u^(p+q) C[[u]]", 10, [](Tally& t) {
        Sampler g(12001);
        for (int trial = 0; trial < 80; ++trial) {
            TorusContext ctx(g.integer(1, 3));
            Polyvector sigma = ctx.n >= 2 ? random_bivector(g, ctx) : Polyvector(ctx);
            int p = g.integer(-1, 2), q = g.integer(-1, 2);
            auto v0 = random_periodic(g, ctx, 4, true);
            auto w0 = random_periodic(g, ctx, 4, true);
            PeriodicForm v(ctx), w(ctx);
            for (auto& [j, f] : v0.levels()) {
                v.add(std::max(j, p), f);
            }
            for (auto& [j, f] : w0.levels()) {
                w.add(std::max(j, q), f);
            }
            auto r = integration_pairing(transport_operator(sigma, v), transport_operator(sigma, w));
            for (auto& [k, c] : r) {
                t.expect(k >= p + q, "u-power " + std::to_string(k) + " below " + std::to_string(p + q));
            }
            t.expect(r == integration_pairing(v, w), "transport changes the pairing");
        }
        return std::string();
    }));

    out.push_back(run_check(13, "root-of-unity Hodge classes", 10, [](Tally& t) {
        Sampler g(13001);
        for (int trial = 0; trial < 12; ++trial) {
            int j = g.integer(2, 7);
            int num;
            do {
                num = g.integer(-2 * j, 2 * j);
            } while (gcd(Integer(num), Integer(j)) != 1);
            QTorusParams p(2);
            p.log_lift(0, 1) = TauScalar::tau_power(1, make_rational(num, j));
            auto label = std::to_string(num) + "/" + std::to_string(j);
            t.expect(exp_torsion_order(p.q(0, 1)) == Integer(j), "order of Exp(tau " + label + ")");
            t.expect(abs(determinant(centre_generators_torsion(p))) == Integer(j * j), "centre index for " + label);
            auto cls = lattice_extension(p);
            t.expect(is_identity(cls.times(Integer(j))), "class^j trivial for " + label);
            for (int m = 1; m < j; ++m) {
                t.expect(!is_identity(cls.times(Integer(m))), "class^" + std::to_string(m) + " trivial for " + label);
            }
            auto h = hodge_class_torsion(p);
            t.expect(h && h->order == j, "hodge_class_torsion for " + label);
        }
        for (int trial = 0; trial < 3; ++trial) {
            QTorusParams p(2);
            p.log_lift(0, 1) = TauScalar(g.nonzero_rational()) + TauScalar::tau_power(1, g.rational());
            auto cls = lattice_extension(p);
            for (int m = 1; m <= 100; ++m) {
                t.expect(!is_identity(cls.times(Integer(m))), "power " + std::to_string(m) + " trivial");
            }
            t.expect(!hodge_class_torsion(p).has_value(), "non-torsion class reported torsion");
        }
        return std::string();
    }));

    out.push_back(run_check(14, "Torelli: equal parameters iff lambda differ by tau Z", 5, [](Tally& t) {
        Sampler g(14001);
        for (int trial = 0; trial < 10; ++trial) {
            int n = 2 + trial % 3;
            auto a = random_sigma(g, n);
            auto b = a;
            for (auto [i, j] : a.pairs()) {
                b.set(i, j, a.at(i, j) + TauScalar::tau_power(1, Rational(g.integer(-5, 5))));
            }
            t.expect(torelli_equal(a, b), "tau Z shift not detected as equal");
            t.expect(quantum_parameter(a) == quantum_parameter(b), "parameters differ");
            auto pairs = a.pairs();
            auto [i, j] = pairs[static_cast<std::size_t>(g.integer(0, static_cast<int>(pairs.size()) - 1))];
            auto c = b;
            c.set(i, j, b.at(i, j) + (g.coin() ? TauScalar(g.nonzero_rational())
                                                : TauScalar::tau_power(1, make_rational(1, g.integer(2, 5)))));
            t.expect(!torelli_equal(a, c), "non-integral shift detected as equal");
            auto e = b;
            e.set(i, j, b.at(i, j) + TauScalar::tau_power(2, g.nonzero_rational()));
            t.expect(!torelli_equal(a, e), "tau^2 shift detected as equal");
        }
        return std::string();
    }));
    return out;
}

inline std::string format_check(const CheckResult& r)
{
    std::ostringstream s;
    s << (r.passed ? "PASS" : "FAIL") << "  [" << (r.id < 10 ? " " : "") << r.id << "] " << r.name << " ("
      << static_cast<long>(r.seconds * 1000) << " ms of " << r.budget << " s; " << r.detail << ")";
    return s.str();
}

} // namespace shodge
