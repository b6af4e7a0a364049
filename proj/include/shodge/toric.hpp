#pragma once

#include "exterior.hpp"
#include "mhs.hpp"

#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

namespace shodge {

// Invariant dlog-monomials of a fixed parity, ordered by degree then lexicographically.
class KBasis {
public:
    KBasis(int n, int parity) : n_(n), parity_(parity & 1)
    {
        for (int m = parity_; m <= n; m += 2) {
            for (IndexSet I = 0; I <= TorusContext(n).top(); ++I) {
                if (degree_of(I) == m) {
                    index_.emplace(I, sets_.size());
                    sets_.push_back(I);
                }
            }
        }
    }

    int n() const { return n_; }
    int parity() const { return parity_; }
    std::size_t size() const { return sets_.size(); }
    IndexSet operator[](std::size_t i) const { return sets_[i]; }
    const std::vector<IndexSet>& sets() const { return sets_; }
    bool contains(IndexSet I) const { return index_.count(I) != 0; }
    std::size_t position(IndexSet I) const
    {
        auto it = index_.find(I);
        if (it == index_.end()) {
            throw domain_error("form degree does not match the K-theory parity");
        }
        return it->second;
    }
    // Lowest and highest block degrees.
    int min_degree() const { return parity_; }
    int max_degree() const { return (n_ - parity_) % 2 == 0 ? n_ : n_ - 1; }

    std::vector<TauFraction> coordinates(const LogForm& f) const
    {
        if (!f.is_invariant()) {
            throw domain_error("expected an invariant form");
        }
        std::vector<TauFraction> v(size(), TauFraction());
        for (auto& [key, c] : f.terms()) {
            v[position(key.indices)] = c;
        }
        return v;
    }
    LogForm form(const std::vector<TauFraction>& v) const
    {
        LogForm f(TorusContext{n_});
        for (std::size_t i = 0; i < size(); ++i) {
            if (!v[i].is_zero()) {
                f += LogForm::dlog(TorusContext{n_}, sets_[i], v[i]);
            }
        }
        return f;
    }

private:
    int n_;
    int parity_;
    std::vector<IndexSet> sets_;
    std::map<IndexSet, std::size_t> index_;
};

struct ToricPoissonStructure {
    int n = 0;
    Matrix<TauScalar> lambda; // entries above the diagonal are used

    explicit ToricPoissonStructure(int dim) : n(dim), lambda(dim, dim) {}
    ToricPoissonStructure(int dim, Matrix<TauScalar> l) : n(dim), lambda(std::move(l))
    {
        if (lambda.rows() != static_cast<std::size_t>(n) || lambda.cols() != static_cast<std::size_t>(n)) {
            throw std::invalid_argument("lambda matrix must be n x n");
        }
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j <= i; ++j) {
                if (!lambda(i, j).is_zero()) {
                    throw std::invalid_argument("lambda must be strictly upper triangular");
                }
            }
        }
    }

    const TauScalar& at(int i, int j) const { return lambda(i, j); }
    void set(int i, int j, const TauScalar& v)
    {
        if (i >= j) {
            throw std::invalid_argument("lambda index must satisfy i < j");
        }
        lambda(i, j) = v;
    }
    std::vector<std::pair<int, int>> pairs() const
    {
        std::vector<std::pair<int, int>> p;
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                p.emplace_back(i, j);
            }
        }
        return p;
    }
    TorusContext context() const { return TorusContext{n}; }
    // sigma = sum_{i<j} lambda_ij e_i ^ e_j
    Polyvector bivector() const
    {
        Polyvector s(context());
        for (auto [i, j] : pairs()) {
            if (!lambda(i, j).is_zero()) {
                s.add(index_set({i, j}), TauFraction(lambda(i, j)));
            }
        }
        return s;
    }
    ToricPoissonStructure scaled(const TauScalar& hbar) const
    {
        return ToricPoissonStructure(n, lambda.map([&](const TauScalar& x) { return x * hbar; }));
    }
    friend bool operator==(const ToricPoissonStructure& a, const ToricPoissonStructure& b)
    {
        return a.n == b.n && a.lambda == b.lambda;
    }
};

// e^{iota_sigma} with u specialized to 1.
inline LogForm exp_contract(const Polyvector& sigma, const LogForm& f)
{
    LogForm result = f, term = f;
    for (long m = 1; !term.is_zero(); ++m) {
        term = (TauFraction(1) / TauFraction(m)) * contract(sigma, term);
        result += term;
    }
    return result;
}

// In K-degree d the exterior block of degree m sits at u-level (d + m) / 2.
inline int block_level(int degree, int m) { return (degree + m) / 2; }

inline Filtration poisson_hodge_flag(const Polyvector& sigma, int degree)
{
    require_bivector(sigma);
    int n = sigma.context().n;
    KBasis basis(n, degree);
    int lo = block_level(degree, basis.min_degree());
    int hi = block_level(degree, basis.max_degree());
    std::vector<Subspace> steps;
    for (int p = lo; p <= hi; ++p) {
        std::vector<std::vector<TauFraction>> gens;
        for (IndexSet I : basis.sets()) {
            if (degree_of(I) >= 2 * p - degree) {
                gens.push_back(basis.coordinates(exp_contract(sigma, LogForm::dlog(sigma.context(), I))));
            }
        }
        steps.push_back(Subspace(basis.size(), gens));
    }
    return Filtration(Filtration::Kind::decreasing, basis.size(), lo, std::move(steps));
}

inline Filtration poisson_hodge_flag(const ToricPoissonStructure& s, int degree)
{
    return poisson_hodge_flag(s.bivector(), degree);
}

struct ToricKMhs {
    int n = 0;
    int degree = 0;
    KBasis basis;
    MixedHodgeStructure mhs;

    int parity() const { return basis.parity(); }
    // Lattice coordinates of the exterior block of degree m.
    std::vector<std::size_t> block(int m) const
    {
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < basis.size(); ++i) {
            if (degree_of(basis[i]) == m) {
                idx.push_back(i);
            }
        }
        return idx;
    }
};

// Sign relating l_{i1} ^ ... ^ l_{im} to the reversed dlog-monomial.
inline int reversal_sign(int m) { return (m * (m - 1) / 2) % 2 ? -1 : 1; }

inline ToricKMhs build_toric_k_mhs(const Polyvector& sigma, int degree)
{
    int n = sigma.context().n;
    KBasis basis(n, degree);
    std::size_t N = basis.size();
    Matrix<TauScalar> c(N, N);
    for (std::size_t i = 0; i < N; ++i) {
        int m = degree_of(basis[i]);
        c(i, i) = TauScalar::tau_power(-block_level(degree, m), Rational(reversal_sign(m)));
    }
    int lo = block_level(degree, basis.min_degree()), hi = block_level(degree, basis.max_degree());
    std::vector<Subspace> wsteps;
    for (int k = 2 * lo; k <= 2 * hi; ++k) {
        std::vector<std::vector<TauFraction>> rows;
        for (std::size_t i = 0; i < N; ++i) {
            if (2 * block_level(degree, degree_of(basis[i])) <= k) {
                std::vector<TauFraction> e(N, TauFraction());
                e[i] = 1;
                rows.push_back(std::move(e));
            }
        }
        wsteps.push_back(Subspace(N, rows));
    }
    MixedHodgeStructure m{FgAbGroup::free(N), c, Filtration(Filtration::Kind::increasing, N, 2 * lo, std::move(wsteps)),
                          poisson_hodge_flag(sigma, degree)};
    return {n, degree, basis, std::move(m)};
}

inline ToricKMhs build_toric_k_mhs(const ToricPoissonStructure& s, int degree)
{
    return build_toric_k_mhs(s.bivector(), degree);
}

// hbar acts on the degree (2j + parity) block by hbar^{-j}.
inline std::vector<TauFraction> adams_scale(const TauFraction& hbar, const std::vector<TauFraction>& v,
                                            const KBasis& basis)
{
    std::vector<TauFraction> out(v.size(), TauFraction());
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i].is_zero()) {
            continue;
        }
        int j = (degree_of(basis[i]) - basis.parity()) / 2;
        if (j == 0) {
            out[i] = v[i];
            continue;
        }
        if (hbar.is_zero()) {
            throw domain_error("hbar = 0 on a component of negative Adams weight");
        }
        TauFraction f = 1;
        for (int k = 0; k < j; ++k) {
            f *= hbar;
        }
        out[i] = f.inverse() * v[i];
    }
    return out;
}

inline Subspace adams_scale(const TauFraction& hbar, const Subspace& s, const KBasis& basis)
{
    if (hbar.is_zero()) {
        throw domain_error("Adams action on subspaces needs an invertible hbar");
    }
    std::vector<std::vector<TauFraction>> rows;
    for (auto& r : s.rows()) {
        rows.push_back(adams_scale(hbar, r, basis));
    }
    return Subspace(s.ambient(), rows);
}

inline Filtration adams_scale(const TauFraction& hbar, const Filtration& f, const KBasis& basis)
{
    std::vector<Subspace> steps;
    for (auto& s : f.steps()) {
        steps.push_back(adams_scale(hbar, s, basis));
    }
    return Filtration(f.kind(), f.ambient(), f.lo(), std::move(steps));
}

// Adams-graded extension between the degree m and m + 2 blocks: W_{2a+2} / W_{2a-2}, split at W_{2a}.
inline JacobianElement adams_graded_class(const ToricKMhs& k, int m)
{
    auto low = k.block(m), high = k.block(m + 2);
    if (low.empty() || high.empty()) {
        throw domain_error("no Adams-graded pieces in the requested degrees");
    }
    std::size_t N = k.basis.size();
    auto unit_rows = [&](const std::vector<std::size_t>& idx) {
        IntMatrix r(idx.size(), N);
        for (std::size_t t = 0; t < idx.size(); ++t) {
            r(t, idx[t]) = 1;
        }
        return r;
    };
    std::vector<std::size_t> upto, below;
    for (std::size_t i = 0; i < N; ++i) {
        int d = degree_of(k.basis[i]);
        if (d <= m + 2) {
            upto.push_back(i);
        }
        if (d < m) {
            below.push_back(i);
        }
    }
    auto w = sub_structure(k.mhs, unit_rows(upto));
    // Coordinates inside W_{2a+2} follow the order of `upto`.
    auto local = [&](const std::vector<std::size_t>& idx) {
        IntMatrix r(idx.size(), upto.size());
        for (std::size_t t = 0; t < idx.size(); ++t) {
            r(t, static_cast<std::size_t>(std::find(upto.begin(), upto.end(), idx[t]) - upto.begin())) = 1;
        }
        return r;
    };
    std::vector<std::size_t> kept = low;
    kept.insert(kept.end(), high.begin(), high.end());
    auto piece = below.empty() ? QuotientStructure{w.mhs, IntMatrix::identity(upto.size())}
                               : quotient_structure(w.mhs, local(below), local(kept));
    std::size_t a = low.size(), b = high.size();
    IntMatrix sub(a, a + b), comp(b, a + b);
    for (std::size_t t = 0; t < a; ++t) {
        sub(t, t) = 1;
    }
    for (std::size_t t = 0; t < b; ++t) {
        comp(t, a + t) = 1;
    }
    auto s = sub_structure(piece.mhs, sub);
    auto q = quotient_structure(piece.mhs, sub, comp);
    return carlson_class(s.mhs, piece.mhs, q.mhs, s.inclusion, q.projection);
}

// Exp-valued Adams-graded parameters: block (m -> m + 2) to its C(n,m) x C(n,m+2) matrix.
inline std::map<int, Matrix<ExpValue>> adams_parameters(const ToricPoissonStructure& s, int degree)
{
    auto k = build_toric_k_mhs(s, degree);
    std::map<int, Matrix<ExpValue>> out;
    for (int m = k.basis.min_degree(); m + 2 <= k.basis.max_degree(); m += 2) {
        out.emplace(m, to_exp_values(adams_graded_class(k, m)));
    }
    return out;
}

// Expected Adams-graded parameters read off from iota_sigma in lattice coordinates.
inline Matrix<ExpValue> contraction_parameters(const ToricPoissonStructure& s, int m)
{
    KBasis basis(s.n, m);
    std::vector<IndexSet> low, high;
    for (IndexSet I : basis.sets()) {
        if (degree_of(I) == m) {
            low.push_back(I);
        }
        if (degree_of(I) == m + 2) {
            high.push_back(I);
        }
    }
    Matrix<ExpValue> out(low.size(), high.size());
    Polyvector sigma = s.bivector();
    for (std::size_t c = 0; c < high.size(); ++c) {
        LogForm img = contract(sigma, LogForm::dlog(s.context(), high[c]));
        for (std::size_t r = 0; r < low.size(); ++r) {
            TauFraction x = img.invariant_coeff(low[r]) *
                            TauFraction(reversal_sign(m + 2) * reversal_sign(m));
            out(r, c) = ExpValue(x.numerator());
        }
    }
    return out;
}

// (Exp(lambda_ij))_{i<j}, cross-checked against the Carlson class of W_2 K^0.
inline std::map<std::pair<int, int>, ExpValue> quantum_parameter(const ToricPoissonStructure& s)
{
    std::map<std::pair<int, int>, ExpValue> q;
    for (auto [i, j] : s.pairs()) {
        q.emplace(std::make_pair(i, j), ExpValue(s.at(i, j)));
    }
    if (s.n < 2) {
        return q;
    }
    auto k = build_toric_k_mhs(s, 0);
    auto ext = to_exp_values(adams_graded_class(k, 0));
    auto high = k.block(2);
    for (std::size_t c = 0; c < high.size(); ++c) {
        auto js = members(k.basis[high[c]]);
        if (!(ext(0, c) == q.at({js[0], js[1]}))) {
            throw std::logic_error("quantum parameter: Carlson class disagrees with exp(lambda)");
        }
    }
    return q;
}

inline bool torelli_equal(const ToricPoissonStructure& a, const ToricPoissonStructure& b)
{
    if (a.n != b.n) {
        throw domain_error("Torelli comparison of tori of different dimension");
    }
    for (auto [i, j] : a.pairs()) {
        if (!exp_equal(ExpValue(a.at(i, j)), ExpValue(b.at(i, j)))) {
            return false;
        }
    }
    return true;
}

struct ZeroObstruction {
    std::map<std::pair<int, int>, TauScalar> values; // chi_dR(beta_ji)
    bool is_morphism = true;
};

namespace detail {

// Row-reduced basis of F with pivots in the highest-degree coordinates.
inline std::vector<std::vector<TauFraction>> top_normalized(const Subspace& f, const KBasis& basis)
{
    std::size_t N = basis.size();
    std::vector<std::size_t> order(N);
    for (std::size_t i = 0; i < N; ++i) {
        order[i] = N - 1 - i;
    }
    Matrix<TauFraction> perm(f.dim(), N);
    for (std::size_t r = 0; r < f.dim(); ++r) {
        for (std::size_t c = 0; c < N; ++c) {
            perm(r, c) = f.basis()(r, order[c]);
        }
    }
    auto red = rref(perm).first;
    std::vector<std::vector<TauFraction>> out;
    for (std::size_t r = 0; r < red.rows(); ++r) {
        std::vector<TauFraction> v(N, TauFraction());
        for (std::size_t c = 0; c < N; ++c) {
            v[order[c]] = red(r, c);
        }
        out.push_back(std::move(v));
    }
    return out;
}

} // namespace detail

inline ZeroObstruction zero_obstruction(const ToricPoissonStructure& s)
{
    ZeroObstruction z;
    if (s.n < 2) {
        return z;
    }
    KBasis basis(s.n, 0);
    auto f1 = poisson_hodge_flag(s, 0).at(1);
    for (auto& v : detail::top_normalized(f1, basis)) {
        std::size_t lead = 0;
        while (lead < v.size() && v[basis.size() - 1 - lead].is_zero()) {
            ++lead;
        }
        IndexSet I = basis[basis.size() - 1 - lead];
        if (degree_of(I) != 2) {
            continue;
        }
        // beta_ji = dlog x_j ^ dlog x_i + ... = -(normalized generator).
        TauFraction chi = -v[basis.position(0)];
        if (!chi.is_laurent()) {
            throw std::logic_error("zero obstruction: non-polynomial degree-0 component");
        }
        auto js = members(I);
        z.values.emplace(std::make_pair(js[0], js[1]), chi.numerator());
        z.is_morphism = z.is_morphism && chi.is_zero();
    }
    return z;
}

// grF^p -> grF^{p-1} induced by d/dhbar at 0 of the family F_{hbar sigma}; matrix rows index gr^p.
struct InfinitesimalPeriod {
    int degree = 0;
    std::map<int, Matrix<TauFraction>> maps; // p -> (basis of gr^p) x (basis of gr^{p-1})
    std::map<int, std::vector<IndexSet>> graded_basis;
};

inline InfinitesimalPeriod infinitesimal_period(const ToricPoissonStructure& s, int degree)
{
    KBasis basis(s.n, degree);
    std::size_t N = basis.size();
    InfinitesimalPeriod out;
    out.degree = degree;
    int lo = block_level(degree, basis.min_degree()), hi = block_level(degree, basis.max_degree());
    for (int p = lo; p <= hi; ++p) {
        std::vector<IndexSet> g;
        for (IndexSet I : basis.sets()) {
            if (degree_of(I) == 2 * p - degree) {
                g.push_back(I);
            }
        }
        out.graded_basis[p] = g;
    }
    // Sample F_{hbar sigma} at hbar = 0..D and interpolate each normalized generator.
    int D = s.n / 2 + 1;
    std::vector<std::map<int, std::vector<std::vector<TauFraction>>>> samples;
    for (int h = 0; h <= D; ++h) {
        auto flag = poisson_hodge_flag(s.scaled(TauScalar(h)), degree);
        std::map<int, std::vector<std::vector<TauFraction>>> per_p;
        for (int p = lo; p <= hi; ++p) {
            per_p[p] = detail::top_normalized(flag.at(p), basis);
        }
        samples.push_back(std::move(per_p));
    }
    Matrix<TauFraction> vander(D + 1, D + 1);
    for (int h = 0; h <= D; ++h) {
        TauFraction x = 1;
        for (int e = 0; e <= D; ++e) {
            vander(h, e) = x;
            x *= TauFraction(h);
        }
    }
    auto vinv = *inverse(vander);
    for (int p = lo + 1; p <= hi; ++p) {
        const auto& src = out.graded_basis[p];
        const auto& dst = out.graded_basis[p - 1];
        Matrix<TauFraction> m(src.size(), dst.size());
        // Generators of F^p in top-normalized order: the gr^p ones are those with pivot of degree 2p - degree.
        const auto& gens0 = samples[0].at(p);
        for (std::size_t g = 0; g < gens0.size(); ++g) {
            std::size_t piv = N;
            for (std::size_t c = N; c-- > 0;) {
                if (!gens0[g][c].is_zero()) {
                    piv = c;
                    break;
                }
            }
            auto it = std::find(src.begin(), src.end(), basis[piv]);
            if (it == src.end()) {
                continue;
            }
            std::size_t row = static_cast<std::size_t>(it - src.begin());
            for (std::size_t c = 0; c < dst.size(); ++c) {
                std::size_t col = basis.position(dst[c]);
                std::vector<TauFraction> ys(D + 1);
                for (int h = 0; h <= D; ++h) {
                    ys[h] = samples[h].at(p)[g][col];
                }
                TauFraction slope;
                for (int h = 0; h <= D; ++h) {
                    slope += vinv(1, h) * ys[h];
                }
                m(row, c) = slope;
            }
        }
        out.maps.emplace(p, std::move(m));
    }
    return out;
}

} // namespace shodge
