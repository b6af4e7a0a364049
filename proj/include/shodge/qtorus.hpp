#pragma once

#include "toric.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

namespace shodge {

struct QTorusParams {
    int n = 0;
    Matrix<TauScalar> log_lift; // lambda_ij above the diagonal

    explicit QTorusParams(int dim) : n(dim), log_lift(dim, dim) {}
    QTorusParams(int dim, Matrix<TauScalar> l) : n(dim), log_lift(ToricPoissonStructure(dim, std::move(l)).lambda) {}
    explicit QTorusParams(const ToricPoissonStructure& s) : n(s.n), log_lift(s.lambda) {}

    // Skew-symmetric extension.
    TauScalar lambda(int i, int j) const
    {
        if (i == j) {
            return TauScalar();
        }
        return i < j ? log_lift(i, j) : -log_lift(j, i);
    }
    ExpValue q(int i, int j) const { return ExpValue(lambda(i, j)); }
    ToricPoissonStructure poisson() const { return ToricPoissonStructure(n, log_lift); }

    friend bool operator==(const QTorusParams& a, const QTorusParams& b)
    {
        return a.n == b.n && a.log_lift == b.log_lift;
    }
};

// Finite sum of c * Exp(mu).
class QCoeff {
public:
    using Terms = std::map<ExpValue, TauFraction>;

    QCoeff() = default;
    QCoeff(const TauFraction& c) { add(ExpValue(), c); }
    QCoeff(long c) : QCoeff(TauFraction(c)) {}
    static QCoeff exp(const ExpValue& e, const TauFraction& c = 1)
    {
        QCoeff q;
        q.add(e, c);
        return q;
    }

    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void add(const ExpValue& e, const TauFraction& c)
    {
        if (c.is_zero()) {
            return;
        }
        auto it = terms_.find(e);
        if (it == terms_.end()) {
            terms_.emplace(e, c);
            return;
        }
        it->second += c;
        if (it->second.is_zero()) {
            terms_.erase(it);
        }
    }

    friend QCoeff operator+(QCoeff a, const QCoeff& b)
    {
        for (auto& [e, c] : b.terms_) {
            a.add(e, c);
        }
        return a;
    }
    friend QCoeff operator-(const QCoeff& a)
    {
        QCoeff r;
        for (auto& [e, c] : a.terms_) {
            r.add(e, -c);
        }
        return r;
    }
    friend QCoeff operator-(const QCoeff& a, const QCoeff& b) { return a + (-b); }
    friend QCoeff operator*(const QCoeff& a, const QCoeff& b)
    {
        QCoeff r;
        for (auto& [e, c] : a.terms_) {
            for (auto& [f, d] : b.terms_) {
                r.add(e * f, c * d);
            }
        }
        return r;
    }
    QCoeff& operator+=(const QCoeff& o) { return *this = *this + o; }
    friend bool operator==(const QCoeff& a, const QCoeff& b) { return a.terms_ == b.terms_; }

private:
    Terms terms_;
};

inline std::string to_string(const QCoeff& q)
{
    if (q.is_zero()) {
        return "0";
    }
    std::string s;
    for (auto& [e, c] : q.terms()) {
        if (!s.empty()) {
            s += " + ";
        }
        s += "(" + to_string(c) + ")";
        if (!e.is_identity()) {
            s += "*" + to_string(e);
        }
    }
    return s;
}

using Exponent = std::vector<long>;

class QTorusElement {
public:
    using Terms = std::map<Exponent, QCoeff>;

    explicit QTorusElement(QTorusParams p) : params_(std::move(p)) {}
    static QTorusElement monomial(const QTorusParams& p, Exponent k, const QCoeff& c = 1)
    {
        QTorusElement a(p);
        a.add(std::move(k), c);
        return a;
    }
    static QTorusElement generator(const QTorusParams& p, int i, long power = 1)
    {
        Exponent k(static_cast<std::size_t>(p.n), 0);
        k.at(static_cast<std::size_t>(i)) = power;
        return monomial(p, k);
    }

    const QTorusParams& params() const { return params_; }
    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void add(Exponent k, const QCoeff& c)
    {
        if (k.size() != static_cast<std::size_t>(params_.n)) {
            throw std::invalid_argument("monomial exponent of wrong length");
        }
        if (c.is_zero()) {
            return;
        }
        auto it = terms_.find(k);
        if (it == terms_.end()) {
            terms_.emplace(std::move(k), c);
            return;
        }
        it->second += c;
        if (it->second.is_zero()) {
            terms_.erase(it);
        }
    }

    void check(const QTorusElement& o) const
    {
        if (!(params_ == o.params_)) {
            throw domain_error("quantum torus elements with different parameters");
        }
    }

    friend QTorusElement operator+(QTorusElement a, const QTorusElement& b)
    {
        a.check(b);
        for (auto& [k, c] : b.terms_) {
            a.add(k, c);
        }
        return a;
    }
    friend QTorusElement operator-(const QTorusElement& a)
    {
        QTorusElement r(a.params_);
        for (auto& [k, c] : a.terms_) {
            r.add(k, -c);
        }
        return r;
    }
    friend QTorusElement operator-(const QTorusElement& a, const QTorusElement& b) { return a + (-b); }
    friend QTorusElement operator*(const QCoeff& s, const QTorusElement& a)
    {
        QTorusElement r(a.params_);
        for (auto& [k, c] : a.terms_) {
            r.add(k, s * c);
        }
        return r;
    }
    friend bool operator==(const QTorusElement& a, const QTorusElement& b)
    {
        return a.params_ == b.params_ && a.terms_ == b.terms_;
    }

private:
    QTorusParams params_;
    Terms terms_;
};

// Exp(sum_{i>j} k_i m_j lambda_ij): the cocycle of x^k x^m.
inline ExpValue monomial_cocycle(const QTorusParams& p, const Exponent& k, const Exponent& m)
{
    TauScalar s;
    for (int i = 0; i < p.n; ++i) {
        for (int j = 0; j < i; ++j) {
            long e = k[static_cast<std::size_t>(i)] * m[static_cast<std::size_t>(j)];
            if (e != 0) {
                s += p.lambda(i, j) * TauScalar(e);
            }
        }
    }
    return ExpValue(s);
}

inline Exponent exponent_sum(const Exponent& a, const Exponent& b)
{
    Exponent r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        r[i] = a[i] + b[i];
    }
    return r;
}

inline bool is_unit_exponent(const Exponent& k)
{
    for (long e : k) {
        if (e != 0) {
            return false;
        }
    }
    return true;
}

inline QTorusElement qt_mul(const QTorusElement& a, const QTorusElement& b)
{
    a.check(b);
    QTorusElement r(a.params());
    for (auto& [k, c] : a.terms()) {
        for (auto& [m, d] : b.terms()) {
            r.add(exponent_sum(k, m), QCoeff::exp(monomial_cocycle(a.params(), k, m)) * c * d);
        }
    }
    return r;
}

inline QTorusElement qt_derivation(int i, const QTorusElement& a)
{
    if (i < 0 || i >= a.params().n) {
        throw domain_error("derivation index out of range");
    }
    QTorusElement r(a.params());
    for (auto& [k, c] : a.terms()) {
        r.add(k, QCoeff(TauFraction(k[static_cast<std::size_t>(i)])) * c);
    }
    return r;
}

inline QCoeff qt_trace(const QTorusElement& a)
{
    auto it = a.terms().find(Exponent(static_cast<std::size_t>(a.params().n), 0));
    return it == a.terms().end() ? QCoeff() : it->second;
}

// Normalized Hochschild chains: tensors of monomials, unit entries in slots >= 1 dropped.
class Chain {
public:
    using Key = std::vector<Exponent>;
    using Terms = std::map<Key, QCoeff>;

    Chain(QTorusParams p, int degree) : params_(std::move(p)), degree_(degree) {}
    static Chain elementary(const std::vector<QTorusElement>& factors)
    {
        if (factors.empty()) {
            throw std::invalid_argument("chain needs at least one tensor factor");
        }
        Chain c(factors.front().params(), static_cast<int>(factors.size()) - 1);
        std::vector<std::pair<Key, QCoeff>> partial{{Key{}, QCoeff(1)}};
        for (auto& f : factors) {
            factors.front().check(f);
            std::vector<std::pair<Key, QCoeff>> next;
            for (auto& [key, coef] : partial) {
                for (auto& [k, x] : f.terms()) {
                    Key nk = key;
                    nk.push_back(k);
                    next.emplace_back(std::move(nk), coef * x);
                }
            }
            partial = std::move(next);
        }
        for (auto& [key, coef] : partial) {
            c.add(key, coef);
        }
        return c;
    }

    const QTorusParams& params() const { return params_; }
    int degree() const { return degree_; }
    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void add(const Key& key, const QCoeff& c)
    {
        if (key.size() != static_cast<std::size_t>(degree_ + 1)) {
            throw std::invalid_argument("chain term of wrong degree");
        }
        for (std::size_t s = 1; s < key.size(); ++s) {
            if (is_unit_exponent(key[s])) {
                return;
            }
        }
        if (c.is_zero()) {
            return;
        }
        auto it = terms_.find(key);
        if (it == terms_.end()) {
            terms_.emplace(key, c);
            return;
        }
        it->second += c;
        if (it->second.is_zero()) {
            terms_.erase(it);
        }
    }

    friend Chain operator+(Chain a, const Chain& b)
    {
        if (a.degree_ != b.degree_ || !(a.params_ == b.params_)) {
            throw domain_error("adding chains of different degree or parameters");
        }
        for (auto& [k, c] : b.terms_) {
            a.add(k, c);
        }
        return a;
    }
    friend Chain operator*(const QCoeff& s, const Chain& a)
    {
        Chain r(a.params_, a.degree_);
        for (auto& [k, c] : a.terms_) {
            r.add(k, s * c);
        }
        return r;
    }
    friend bool operator==(const Chain& a, const Chain& b)
    {
        return a.degree_ == b.degree_ && a.params_ == b.params_ && a.terms_ == b.terms_;
    }

private:
    QTorusParams params_;
    int degree_;
    Terms terms_;
};

inline Chain hochschild_b(const Chain& c)
{
    int k = c.degree();
    if (k == 0) {
        return Chain(c.params(), 0);
    }
    Chain r(c.params(), k - 1);
    const auto& p = c.params();
    for (auto& [key, coef] : c.terms()) {
        for (int i = 0; i < k; ++i) {
            Chain::Key nk;
            for (int s = 0; s < i; ++s) {
                nk.push_back(key[s]);
            }
            nk.push_back(exponent_sum(key[i], key[i + 1]));
            for (int s = i + 2; s <= k; ++s) {
                nk.push_back(key[s]);
            }
            QCoeff f = QCoeff::exp(monomial_cocycle(p, key[i], key[i + 1]), i % 2 ? -1 : 1);
            r.add(nk, f * coef);
        }
        Chain::Key nk{exponent_sum(key[k], key[0])};
        for (int s = 1; s < k; ++s) {
            nk.push_back(key[s]);
        }
        QCoeff f = QCoeff::exp(monomial_cocycle(p, key[k], key[0]), k % 2 ? -1 : 1);
        r.add(nk, f * coef);
    }
    return r;
}

inline Chain connes_B(const Chain& c)
{
    int k = c.degree();
    Chain r(c.params(), k + 1);
    Exponent unit(static_cast<std::size_t>(c.params().n), 0);
    for (auto& [key, coef] : c.terms()) {
        for (int i = 0; i <= k; ++i) {
            Chain::Key nk{unit};
            for (int s = i; s <= k; ++s) {
                nk.push_back(key[s]);
            }
            for (int s = 0; s < i; ++s) {
                nk.push_back(key[s]);
            }
            r.add(nk, ((i * k) % 2 ? QCoeff(-1) : QCoeff(1)) * coef);
        }
    }
    return r;
}

// (1/k!) tau(a_0 * sum_pi sgn(pi) xi_{pi(1)}(a_1) ... xi_{pi(k)}(a_k)) for xi = e_{j_1} ^ ... ^ e_{j_k}.
inline QCoeff hkr_pairing(const Polyvector& xi, const Chain& c)
{
    int k = c.degree();
    if (xi.context().n != c.params().n) {
        throw domain_error("polyvector and chain live on different tori");
    }
    if (!xi.has_pure_degree(k)) {
        throw domain_error("pairing degree mismatch");
    }
    Rational kfact = factorial_rational(k);
    QCoeff total;
    const auto& p = c.params();
    for (auto& [key, coef] : c.terms()) {
        Exponent sum = key[0];
        ExpValue cocycle;
        for (int s = 1; s <= k; ++s) {
            cocycle = cocycle * monomial_cocycle(p, sum, key[s]);
            sum = exponent_sum(sum, key[s]);
        }
        if (!is_unit_exponent(sum)) {
            continue;
        }
        for (auto& [J, xc] : xi.terms()) {
            auto js = members(J);
            IntMatrix m(static_cast<std::size_t>(k), static_cast<std::size_t>(k));
            for (int i = 0; i < k; ++i) {
                for (int t = 0; t < k; ++t) {
                    m(i, t) = key[t + 1][static_cast<std::size_t>(js[i])];
                }
            }
            Integer det = determinant(m);
            if (det == 0) {
                continue;
            }
            TauFraction f = xc * TauFraction(Rational(det) / kfact);
            total += QCoeff::exp(cocycle, f) * coef;
        }
    }
    return total;
}

inline bool centre_membership(const Exponent& k, const QTorusParams& p)
{
    for (int l = 0; l < p.n; ++l) {
        TauScalar s;
        for (int i = 0; i < p.n; ++i) {
            if (k[static_cast<std::size_t>(i)] != 0) {
                s += p.lambda(l, i) * TauScalar(k[static_cast<std::size_t>(i)]);
            }
        }
        if (!ExpValue(s).is_identity()) {
            return false;
        }
    }
    return true;
}

// Lattice basis (rows) of the central exponents when every q_ij is a root of unity.
inline IntMatrix centre_generators_torsion(const QTorusParams& p)
{
    std::size_t n = static_cast<std::size_t>(p.n);
    Matrix<Rational> r(n, n);
    Integer N = 1;
    for (std::size_t l = 0; l < n; ++l) {
        for (std::size_t i = 0; i < n; ++i) {
            TauScalar x = p.lambda(static_cast<int>(l), static_cast<int>(i));
            if (!(x == TauScalar::tau_power(1, x.coeff(1)))) {
                throw domain_error("centre lattice needs every q_ij to be a root of unity");
            }
            r(l, i) = x.coeff(1);
            N = lcm(N, r(l, i).get_den());
        }
    }
    // Solve sum_i N r_li k_i + N y_l = 0 over the integers and keep k.
    IntMatrix sys(n, 2 * n);
    for (std::size_t l = 0; l < n; ++l) {
        for (std::size_t i = 0; i < n; ++i) {
            sys(l, i) = Rational(r(l, i) * Rational(N)).get_num();
        }
        sys(l, n + l) = N;
    }
    IntMatrix ker = integer_kernel(sys);
    IntMatrix ks(ker.rows(), n);
    for (std::size_t a = 0; a < ker.rows(); ++a) {
        for (std::size_t i = 0; i < n; ++i) {
            ks(a, i) = ker(a, i);
        }
    }
    return lattice_basis(ks);
}

// exp(P) for a bivector P / u, stored by u-power: u^{-m} -> P^m / m!.
class ConnectionOperator {
public:
    explicit ConnectionOperator(TorusContext ctx) : ctx_(ctx) { terms_.emplace(0, Polyvector::frame(ctx, 0)); }
    static ConnectionOperator exp_over_u(const Polyvector& sigma)
    {
        require_bivector(sigma);
        ConnectionOperator op(sigma.context());
        Polyvector power = Polyvector::frame(sigma.context(), 0);
        for (int m = 1;; ++m) {
            power = (TauFraction(1) / TauFraction(m)) * wedge(power, sigma);
            if (power.is_zero()) {
                break;
            }
            op.terms_.emplace(-m, power);
        }
        return op;
    }

    const TorusContext& context() const { return ctx_; }
    const std::map<int, Polyvector>& terms() const { return terms_; }

    PeriodicForm apply(const PeriodicForm& w) const
    {
        require_same(ctx_, w.context());
        PeriodicForm r(ctx_);
        for (auto& [m, p] : terms_) {
            r = r + contract(p, w).u_shifted(m);
        }
        return r;
    }

    friend ConnectionOperator operator*(const ConnectionOperator& a, const ConnectionOperator& b)
    {
        require_same(a.ctx_, b.ctx_);
        ConnectionOperator r(a.ctx_);
        r.terms_.clear();
        for (auto& [m, p] : a.terms_) {
            for (auto& [k, q] : b.terms_) {
                Polyvector prod = wedge(p, q);
                auto it = r.terms_.find(m + k);
                if (it == r.terms_.end()) {
                    r.terms_.emplace(m + k, prod);
                } else {
                    it->second = it->second + prod;
                }
            }
        }
        for (auto it = r.terms_.begin(); it != r.terms_.end();) {
            it = it->second.is_zero() ? r.terms_.erase(it) : std::next(it);
        }
        return r;
    }

    // 1 + nilpotent, each u^{-m} term of pure degree 2m (so W is preserved).
    bool is_unipotent() const
    {
        for (auto& [m, p] : terms_) {
            if (m > 0 || !p.has_pure_degree(-2 * m)) {
                return false;
            }
            if (m == 0 && !(p == Polyvector::frame(ctx_, 0))) {
                return false;
            }
        }
        return terms_.count(0) == 1;
    }

    friend bool operator==(const ConnectionOperator& a, const ConnectionOperator& b)
    {
        return a.ctx_ == b.ctx_ && a.terms_ == b.terms_;
    }

private:
    TorusContext ctx_;
    std::map<int, Polyvector> terms_;
};

inline ConnectionOperator gauss_manin_transport(const QTorusParams& p)
{
    return ConnectionOperator::exp_over_u(p.poisson().bivector());
}

inline ConnectionOperator monodromy(int i, int j, int n)
{
    if (i < 0 || j >= n || i >= j) {
        throw domain_error("monodromy loop needs 1 <= i < j <= n");
    }
    QTorusParams p(n);
    p.log_lift(i, j) = TauScalar::tau();
    return gauss_manin_transport(p);
}

struct KLattice {
    ToricKMhs k;                         // comparison columns are the u = 1 images of the generators
    std::vector<PeriodicForm> generators; // flat sections tau^{-a} u^a dlog_I transported
};

// Parallel transport of the commutative lattice; F is the u-adic filtration, W the constant one.
inline KLattice k_lattice(const QTorusParams& p, int degree = 0)
{
    TorusContext ctx{p.n};
    KBasis basis(p.n, degree);
    std::size_t N = basis.size();
    auto op = gauss_manin_transport(p);
    KLattice out{build_toric_k_mhs(ToricPoissonStructure(p.n), degree), {}};
    Matrix<TauScalar> c(N, N);
    for (std::size_t col = 0; col < N; ++col) {
        IndexSet I = basis[col];
        int a = block_level(degree, degree_of(I));
        auto g = op.apply(PeriodicForm::at_level(a, LogForm::dlog(ctx, I, TauFraction(TauScalar::tau_power(-a)))));
        auto v = basis.coordinates(g.at_u_one());
        for (std::size_t row = 0; row < N; ++row) {
            if (!v[row].is_laurent()) {
                throw std::logic_error("transported lattice vector is not Laurent in tau");
            }
            c(row, col) = v[row].numerator();
        }
        out.generators.push_back(std::move(g));
    }
    out.k.mhs.comparison = c;
    return out;
}

// Matrix of an operator on the lattice: row r holds the coordinates of op(g_r) in the generators.
inline std::optional<IntMatrix> lattice_matrix(const ConnectionOperator& op, const KLattice& L)
{
    const auto& basis = L.k.basis;
    std::size_t N = basis.size();
    Matrix<TauFraction> G(N, N);
    for (std::size_t r = 0; r < N; ++r) {
        auto v = basis.coordinates(L.generators[r].at_u_one());
        for (std::size_t c = 0; c < N; ++c) {
            G(r, c) = v[c];
        }
    }
    auto Gt = G.transpose();
    IntMatrix out(N, N);
    for (std::size_t r = 0; r < N; ++r) {
        auto img = op.apply(L.generators[r]);
        for (auto& [j, f] : img.levels()) {
            for (auto& [key, c] : f.terms()) {
                if (block_level(L.k.degree, degree_of(key.indices)) != j) {
                    return std::nullopt;
                }
            }
        }
        auto x = solve(Gt, basis.coordinates(img.at_u_one()));
        if (!x) {
            return std::nullopt;
        }
        for (std::size_t c = 0; c < N; ++c) {
            if (!(*x)[c].is_rational() || !is_integer((*x)[c].rational_value())) {
                return std::nullopt;
            }
            out(r, c) = (*x)[c].rational_value().get_num();
        }
    }
    return out;
}

inline bool is_unipotent(const IntMatrix& m)
{
    std::size_t n = m.rows();
    IntMatrix nil = m - IntMatrix::identity(n);
    IntMatrix power = IntMatrix::identity(n);
    for (std::size_t i = 0; i < n; ++i) {
        power = power * nil;
    }
    return power == IntMatrix(n, n);
}

// Carlson class of W_2 K^0 of the transported lattice, per pair (i, j).
inline JacobianElement lattice_extension(const QTorusParams& p)
{
    return adams_graded_class(k_lattice(p, 0).k, 0);
}

inline std::map<std::pair<int, int>, ExpValue> extension_class(const QTorusParams& p)
{
    std::map<std::pair<int, int>, ExpValue> out;
    if (p.n < 2) {
        return out;
    }
    auto L = k_lattice(p, 0);
    auto ext = to_exp_values(adams_graded_class(L.k, 0));
    auto high = L.k.block(2);
    for (std::size_t c = 0; c < high.size(); ++c) {
        auto js = members(L.k.basis[high[c]]);
        ExpValue v = ext(0, c);
        if (!(v == p.q(js[0], js[1]))) {
            throw std::logic_error("extension class of the transported lattice disagrees with q");
        }
        out.emplace(std::make_pair(js[0], js[1]), v);
    }
    return out;
}

inline bool compare_with_poisson(const QTorusParams& p)
{
    return extension_class(p) == quantum_parameter(p.poisson());
}

struct TorsionHodgeClass {
    Integer order; // lcm of the orders of the q_ij
};

// Root-of-unity case: the class has exact order j. Otherwise no power up to `bound` is trivial.
inline std::optional<TorsionHodgeClass> hodge_class_torsion(const QTorusParams& p, int bound = 100)
{
    Integer j = 1;
    bool torsion = true;
    for (int a = 0; a < p.n; ++a) {
        for (int b = a + 1; b < p.n; ++b) {
            auto o = exp_torsion_order(p.q(a, b));
            if (!o) {
                torsion = false;
            } else {
                j = lcm(j, *o);
            }
        }
    }
    if (p.n < 2) {
        return TorsionHodgeClass{1};
    }
    auto cls = lattice_extension(p);
    if (torsion) {
        if (!is_identity(cls.times(j))) {
            throw std::logic_error("j-th power of a torsion extension class is not trivial");
        }
        for (Integer m = 1; m < j; ++m) {
            if (is_identity(cls.times(m))) {
                throw std::logic_error("torsion extension class has smaller order than expected");
            }
        }
        return TorsionHodgeClass{j};
    }
    for (int m = 1; m <= bound; ++m) {
        if (is_identity(cls.times(m))) {
            throw std::logic_error("non-torsion extension class has a trivial power");
        }
    }
    return std::nullopt;
}

} // namespace shodge
