#pragma once

#include "tau.hpp"

#include <bit>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace shodge {

// Subsets of {0..n-1} as bit masks; bit i stands for dlog x_{i+1} or e_{i+1}.
using IndexSet = std::uint32_t;

inline int degree_of(IndexSet s) { return std::popcount(s); }

inline std::vector<int> members(IndexSet s)
{
    std::vector<int> out;
    for (int i = 0; s >> i; ++i) {
        if ((s >> i) & 1U) {
            out.push_back(i);
        }
    }
    return out;
}

inline IndexSet index_set(const std::vector<int>& zero_based)
{
    IndexSet s = 0;
    for (int i : zero_based) {
        s |= IndexSet{1} << i;
    }
    return s;
}

// Sign of moving the sorted factors of b past those of a when forming a ^ b.
inline int wedge_sign(IndexSet a, IndexSet b)
{
    int swaps = 0;
    for (int j : members(b)) {
        swaps += std::popcount(a >> (j + 1));
    }
    return (swaps % 2 == 0) ? 1 : -1;
}

struct TorusContext {
    int n = 1;

    explicit TorusContext(int dim) : n(dim)
    {
        if (dim < 1 || dim > 30) {
            throw domain_error("torus dimension must lie in [1, 30]");
        }
    }
    IndexSet top() const { return (IndexSet{1} << n) - 1; }
    std::string frame_name(int i) const { return "e" + std::to_string(i + 1); }
    std::string dual_name(int i) const { return "dlog x" + std::to_string(i + 1); }
    friend bool operator==(const TorusContext&, const TorusContext&) = default;
};

inline void require_same(const TorusContext& a, const TorusContext& b)
{
    if (!(a == b)) {
        throw domain_error("torus context mismatch");
    }
}

struct FormKey {
    std::vector<int> monomial;
    IndexSet indices = 0;

    friend bool operator<(const FormKey& a, const FormKey& b)
    {
        if (a.indices != b.indices) {
            return a.indices < b.indices;
        }
        return a.monomial < b.monomial;
    }
    friend bool operator==(const FormKey&, const FormKey&) = default;
};

// Sum of c * x^k dlog x_I with Laurent monomials x^k.
class LogForm {
public:
    using Terms = std::map<FormKey, TauFraction>;

    explicit LogForm(TorusContext ctx) : ctx_(ctx) {}

    static LogForm term(TorusContext ctx, std::vector<int> k, IndexSet I, const TauFraction& c)
    {
        LogForm f(ctx);
        f.add(std::move(k), I, c);
        return f;
    }
    static LogForm dlog(TorusContext ctx, IndexSet I, const TauFraction& c = 1)
    {
        return term(ctx, std::vector<int>(static_cast<std::size_t>(ctx.n), 0), I, c);
    }

    const TorusContext& context() const { return ctx_; }
    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void add(std::vector<int> k, IndexSet I, const TauFraction& c)
    {
        if (k.size() != static_cast<std::size_t>(ctx_.n) || (I & ~ctx_.top()) != 0) {
            throw domain_error("form term does not fit the torus dimension");
        }
        if (c.is_zero()) {
            return;
        }
        FormKey key{std::move(k), I};
        auto [it, fresh] = terms_.emplace(key, c);
        if (!fresh) {
            it->second += c;
            if (it->second.is_zero()) {
                terms_.erase(it);
            }
        }
    }

    bool is_invariant() const
    {
        for (auto& [key, c] : terms_) {
            for (int e : key.monomial) {
                if (e != 0) {
                    return false;
                }
            }
        }
        return true;
    }

    // Coefficient of the invariant term dlog x_I.
    TauFraction invariant_coeff(IndexSet I) const
    {
        auto it = terms_.find(FormKey{std::vector<int>(static_cast<std::size_t>(ctx_.n), 0), I});
        return it == terms_.end() ? TauFraction() : it->second;
    }

    LogForm& operator+=(const LogForm& o)
    {
        require_same(ctx_, o.ctx_);
        for (auto& [key, c] : o.terms_) {
            add(key.monomial, key.indices, c);
        }
        return *this;
    }
    friend LogForm operator+(LogForm a, const LogForm& b) { return a += b; }
    friend LogForm operator-(const LogForm& a)
    {
        LogForm r(a.ctx_);
        for (auto& [key, c] : a.terms_) {
            r.terms_.emplace(key, -c);
        }
        return r;
    }
    friend LogForm operator-(const LogForm& a, const LogForm& b) { return a + (-b); }
    friend LogForm operator*(const TauFraction& s, const LogForm& a)
    {
        LogForm r(a.ctx_);
        if (s.is_zero()) {
            return r;
        }
        for (auto& [key, c] : a.terms_) {
            r.terms_.emplace(key, s * c);
        }
        return r;
    }
    friend bool operator==(const LogForm& a, const LogForm& b) { return a.ctx_ == b.ctx_ && a.terms_ == b.terms_; }

private:
    TorusContext ctx_;
    Terms terms_;
};

// Invariant polyvector: sum of c_J e_J with constant coefficients.
class Polyvector {
public:
    using Terms = std::map<IndexSet, TauFraction>;

    explicit Polyvector(TorusContext ctx) : ctx_(ctx) {}
    static Polyvector frame(TorusContext ctx, IndexSet J, const TauFraction& c = 1)
    {
        Polyvector p(ctx);
        p.add(J, c);
        return p;
    }

    const TorusContext& context() const { return ctx_; }
    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void add(IndexSet J, const TauFraction& c)
    {
        if ((J & ~ctx_.top()) != 0) {
            throw domain_error("polyvector index outside the torus dimension");
        }
        if (c.is_zero()) {
            return;
        }
        auto [it, fresh] = terms_.emplace(J, c);
        if (!fresh) {
            it->second += c;
            if (it->second.is_zero()) {
                terms_.erase(it);
            }
        }
    }

    // True when every term has degree k (vacuously for zero).
    bool has_pure_degree(int k) const
    {
        for (auto& [J, c] : terms_) {
            if (degree_of(J) != k) {
                return false;
            }
        }
        return true;
    }

    friend Polyvector operator+(Polyvector a, const Polyvector& b)
    {
        require_same(a.ctx_, b.ctx_);
        for (auto& [J, c] : b.terms_) {
            a.add(J, c);
        }
        return a;
    }
    friend Polyvector operator*(const TauFraction& s, const Polyvector& a)
    {
        Polyvector r(a.ctx_);
        for (auto& [J, c] : a.terms_) {
            r.add(J, s * c);
        }
        return r;
    }
    friend bool operator==(const Polyvector& a, const Polyvector& b) { return a.ctx_ == b.ctx_ && a.terms_ == b.terms_; }

private:
    TorusContext ctx_;
    Terms terms_;
};

inline Polyvector wedge(const Polyvector& a, const Polyvector& b)
{
    require_same(a.context(), b.context());
    Polyvector r(a.context());
    for (auto& [I, x] : a.terms()) {
        for (auto& [J, y] : b.terms()) {
            if (I & J) {
                continue;
            }
            r.add(I | J, TauFraction(wedge_sign(I, J)) * x * y);
        }
    }
    return r;
}

// Finite Laurent series in u with LogForm coefficients.
class PeriodicForm {
public:
    using Levels = std::map<int, LogForm>;

    explicit PeriodicForm(TorusContext ctx) : ctx_(ctx) {}
    static PeriodicForm at_level(int j, const LogForm& f)
    {
        PeriodicForm p(f.context());
        p.add(j, f);
        return p;
    }

    const TorusContext& context() const { return ctx_; }
    const Levels& levels() const { return levels_; }
    bool is_zero() const { return levels_.empty(); }

    LogForm level(int j) const
    {
        auto it = levels_.find(j);
        return it == levels_.end() ? LogForm(ctx_) : it->second;
    }

    void add(int j, const LogForm& f)
    {
        require_same(ctx_, f.context());
        if (f.is_zero()) {
            return;
        }
        auto it = levels_.find(j);
        if (it == levels_.end()) {
            levels_.emplace(j, f);
            return;
        }
        it->second += f;
        if (it->second.is_zero()) {
            levels_.erase(it);
        }
    }

    PeriodicForm u_shifted(int k) const
    {
        PeriodicForm r(ctx_);
        for (auto& [j, f] : levels_) {
            r.levels_.emplace(j + k, f);
        }
        return r;
    }

    bool is_invariant() const
    {
        for (auto& [j, f] : levels_) {
            if (!f.is_invariant()) {
                return false;
            }
        }
        return true;
    }

    // Sum of all levels: the specialization u = 1.
    LogForm at_u_one() const
    {
        LogForm r(ctx_);
        for (auto& [j, f] : levels_) {
            r += f;
        }
        return r;
    }

    friend PeriodicForm operator+(PeriodicForm a, const PeriodicForm& b)
    {
        require_same(a.ctx_, b.ctx_);
        for (auto& [j, f] : b.levels_) {
            a.add(j, f);
        }
        return a;
    }
    friend PeriodicForm operator-(const PeriodicForm& a)
    {
        PeriodicForm r(a.ctx_);
        for (auto& [j, f] : a.levels_) {
            r.levels_.emplace(j, -f);
        }
        return r;
    }
    friend PeriodicForm operator-(const PeriodicForm& a, const PeriodicForm& b) { return a + (-b); }
    friend PeriodicForm operator*(const TauFraction& s, const PeriodicForm& a)
    {
        PeriodicForm r(a.ctx_);
        for (auto& [j, f] : a.levels_) {
            r.add(j, s * f);
        }
        return r;
    }
    friend bool operator==(const PeriodicForm& a, const PeriodicForm& b)
    {
        return a.ctx_ == b.ctx_ && a.levels_ == b.levels_;
    }

private:
    TorusContext ctx_;
    Levels levels_;
};

inline LogForm wedge(const LogForm& a, const LogForm& b)
{
    require_same(a.context(), b.context());
    LogForm r(a.context());
    for (auto& [ka, x] : a.terms()) {
        for (auto& [kb, y] : b.terms()) {
            if (ka.indices & kb.indices) {
                continue;
            }
            std::vector<int> k = ka.monomial;
            for (std::size_t i = 0; i < k.size(); ++i) {
                k[i] += kb.monomial[i];
            }
            r.add(std::move(k), ka.indices | kb.indices, TauFraction(wedge_sign(ka.indices, kb.indices)) * x * y);
        }
    }
    return r;
}

inline PeriodicForm wedge(const PeriodicForm& a, const PeriodicForm& b)
{
    require_same(a.context(), b.context());
    PeriodicForm r(a.context());
    for (auto& [i, f] : a.levels()) {
        for (auto& [j, g] : b.levels()) {
            r.add(i + j, wedge(f, g));
        }
    }
    return r;
}

inline LogForm exterior_d(const LogForm& a)
{
    LogForm r(a.context());
    for (auto& [key, c] : a.terms()) {
        for (int i = 0; i < a.context().n; ++i) {
            int k = key.monomial[static_cast<std::size_t>(i)];
            IndexSet bit = IndexSet{1} << i;
            if (k == 0 || (key.indices & bit)) {
                continue;
            }
            r.add(key.monomial, key.indices | bit, TauFraction(k * wedge_sign(bit, key.indices)) * c);
        }
    }
    return r;
}

inline PeriodicForm exterior_d(const PeriodicForm& w)
{
    PeriodicForm r(w.context());
    for (auto& [j, f] : w.levels()) {
        r.add(j, exterior_d(f));
    }
    return r;
}

// First-slot contraction; iota_{e_J} applies the largest index of J first.
inline LogForm contract(const Polyvector& p, const LogForm& a)
{
    require_same(p.context(), a.context());
    LogForm r(a.context());
    for (auto& [J, pc] : p.terms()) {
        auto js = members(J);
        for (auto& [key, c] : a.terms()) {
            if ((key.indices & J) != J) {
                continue;
            }
            IndexSet I = key.indices;
            int sign = 1;
            for (auto it = js.rbegin(); it != js.rend(); ++it) {
                IndexSet bit = IndexSet{1} << *it;
                if (std::popcount(I & (bit - 1)) % 2) {
                    sign = -sign;
                }
                I &= ~bit;
            }
            r.add(key.monomial, I, TauFraction(sign) * pc * c);
        }
    }
    return r;
}

inline PeriodicForm contract(const Polyvector& p, const PeriodicForm& w)
{
    PeriodicForm r(w.context());
    for (auto& [j, f] : w.levels()) {
        r.add(j, contract(p, f));
    }
    return r;
}

inline void require_bivector(const Polyvector& sigma)
{
    if (!sigma.has_pure_degree(2)) {
        throw domain_error("expected a bivector (pure degree 2)");
    }
}

inline LogForm poisson_delta(const Polyvector& sigma, const LogForm& a)
{
    require_bivector(sigma);
    return exterior_d(contract(sigma, a)) - contract(sigma, exterior_d(a));
}

inline PeriodicForm poisson_delta(const Polyvector& sigma, const PeriodicForm& w)
{
    PeriodicForm r(w.context());
    for (auto& [j, f] : w.levels()) {
        r.add(j, poisson_delta(sigma, f));
    }
    return r;
}

// exp(iota_sigma / u) = sum_m iota_sigma^m / (m! u^m).
inline PeriodicForm transport_operator(const Polyvector& sigma, const PeriodicForm& w)
{
    require_bivector(sigma);
    PeriodicForm result = w;
    PeriodicForm term = w;
    for (unsigned m = 1; !term.is_zero(); ++m) {
        term = (TauFraction(1) / TauFraction(static_cast<long>(m))) * contract(sigma, term).u_shifted(-1);
        result = result + term;
    }
    return result;
}

// A u^j-level term of form degree p is scaled by (-1)^(j-p).
inline PeriodicForm mukai_involution(const PeriodicForm& w)
{
    PeriodicForm r(w.context());
    for (auto& [j, f] : w.levels()) {
        LogForm g(w.context());
        for (auto& [key, c] : f.terms()) {
            bool odd = ((j - degree_of(key.indices)) % 2) != 0;
            g.add(key.monomial, key.indices, odd ? -c : c);
        }
        r.add(j, g);
    }
    return r;
}

// Laurent series in u: exponent -> coefficient, zero coefficients omitted.
using USeries = std::map<int, TauFraction>;

// tau^n times the top-form coefficient of v^vee ^ w, per u-power.
inline USeries integration_pairing(const PeriodicForm& v, const PeriodicForm& w)
{
    require_same(v.context(), w.context());
    if (!v.is_invariant() || !w.is_invariant()) {
        throw domain_error("integration pairing needs invariant forms");
    }
    const auto& ctx = v.context();
    TauFraction vol = TauScalar::tau_power(ctx.n);
    USeries out;
    PeriodicForm product = wedge(mukai_involution(v), w);
    for (auto& [j, f] : product.levels()) {
        TauFraction c = f.invariant_coeff(ctx.top());
        if (!c.is_zero()) {
            out[j] = vol * c;
        }
    }
    return out;
}

} // namespace shodge
