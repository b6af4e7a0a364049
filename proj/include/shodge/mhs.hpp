#pragma once

#include "matrix.hpp"
#include "smith.hpp"

#include <algorithm>
#include <memory>
#include <string>
#include <vector>

namespace shodge {

// Finite filtration by subspaces. Outside the stored range an increasing
// filtration is 0 below and everything above; a decreasing one the reverse.
class Filtration {
public:
    enum class Kind { increasing, decreasing };

    Filtration() = default;
    Filtration(Kind kind, std::size_t ambient, int lo, std::vector<Subspace> steps)
        : kind_(kind), ambient_(ambient), lo_(lo), steps_(std::move(steps))
    {
        for (auto& s : steps_) {
            if (s.ambient() != ambient_) {
                throw std::invalid_argument("filtration step of wrong ambient dimension");
            }
        }
    }

    Kind kind() const { return kind_; }
    std::size_t ambient() const { return ambient_; }
    int lo() const { return lo_; }
    int hi() const { return lo_ + static_cast<int>(steps_.size()) - 1; }
    const std::vector<Subspace>& steps() const { return steps_; }

    Subspace at(int k) const
    {
        bool below = k < lo_;
        bool above = k > hi();
        if (below || above) {
            bool whole = (kind_ == Kind::increasing) ? above : below;
            return whole ? Subspace::whole(ambient_) : Subspace(ambient_);
        }
        return steps_[static_cast<std::size_t>(k - lo_)];
    }

    // Re-index so that new.at(k) == old.at(k + delta).
    Filtration reindexed(int delta) const { return Filtration(kind_, ambient_, lo_ - delta, steps_); }

    // Apply v -> v * m to every step.
    Filtration image(const Matrix<TauFraction>& m) const
    {
        std::vector<Subspace> s;
        for (auto& step : steps_) {
            s.push_back(step.image(m));
        }
        return Filtration(kind_, m.cols(), lo_, std::move(s));
    }

    friend bool operator==(const Filtration& a, const Filtration& b)
    {
        if (a.kind_ != b.kind_ || a.ambient_ != b.ambient_) {
            return false;
        }
        int lo = std::min(a.lo_, b.lo_) - 1, hi = std::max(a.hi(), b.hi()) + 1;
        for (int k = lo; k <= hi; ++k) {
            if (!(a.at(k) == b.at(k))) {
                return false;
            }
        }
        return true;
    }

private:
    Kind kind_ = Kind::increasing;
    std::size_t ambient_ = 0;
    int lo_ = 0;
    std::vector<Subspace> steps_;
};

struct MixedHodgeStructure {
    FgAbGroup lattice;
    Matrix<TauScalar> comparison; // column c is the image of lattice generator c
    Filtration weight;            // increasing, in de Rham coordinates
    Filtration hodge;             // decreasing, in de Rham coordinates

    std::size_t rank() const { return comparison.cols(); }
    std::size_t dim() const { return comparison.rows(); }

    friend bool operator==(const MixedHodgeStructure& a, const MixedHodgeStructure& b)
    {
        return a.lattice == b.lattice && a.comparison == b.comparison && a.weight == b.weight &&
               a.hodge == b.hodge;
    }
};

// Pure rank-one structure Z(j): lattice tau^j Z, weight -2j, F^{-j} = everything.
inline MixedHodgeStructure tate_structure(int j)
{
    Matrix<TauScalar> c(1, 1);
    c(0, 0) = TauScalar::tau_power(j);
    return {FgAbGroup::free(1), c,
            Filtration(Filtration::Kind::increasing, 1, -2 * j, {Subspace::whole(1)}),
            Filtration(Filtration::Kind::decreasing, 1, -j, {Subspace::whole(1)})};
}

inline MixedHodgeStructure tate_twist(const MixedHodgeStructure& v, int j)
{
    TauScalar t = TauScalar::tau_power(j);
    return {v.lattice, v.comparison.map([&](const TauScalar& s) { return s * t; }), v.weight.reindexed(2 * j),
            v.hodge.reindexed(j)};
}

namespace detail {

inline Subspace embed(const Subspace& s, std::size_t offset, std::size_t ambient)
{
    std::vector<std::vector<TauFraction>> rows;
    for (auto& r : s.rows()) {
        std::vector<TauFraction> v(ambient, TauFraction());
        std::copy(r.begin(), r.end(), v.begin() + static_cast<std::ptrdiff_t>(offset));
        rows.push_back(std::move(v));
    }
    return Subspace(ambient, rows);
}

inline Filtration filtration_sum(const Filtration& a, const Filtration& b)
{
    std::size_t d = a.ambient() + b.ambient();
    int lo = std::min(a.lo(), b.lo()), hi = std::max(a.hi(), b.hi());
    std::vector<Subspace> steps;
    for (int k = lo; k <= hi; ++k) {
        steps.push_back(embed(a.at(k), 0, d) + embed(b.at(k), a.ambient(), d));
    }
    return Filtration(a.kind(), d, lo, std::move(steps));
}

} // namespace detail

inline MixedHodgeStructure direct_sum(const MixedHodgeStructure& a, const MixedHodgeStructure& b)
{
    Matrix<TauScalar> c(a.dim() + b.dim(), a.rank() + b.rank());
    for (std::size_t i = 0; i < a.dim(); ++i) {
        for (std::size_t j = 0; j < a.rank(); ++j) {
            c(i, j) = a.comparison(i, j);
        }
    }
    for (std::size_t i = 0; i < b.dim(); ++i) {
        for (std::size_t j = 0; j < b.rank(); ++j) {
            c(a.dim() + i, a.rank() + j) = b.comparison(i, j);
        }
    }
    return {direct_sum(a.lattice, b.lattice), c, detail::filtration_sum(a.weight, b.weight),
            detail::filtration_sum(a.hodge, b.hodge)};
}

// Same structure written in lattice coordinates (comparison = identity).
inline MixedHodgeStructure lattice_frame(const MixedHodgeStructure& v)
{
    auto inv = inverse(to_fraction(v.comparison));
    if (!inv) {
        throw domain_error("comparison map is not invertible");
    }
    Matrix<TauFraction> to_lattice = inv->transpose();
    Matrix<TauScalar> id(v.rank(), v.rank());
    for (std::size_t i = 0; i < v.rank(); ++i) {
        id(i, i) = TauScalar(1);
    }
    return {v.lattice, id, v.weight.image(to_lattice), v.hodge.image(to_lattice)};
}

struct AxiomCheck {
    std::string name;
    bool passed = false;
    std::string witness;
};

struct MhsDiagnostics {
    std::vector<AxiomCheck> checks;
    bool ok() const
    {
        return std::all_of(checks.begin(), checks.end(), [](const AxiomCheck& c) { return c.passed; });
    }
};

inline MhsDiagnostics validate_mhs(const MixedHodgeStructure& v)
{
    MhsDiagnostics diag;
    auto& out = diag.checks;
    bool square = v.dim() == v.rank() && v.lattice.free_rank() == v.rank();
    bool full = square && rank(to_fraction(v.comparison)) == v.rank();
    out.push_back({"comparison full rank", full,
                   full ? "" : "comparison is " + std::to_string(v.dim()) + "x" + std::to_string(v.rank()) +
                                   " of rank " + std::to_string(rank(to_fraction(v.comparison)))});
    if (!full) {
        for (auto name : {"filtrations monotone", "weight rational", "weight conjugation-stable", "opposedness"}) {
            out.push_back({name, false, "needs an invertible comparison"});
        }
        return diag;
    }
    auto f = lattice_frame(v);
    const auto& W = f.weight;
    const auto& F = f.hodge;

    std::string mono;
    for (int k = W.lo() - 1; k <= W.hi() && mono.empty(); ++k) {
        if (!W.at(k + 1).contains(W.at(k))) {
            mono = "W_" + std::to_string(k) + " not inside W_" + std::to_string(k + 1);
        }
    }
    for (int p = F.lo() - 1; p <= F.hi() && mono.empty(); ++p) {
        if (!F.at(p).contains(F.at(p + 1))) {
            mono = "F^" + std::to_string(p + 1) + " not inside F^" + std::to_string(p);
        }
    }
    out.push_back({"filtrations monotone", mono.empty(), mono});

    std::string rat, conj;
    for (int k = W.lo(); k <= W.hi(); ++k) {
        if (rat.empty() && !is_rational(W.at(k))) {
            rat = "W_" + std::to_string(k) + " is not spanned by rational lattice vectors";
        }
        if (conj.empty() && !(tau_conjugate(W.at(k)) == W.at(k))) {
            conj = "conj(W_" + std::to_string(k) + ") differs from W_" + std::to_string(k);
        }
    }
    out.push_back({"weight rational", rat.empty(), rat});
    out.push_back({"weight conjugation-stable", conj.empty(), conj});

    std::string opp;
    for (int k = W.lo(); k <= W.hi() && opp.empty(); ++k) {
        Subspace G = W.at(k), G0 = W.at(k - 1);
        std::size_t gr = G.dim() - G0.dim();
        if (gr == 0) {
            continue;
        }
        int plo = std::min(F.lo(), k + 1 - F.hi()) - 1;
        int phi = std::max(F.hi(), k + 1 - F.lo()) + 1;
        for (int p = plo; p <= phi && opp.empty(); ++p) {
            Subspace a = intersect(F.at(p), G) + G0;
            Subspace b = tau_conjugate(intersect(F.at(k + 1 - p), G)) + G0;
            std::size_t da = a.dim() - G0.dim(), db = b.dim() - G0.dim(), ds = (a + b).dim() - G0.dim();
            if (da + db != gr || ds != gr) {
                opp = "grW_" + std::to_string(k) + ": F^" + std::to_string(p) + " and conj F^" +
                      std::to_string(k + 1 - p) + " have dimensions " + std::to_string(da) + "+" +
                      std::to_string(db) + " spanning " + std::to_string(ds) + " of " + std::to_string(gr);
            }
        }
    }
    out.push_back({"opposedness", opp.empty(), opp});
    return diag;
}

struct SubStructure {
    MixedHodgeStructure mhs; // in lattice coordinates of the sublattice
    IntMatrix inclusion;     // total rank x sub rank, columns = generators
};

struct QuotientStructure {
    MixedHodgeStructure mhs; // in lattice coordinates of the chosen quotient basis
    IntMatrix projection;    // quotient rank x total rank
};

namespace detail {

inline bool is_saturated_basis(const IntMatrix& rows)
{
    auto s = smith_normal_form(rows);
    if (s.rank != rows.rows()) {
        return false;
    }
    for (auto& d : s.invariant_factors()) {
        if (d != 1) {
            return false;
        }
    }
    return true;
}

inline Filtration restrict_to(const Filtration& filt, const Subspace& span, const Matrix<TauFraction>& basis)
{
    std::vector<Subspace> steps;
    Matrix<TauFraction> bt = basis.transpose();
    for (int k = filt.lo(); k <= filt.hi(); ++k) {
        std::vector<std::vector<TauFraction>> coords;
        for (auto& y : intersect(filt.at(k), span).rows()) {
            auto c = solve(bt, y);
            if (!c) {
                throw domain_error("internal: vector outside the sublattice span");
            }
            coords.push_back(*c);
        }
        steps.push_back(Subspace(basis.rows(), coords));
    }
    return Filtration(filt.kind(), basis.rows(), filt.lo(), std::move(steps));
}

} // namespace detail

// Sub-structure on a saturated sublattice given by integer rows in lattice coordinates.
inline SubStructure sub_structure(const MixedHodgeStructure& v, const IntMatrix& rows)
{
    if (rows.cols() != v.rank() || !detail::is_saturated_basis(rows)) {
        throw domain_error("sub-structure needs a saturated sublattice basis");
    }
    auto f = lattice_frame(v);
    auto basis = to_fraction(rows);
    Subspace span(basis);
    Matrix<TauScalar> id(rows.rows(), rows.rows());
    for (std::size_t i = 0; i < rows.rows(); ++i) {
        id(i, i) = TauScalar(1);
    }
    MixedHodgeStructure m{FgAbGroup::free(rows.rows()), id, detail::restrict_to(f.weight, span, basis),
                          detail::restrict_to(f.hodge, span, basis)};
    return {std::move(m), rows.transpose()};
}

// Quotient by a saturated sublattice, in the basis given by the complement rows.
inline QuotientStructure quotient_structure(const MixedHodgeStructure& v, const IntMatrix& sub_rows,
                                            const IntMatrix& complement_rows)
{
    std::size_t r = v.rank(), s = sub_rows.rows();
    if (sub_rows.cols() != r || complement_rows.cols() != r || s + complement_rows.rows() != r) {
        throw domain_error("quotient basis has the wrong shape");
    }
    IntMatrix full(r, r);
    for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = 0; j < r; ++j) {
            full(i, j) = i < s ? sub_rows(i, j) : complement_rows(i - s, j);
        }
    }
    if (!is_unimodular(full)) {
        throw domain_error("sublattice and complement do not form a lattice basis");
    }
    auto inv = inverse(to_fraction(full));
    Matrix<TauFraction> pi(r, r - s);
    IntMatrix proj(r - s, r);
    for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = s; j < r; ++j) {
            pi(i, j - s) = (*inv)(i, j);
            proj(j - s, i) = (*inv)(i, j).rational_value().get_num();
        }
    }
    auto f = lattice_frame(v);
    Matrix<TauScalar> id(r - s, r - s);
    for (std::size_t i = 0; i < r - s; ++i) {
        id(i, i) = TauScalar(1);
    }
    MixedHodgeStructure m{FgAbGroup::free(r - s), id, f.weight.image(pi), f.hodge.image(pi)};
    return {std::move(m), proj};
}

inline QuotientStructure quotient_structure(const MixedHodgeStructure& v, const IntMatrix& sub_rows)
{
    auto s = smith_normal_form(sub_rows);
    IntMatrix comp(v.rank() - s.rank, v.rank());
    for (std::size_t i = s.rank; i < v.rank(); ++i) {
        for (std::size_t j = 0; j < v.rank(); ++j) {
            comp(i - s.rank, j) = s.V_inv(i, j);
        }
    }
    return quotient_structure(v, sub_rows, comp);
}

// Saturated lattice basis of W_k, as integer rows in lattice coordinates.
inline IntMatrix weight_lattice(const MixedHodgeStructure& v, int k)
{
    auto w = lattice_frame(v).weight.at(k);
    if (!is_rational(w)) {
        throw domain_error("weight step is not rational");
    }
    if (w.dim() == 0) {
        return IntMatrix(0, v.rank());
    }
    return saturation(clear_denominators(w.basis().map([](const TauFraction& x) { return x.rational_value(); })));
}

inline SubStructure weight_subobject(const MixedHodgeStructure& v, int k)
{
    return sub_structure(v, weight_lattice(v, k));
}

inline QuotientStructure weight_quotient(const MixedHodgeStructure& v, int k)
{
    return quotient_structure(v, weight_lattice(v, k));
}

// Ext^1_Z(B, A) for finitely generated abelian groups.
inline FgAbGroup ext1(const FgAbGroup& b, const FgAbGroup& a)
{
    std::vector<Integer> torsion;
    for (auto& m : b.torsion()) {
        for (std::size_t i = 0; i < a.free_rank(); ++i) {
            torsion.push_back(m);
        }
        for (auto& d : a.torsion()) {
            Integer g = gcd(m, d);
            if (g != 1) {
                torsion.push_back(g);
            }
        }
    }
    return FgAbGroup(FgAbGroup::from_invariants(0, torsion).presentation());
}

// Hom(B, A) data used to reduce extension classes.
struct HomSpace {
    MixedHodgeStructure source; // B, lattice frame
    MixedHodgeStructure target; // A, lattice frame
    Subspace w0;                // W_0 Hom, vectorized row-major (a x b)
    Subspace f0w0;              // F^0 W_0 Hom
    IntMatrix w0_integral;      // basis rows of W_0 Hom_Z
    FgAbGroup component_group;  // Ext^1_Z(B_Z, A_Z)

    std::size_t rows() const { return target.rank(); }
    std::size_t cols() const { return source.rank(); }
};

namespace detail {

// Rows expressing h(S) contained in T for h : B -> A, in vectorized coordinates.
inline void add_containment(std::vector<std::vector<TauFraction>>& eqs, const Subspace& S, const Subspace& T,
                            std::size_t a, std::size_t b)
{
    auto ann = T.annihilator();
    for (auto& s : S.rows()) {
        for (auto& phi : ann.rows()) {
            std::vector<TauFraction> row(a * b, TauFraction());
            for (std::size_t r = 0; r < a; ++r) {
                if (phi[r].is_zero()) {
                    continue;
                }
                for (std::size_t c = 0; c < b; ++c) {
                    row[r * b + c] = phi[r] * s[c];
                }
            }
            eqs.push_back(std::move(row));
        }
    }
}

inline Subspace filtered_homs(const Filtration& src, const Filtration& dst, std::size_t a, std::size_t b)
{
    std::vector<std::vector<TauFraction>> eqs;
    int lo = std::min(src.lo(), dst.lo()) - 1, hi = std::max(src.hi(), dst.hi()) + 1;
    for (int k = lo; k <= hi; ++k) {
        add_containment(eqs, src.at(k), dst.at(k), a, b);
    }
    if (eqs.empty()) {
        return Subspace::whole(a * b);
    }
    return Subspace(kernel(Matrix<TauFraction>::from_rows(a * b, eqs)));
}

} // namespace detail

inline std::shared_ptr<const HomSpace> hom_space(const MixedHodgeStructure& source, const MixedHodgeStructure& target)
{
    auto B = lattice_frame(source);
    auto A = lattice_frame(target);
    std::size_t a = A.rank(), b = B.rank();
    Subspace w0 = detail::filtered_homs(B.weight, A.weight, a, b);
    Subspace f0 = detail::filtered_homs(B.hodge, A.hodge, a, b);
    Subspace f0w0 = intersect(w0, f0);
    if (!is_rational(w0)) {
        throw domain_error("W_0 Hom is not rational; weight filtrations are not defined over Q");
    }
    IntMatrix integral(0, a * b);
    if (w0.dim() > 0) {
        integral = saturation(clear_denominators(w0.basis().map([](const TauFraction& x) { return x.rational_value(); })));
    }
    FgAbGroup comp = ext1(source.lattice, target.lattice);
    return std::make_shared<const HomSpace>(HomSpace{B, A, w0, f0w0, integral, comp});
}

// Coset representative of an element of J(B, A) = W_0Hom / (F^0W_0Hom + W_0Hom_Z).
class JacobianElement {
public:
    JacobianElement(std::shared_ptr<const HomSpace> space, Matrix<TauFraction> hom)
        : space_(std::move(space)), hom_(std::move(hom))
    {
        if (hom_.rows() != space_->rows() || hom_.cols() != space_->cols()) {
            throw domain_error("Jacobian representative has the wrong shape");
        }
    }
    static JacobianElement identity(std::shared_ptr<const HomSpace> space)
    {
        Matrix<TauFraction> z(space->rows(), space->cols());
        return JacobianElement(std::move(space), z);
    }

    const Matrix<TauFraction>& hom() const { return hom_; }
    const HomSpace& space() const { return *space_; }
    const std::shared_ptr<const HomSpace>& space_ptr() const { return space_; }

    std::vector<TauFraction> vectorized() const
    {
        std::vector<TauFraction> v;
        for (std::size_t r = 0; r < hom_.rows(); ++r) {
            for (std::size_t c = 0; c < hom_.cols(); ++c) {
                v.push_back(hom_(r, c));
            }
        }
        return v;
    }

    friend JacobianElement operator+(const JacobianElement& x, const JacobianElement& y)
    {
        x.check(y);
        return JacobianElement(x.space_, x.hom_ + y.hom_);
    }
    friend JacobianElement operator-(const JacobianElement& x, const JacobianElement& y)
    {
        x.check(y);
        return JacobianElement(x.space_, x.hom_ - y.hom_);
    }
    JacobianElement times(const Integer& k) const
    {
        TauFraction f{TauScalar(Rational(k))};
        return JacobianElement(space_, hom_.map([&](const TauFraction& x) { return f * x; }));
    }

    void check(const JacobianElement& y) const
    {
        if (space_ != y.space_ && !(space_->source == y.space_->source && space_->target == y.space_->target)) {
            throw domain_error("Jacobian elements of different Hom spaces");
        }
    }

private:
    std::shared_ptr<const HomSpace> space_;
    Matrix<TauFraction> hom_;
};

namespace detail {

inline TauScalar common_denominator(const std::vector<TauFraction>& xs)
{
    TauScalar l(1);
    std::vector<TauScalar> seen;
    for (auto& x : xs) {
        if (x.is_laurent()) {
            continue;
        }
        if (std::find(seen.begin(), seen.end(), x.denominator()) == seen.end()) {
            seen.push_back(x.denominator());
            l = l * x.denominator();
        }
    }
    return l;
}

inline TauFraction dot(const std::vector<TauFraction>& a, const std::vector<TauFraction>& b)
{
    TauFraction s;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!a[i].is_zero() && !b[i].is_zero()) {
            s += a[i] * b[i];
        }
    }
    return s;
}

} // namespace detail

// True iff x - y lies in F^0W_0Hom + W_0Hom_Z.
inline bool jacobian_equal(const JacobianElement& x, const JacobianElement& y)
{
    x.check(y);
    const HomSpace& h = x.space();
    std::vector<TauFraction> d = (x - y).vectorized();
    if (!h.w0.contains(d)) {
        return false;
    }
    auto phi = h.f0w0.annihilator();
    const IntMatrix& z = h.w0_integral;
    std::size_t k = z.rows();
    std::vector<std::vector<TauFraction>> zk;
    for (std::size_t i = 0; i < k; ++i) {
        std::vector<TauFraction> v;
        for (std::size_t j = 0; j < z.cols(); ++j) {
            v.push_back(TauFraction(Rational(z(i, j))));
        }
        zk.push_back(std::move(v));
    }
    // Expand each equation phi.(d - sum c_i z_i) = 0 into rational equations per tau-degree.
    std::vector<std::vector<Rational>> eqs;
    for (auto& row : phi.rows()) {
        std::vector<TauFraction> alpha;
        for (auto& zi : zk) {
            alpha.push_back(detail::dot(row, zi));
        }
        TauFraction beta = detail::dot(row, d);
        std::vector<TauFraction> all = alpha;
        all.push_back(beta);
        TauFraction L{detail::common_denominator(all)};
        std::vector<TauScalar> polys;
        for (auto& a : all) {
            TauFraction s = L * a;
            if (!s.is_laurent()) {
                throw domain_error("internal: denominator clearing failed");
            }
            polys.push_back(s.numerator());
        }
        int lo = 0, hi = -1;
        bool any = false;
        for (auto& p : polys) {
            if (p.is_zero()) {
                continue;
            }
            lo = any ? std::min(lo, p.min_degree()) : p.min_degree();
            hi = any ? std::max(hi, p.max_degree()) : p.max_degree();
            any = true;
        }
        for (int t = lo; any && t <= hi; ++t) {
            std::vector<Rational> e;
            for (auto& p : polys) {
                e.push_back(p.coeff(t));
            }
            eqs.push_back(std::move(e));
        }
    }
    if (eqs.empty()) {
        return true;
    }
    Matrix<Rational> sys(eqs.size(), k + 1);
    for (std::size_t i = 0; i < eqs.size(); ++i) {
        for (std::size_t j = 0; j <= k; ++j) {
            sys(i, j) = eqs[i][j];
        }
    }
    // Scale rows to integers without dividing out common factors of the row.
    IntMatrix A(eqs.size(), k);
    std::vector<Integer> b(eqs.size());
    for (std::size_t i = 0; i < eqs.size(); ++i) {
        Integer l = 1;
        for (std::size_t j = 0; j <= k; ++j) {
            l = lcm(l, sys(i, j).get_den());
        }
        for (std::size_t j = 0; j < k; ++j) {
            A(i, j) = Rational(sys(i, j) * Rational(l)).get_num();
        }
        b[i] = Rational(sys(i, k) * Rational(l)).get_num();
    }
    return integer_solve(A, b).has_value();
}

inline bool is_identity(const JacobianElement& x)
{
    return jacobian_equal(x, JacobianElement::identity(x.space_ptr()));
}

// Carlson class of 0 -> A -> E -> B -> 0; inclusion is rank(E) x rank(A), projection rank(B) x rank(E).
inline JacobianElement carlson_class(const MixedHodgeStructure& sub, const MixedHodgeStructure& total,
                                     const MixedHodgeStructure& quotient, const IntMatrix& inclusion,
                                     const IntMatrix& projection)
{
    std::size_t a = sub.rank(), e = total.rank(), b = quotient.rank();
    if (inclusion.rows() != e || inclusion.cols() != a || projection.rows() != b || projection.cols() != e ||
        a + b != e) {
        throw domain_error("extension maps have inconsistent shapes");
    }
    auto ps = smith_normal_form(projection);
    bool surjective = ps.rank == b;
    for (auto& d : ps.invariant_factors()) {
        surjective = surjective && d == 1;
    }
    if (!(projection * inclusion == IntMatrix(b, a)) || smith_normal_form(inclusion).rank != a || !surjective) {
        throw domain_error("inputs are not a short exact sequence of lattices");
    }
    auto A = lattice_frame(sub), E = lattice_frame(total), B = lattice_frame(quotient);
    auto it = to_fraction(inclusion).transpose();  // row vectors: A -> E
    auto pt = to_fraction(projection).transpose(); // row vectors: E -> B

    for (const auto* pair : {&A.weight, &A.hodge}) {
        const Filtration& src = *pair;
        const Filtration& dst = (pair == &A.weight) ? E.weight : E.hodge;
        for (int k = src.lo() - 1; k <= src.hi() + 1; ++k) {
            if (!dst.at(k).contains(src.at(k).image(it))) {
                throw domain_error("inclusion is not a morphism of filtrations");
            }
        }
    }
    for (int k = std::min(E.hodge.lo(), B.hodge.lo()) - 1; k <= std::max(E.hodge.hi(), B.hodge.hi()) + 1; ++k) {
        if (!(E.hodge.at(k).image(pt) == B.hodge.at(k))) {
            throw domain_error("no Hodge splitting exists: projection is not strict for F");
        }
    }
    for (int k = std::min(E.weight.lo(), B.weight.lo()) - 1; k <= std::max(E.weight.hi(), B.weight.hi()) + 1; ++k) {
        if (!(E.weight.at(k).image(pt) == B.weight.at(k))) {
            throw domain_error("projection is not strict for W");
        }
    }

    // Lattice section.
    Matrix<TauFraction> s_z(e, b);
    for (std::size_t j = 0; j < b; ++j) {
        std::vector<Integer> unit(b, Integer(0));
        unit[j] = 1;
        auto col = integer_solve(projection, unit);
        if (!col) {
            throw domain_error("internal: no integral section");
        }
        for (std::size_t i = 0; i < e; ++i) {
            s_z(i, j) = TauFraction(Rational((*col)[i]));
        }
    }

    // Hodge section: lift a basis of B adapted to F, from the deepest level up.
    std::vector<std::vector<TauFraction>> bvecs, lifts;
    Subspace spanned(b);
    for (int p = B.hodge.hi(); p >= B.hodge.lo() - 1; --p) {
        Subspace Fp = B.hodge.at(p);
        Subspace FE = E.hodge.at(p);
        Matrix<TauFraction> images = FE.basis() * pt;
        for (auto& v : Fp.rows()) {
            if (spanned.contains(v)) {
                continue;
            }
            auto c = solve(images.transpose(), v);
            if (!c) {
                throw domain_error("no Hodge splitting exists");
            }
            bvecs.push_back(v);
            lifts.push_back(vec_mat(*c, FE.basis()));
            spanned = spanned + Subspace(b, {v});
        }
    }
    if (bvecs.size() != b) {
        throw domain_error("internal: Hodge filtration of the quotient is not exhaustive");
    }
    auto binv = inverse(Matrix<TauFraction>::from_rows(b, bvecs));
    Matrix<TauFraction> s_f = (*binv * Matrix<TauFraction>::from_rows(e, lifts)).transpose();

    Matrix<TauFraction> diff = s_f - s_z;
    auto inc = to_fraction(inclusion);
    Matrix<TauFraction> h(a, b);
    for (std::size_t j = 0; j < b; ++j) {
        auto col = solve(inc, diff.col(j));
        if (!col) {
            throw domain_error("internal: splitting difference not in the sub");
        }
        for (std::size_t i = 0; i < a; ++i) {
            h(i, j) = (*col)[i];
        }
    }
    JacobianElement cls(hom_space(quotient, sub), h);
    if (!cls.space().w0.contains(cls.vectorized())) {
        throw domain_error("extension class outside W_0 Hom; weight-compatible splitting required");
    }
    return cls;
}

// For J = (C / Z)^{a x b} with trivial F^0 part, the entrywise exponential of tau * h.
inline Matrix<ExpValue> to_exp_values(const JacobianElement& x)
{
    const HomSpace& h = x.space();
    std::size_t n = h.rows() * h.cols();
    if (h.f0w0.dim() != 0 || h.w0_integral.rows() != n || !is_unimodular(h.w0_integral)) {
        throw domain_error("Jacobian is not a product of copies of C/Z");
    }
    Matrix<ExpValue> out(h.rows(), h.cols());
    TauFraction t{TauScalar::tau()};
    for (std::size_t r = 0; r < h.rows(); ++r) {
        for (std::size_t c = 0; c < h.cols(); ++c) {
            TauFraction v = t * x.hom()(r, c);
            if (!v.is_laurent()) {
                throw domain_error("Jacobian entry is not a Laurent polynomial after scaling by tau");
            }
            out(r, c) = ExpValue(v.numerator());
        }
    }
    return out;
}

} // namespace shodge
