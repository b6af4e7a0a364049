#pragma once

#include "matrix.hpp"

#include <algorithm>
#include <optional>
#include <vector>

namespace shodge {

using IntMatrix = Matrix<Integer>;

struct SmithForm {
    IntMatrix U;
    IntMatrix D;
    IntMatrix V;
    IntMatrix V_inv;
    std::size_t rank = 0;

    std::vector<Integer> invariant_factors() const
    {
        std::vector<Integer> d;
        for (std::size_t i = 0; i < rank; ++i) {
            d.push_back(D(i, i));
        }
        return d;
    }
};

namespace detail {

inline void swap_rows(IntMatrix& m, std::size_t a, std::size_t b)
{
    for (std::size_t j = 0; j < m.cols(); ++j) {
        std::swap(m(a, j), m(b, j));
    }
}
inline void swap_cols(IntMatrix& m, std::size_t a, std::size_t b)
{
    for (std::size_t i = 0; i < m.rows(); ++i) {
        std::swap(m(i, a), m(i, b));
    }
}
// row_a += f * row_b
inline void add_row(IntMatrix& m, std::size_t a, std::size_t b, const Integer& f)
{
    for (std::size_t j = 0; j < m.cols(); ++j) {
        m(a, j) += f * m(b, j);
    }
}
// col_a += f * col_b
inline void add_col(IntMatrix& m, std::size_t a, std::size_t b, const Integer& f)
{
    for (std::size_t i = 0; i < m.rows(); ++i) {
        m(i, a) += f * m(i, b);
    }
}

} // namespace detail

// U * M * V = D with U, V unimodular and d_1 | d_2 | ... on the diagonal.
inline SmithForm smith_normal_form(const IntMatrix& M)
{
    using namespace detail;
    const std::size_t m = M.rows(), n = M.cols();
    SmithForm s{IntMatrix::identity(m), M, IntMatrix::identity(n), IntMatrix::identity(n), 0};
    IntMatrix& D = s.D;

    // Row operations act on U from the left; column operations act on V from
    // the right and on V_inv from the left with the inverse operation.
    auto row_swap = [&](std::size_t a, std::size_t b) {
        swap_rows(D, a, b);
        swap_rows(s.U, a, b);
    };
    auto col_swap = [&](std::size_t a, std::size_t b) {
        swap_cols(D, a, b);
        swap_cols(s.V, a, b);
        swap_rows(s.V_inv, a, b);
    };
    auto row_add = [&](std::size_t a, std::size_t b, const Integer& f) {
        add_row(D, a, b, f);
        add_row(s.U, a, b, f);
    };
    auto col_add = [&](std::size_t a, std::size_t b, const Integer& f) {
        add_col(D, a, b, f);
        add_col(s.V, a, b, f);
        add_row(s.V_inv, b, a, Integer(-f));
    };

    std::size_t t = 0;
    while (t < std::min(m, n)) {
        // Smallest nonzero entry of the trailing block becomes the pivot.
        std::optional<std::pair<std::size_t, std::size_t>> best;
        for (std::size_t i = t; i < m; ++i) {
            for (std::size_t j = t; j < n; ++j) {
                if (D(i, j) != 0 && (!best || abs(D(i, j)) < abs(D(best->first, best->second)))) {
                    best = {i, j};
                }
            }
        }
        if (!best) {
            break;
        }
        row_swap(t, best->first);
        col_swap(t, best->second);

        for (;;) {
            bool clean = true;
            for (std::size_t i = t + 1; i < m; ++i) {
                if (D(i, t) != 0) {
                    Integer q;
                    mpz_tdiv_q(q.get_mpz_t(), D(i, t).get_mpz_t(), D(t, t).get_mpz_t());
                    row_add(i, t, Integer(-q));
                    clean = clean && D(i, t) == 0;
                }
            }
            for (std::size_t j = t + 1; j < n; ++j) {
                if (D(t, j) != 0) {
                    Integer q;
                    mpz_tdiv_q(q.get_mpz_t(), D(t, j).get_mpz_t(), D(t, t).get_mpz_t());
                    col_add(j, t, Integer(-q));
                    clean = clean && D(t, j) == 0;
                }
            }
            if (!clean) {
                // A remainder is smaller than the pivot; move it into place.
                std::size_t bi = t, bj = t;
                for (std::size_t i = t + 1; i < m; ++i) {
                    if (D(i, t) != 0 && abs(D(i, t)) < abs(D(bi, bj))) {
                        bi = i;
                        bj = t;
                    }
                }
                for (std::size_t j = t + 1; j < n; ++j) {
                    if (D(t, j) != 0 && abs(D(t, j)) < abs(D(bi, bj))) {
                        bi = t;
                        bj = j;
                    }
                }
                row_swap(t, bi);
                col_swap(t, bj);
                continue;
            }
            // Enforce divisibility of the trailing block by the pivot.
            bool divides = true;
            for (std::size_t i = t + 1; i < m && divides; ++i) {
                for (std::size_t j = t + 1; j < n; ++j) {
                    if (!mpz_divisible_p(D(i, j).get_mpz_t(), D(t, t).get_mpz_t())) {
                        row_add(t, i, Integer(1));
                        divides = false;
                        break;
                    }
                }
            }
            if (divides) {
                break;
            }
        }
        if (D(t, t) < 0) {
            for (std::size_t j = 0; j < n; ++j) {
                D(t, j) = -D(t, j);
            }
            for (std::size_t j = 0; j < m; ++j) {
                s.U(t, j) = -s.U(t, j);
            }
        }
        ++t;
    }
    s.rank = t;
    return s;
}

inline Integer determinant(const IntMatrix& m)
{
    if (m.rows() != m.cols()) {
        throw std::invalid_argument("determinant of non-square matrix");
    }
    // Fraction-free Bareiss elimination.
    std::size_t n = m.rows();
    if (n == 0) {
        return 1;
    }
    IntMatrix a = m;
    Integer sign = 1, prev = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (a(k, k) == 0) {
            std::size_t p = k + 1;
            while (p < n && a(p, k) == 0) {
                ++p;
            }
            if (p == n) {
                return 0;
            }
            detail::swap_rows(a, k, p);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                Integer v = a(i, j) * a(k, k) - a(i, k) * a(k, j);
                mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
                a(i, j) = v;
            }
        }
        prev = a(k, k);
    }
    return sign * a(n - 1, n - 1);
}

// Finitely generated abelian group Z^g / (column span of the presentation).
class FgAbGroup {
public:
    FgAbGroup() = default;
    explicit FgAbGroup(IntMatrix presentation) : presentation_(std::move(presentation))
    {
        auto s = smith_normal_form(presentation_);
        for (auto& d : s.invariant_factors()) {
            if (d != 1) {
                torsion_.push_back(d);
            }
        }
        free_rank_ = presentation_.rows() - s.rank;
    }
    static FgAbGroup free(std::size_t r) { return FgAbGroup(IntMatrix(r, 0)); }
    static FgAbGroup from_invariants(std::size_t free_rank, const std::vector<Integer>& torsion)
    {
        IntMatrix p(free_rank + torsion.size(), torsion.size());
        for (std::size_t i = 0; i < torsion.size(); ++i) {
            p(free_rank + i, i) = torsion[i];
        }
        return FgAbGroup(p);
    }

    const IntMatrix& presentation() const { return presentation_; }
    std::size_t free_rank() const { return free_rank_; }
    const std::vector<Integer>& torsion() const { return torsion_; }
    bool is_trivial() const { return free_rank_ == 0 && torsion_.empty(); }

    friend bool operator==(const FgAbGroup& a, const FgAbGroup& b)
    {
        return a.free_rank_ == b.free_rank_ && a.torsion_ == b.torsion_;
    }

private:
    IntMatrix presentation_;
    std::vector<Integer> torsion_;
    std::size_t free_rank_ = 0;
};

inline FgAbGroup direct_sum(const FgAbGroup& a, const FgAbGroup& b)
{
    std::vector<Integer> t = a.torsion();
    t.insert(t.end(), b.torsion().begin(), b.torsion().end());
    // Re-run SNF so the torsion list is a divisibility chain again.
    return FgAbGroup(FgAbGroup::from_invariants(a.free_rank() + b.free_rank(), t).presentation());
}

// Basis (as rows) of the integer kernel {x in Z^n : M x = 0}.
inline IntMatrix integer_kernel(const IntMatrix& M)
{
    auto s = smith_normal_form(M);
    std::size_t n = M.cols();
    IntMatrix k(n - s.rank, n);
    for (std::size_t c = s.rank; c < n; ++c) {
        for (std::size_t i = 0; i < n; ++i) {
            k(c - s.rank, i) = s.V(i, c);
        }
    }
    return k;
}

// Basis (as rows) of the sublattice generated by the given rows.
inline IntMatrix lattice_basis(const IntMatrix& generators)
{
    auto s = smith_normal_form(generators);
    IntMatrix b(s.rank, generators.cols());
    for (std::size_t i = 0; i < s.rank; ++i) {
        for (std::size_t j = 0; j < generators.cols(); ++j) {
            b(i, j) = s.D(i, i) * s.V_inv(i, j);
        }
    }
    return b;
}

// Basis (as rows) of Z^n intersected with the rational row span of the input.
inline IntMatrix saturation(const IntMatrix& rows)
{
    auto s = smith_normal_form(rows);
    IntMatrix b(s.rank, rows.cols());
    for (std::size_t i = 0; i < s.rank; ++i) {
        for (std::size_t j = 0; j < rows.cols(); ++j) {
            b(i, j) = s.V_inv(i, j);
        }
    }
    return b;
}

// Scales each rational row to a primitive integer row.
inline IntMatrix clear_denominators(const Matrix<Rational>& m)
{
    IntMatrix out(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Integer l = 1;
        for (std::size_t j = 0; j < m.cols(); ++j) {
            l = lcm(l, m(i, j).get_den());
        }
        for (std::size_t j = 0; j < m.cols(); ++j) {
            Rational v = m(i, j) * Rational(l);
            out(i, j) = v.get_num();
        }
    }
    return out;
}

// Integer solution of A x = b, if one exists.
inline std::optional<std::vector<Integer>> integer_solve(const IntMatrix& A, const std::vector<Integer>& b)
{
    auto s = smith_normal_form(A);
    std::vector<Integer> ub(A.rows(), Integer(0));
    for (std::size_t i = 0; i < A.rows(); ++i) {
        for (std::size_t j = 0; j < A.rows(); ++j) {
            ub[i] += s.U(i, j) * b[j];
        }
    }
    std::vector<Integer> y(A.cols(), Integer(0));
    for (std::size_t i = 0; i < A.rows(); ++i) {
        if (i < s.rank) {
            if (!mpz_divisible_p(ub[i].get_mpz_t(), s.D(i, i).get_mpz_t())) {
                return std::nullopt;
            }
            y[i] = ub[i] / s.D(i, i);
        } else if (ub[i] != 0) {
            return std::nullopt;
        }
    }
    std::vector<Integer> x(A.cols(), Integer(0));
    for (std::size_t i = 0; i < A.cols(); ++i) {
        for (std::size_t j = 0; j < A.cols(); ++j) {
            x[i] += s.V(i, j) * y[j];
        }
    }
    return x;
}

inline bool is_unimodular(const IntMatrix& m)
{
    if (m.rows() != m.cols()) {
        return false;
    }
    Integer d = determinant(m);
    return d == 1 || d == -1;
}

} // namespace shodge
