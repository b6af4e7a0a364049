#pragma once

#include "tau.hpp"

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

namespace shodge {

template <class T>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, T(0)) {}

    static Matrix identity(std::size_t n)
    {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            m(i, i) = T(1);
        }
        return m;
    }
    static Matrix from_rows(std::size_t cols, const std::vector<std::vector<T>>& rows)
    {
        Matrix m(rows.size(), cols);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != cols) {
                throw std::invalid_argument("ragged matrix rows");
            }
            for (std::size_t j = 0; j < cols; ++j) {
                m(i, j) = rows[i][j];
            }
        }
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::vector<T> row(std::size_t i) const
    {
        return std::vector<T>(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                              data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
    }
    std::vector<T> col(std::size_t j) const
    {
        std::vector<T> c(rows_);
        for (std::size_t i = 0; i < rows_; ++i) {
            c[i] = (*this)(i, j);
        }
        return c;
    }
    std::vector<std::vector<T>> row_list() const
    {
        std::vector<std::vector<T>> out;
        for (std::size_t i = 0; i < rows_; ++i) {
            out.push_back(row(i));
        }
        return out;
    }

    Matrix transpose() const
    {
        Matrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t j = 0; j < cols_; ++j) {
                t(j, i) = (*this)(i, j);
            }
        }
        return t;
    }

    friend Matrix operator*(const Matrix& a, const Matrix& b)
    {
        if (a.cols_ != b.rows_) {
            throw std::invalid_argument("matrix shape mismatch in product");
        }
        Matrix c(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i) {
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const T& x = a(i, k);
                if (x == T(0)) {
                    continue;
                }
                for (std::size_t j = 0; j < b.cols_; ++j) {
                    c(i, j) += x * b(k, j);
                }
            }
        }
        return c;
    }
    friend Matrix operator+(Matrix a, const Matrix& b)
    {
        a.check_same(b);
        for (std::size_t i = 0; i < a.data_.size(); ++i) {
            a.data_[i] += b.data_[i];
        }
        return a;
    }
    friend Matrix operator-(Matrix a, const Matrix& b)
    {
        a.check_same(b);
        for (std::size_t i = 0; i < a.data_.size(); ++i) {
            a.data_[i] -= b.data_[i];
        }
        return a;
    }
    friend bool operator==(const Matrix& a, const Matrix& b)
    {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

    template <class F>
    auto map(F f) const
    {
        Matrix<decltype(f(std::declval<T>()))> out(rows_, cols_);
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t j = 0; j < cols_; ++j) {
                out(i, j) = f((*this)(i, j));
            }
        }
        return out;
    }

private:
    void check_same(const Matrix& b) const
    {
        if (rows_ != b.rows_ || cols_ != b.cols_) {
            throw std::invalid_argument("matrix shape mismatch");
        }
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

template <class T>
std::vector<T> mat_vec(const Matrix<T>& m, const std::vector<T>& v)
{
    std::vector<T> out(m.rows(), T(0));
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            out[i] += m(i, j) * v[j];
        }
    }
    return out;
}

template <class T>
std::vector<T> vec_mat(const std::vector<T>& v, const Matrix<T>& m)
{
    std::vector<T> out(m.cols(), T(0));
    for (std::size_t i = 0; i < m.rows(); ++i) {
        if (v[i] == T(0)) {
            continue;
        }
        for (std::size_t j = 0; j < m.cols(); ++j) {
            out[j] += v[i] * m(i, j);
        }
    }
    return out;
}

template <class T>
bool is_zero_vector(const std::vector<T>& v)
{
    for (auto& x : v) {
        if (!(x == T(0))) {
            return false;
        }
    }
    return true;
}

// Gauss-Jordan elimination over a field with leftmost-column pivots.
// Returns the reduced row echelon form with zero rows dropped and the pivot columns.
template <class T>
std::pair<Matrix<T>, std::vector<std::size_t>> rref(Matrix<T> m)
{
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
        std::size_t p = r;
        while (p < m.rows() && m(p, c) == T(0)) {
            ++p;
        }
        if (p == m.rows()) {
            continue;
        }
        if (p != r) {
            for (std::size_t j = 0; j < m.cols(); ++j) {
                std::swap(m(p, j), m(r, j));
            }
        }
        T inv = T(1) / m(r, c);
        for (std::size_t j = c; j < m.cols(); ++j) {
            m(r, j) = m(r, j) * inv;
        }
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i == r || m(i, c) == T(0)) {
                continue;
            }
            T f = m(i, c);
            for (std::size_t j = c; j < m.cols(); ++j) {
                m(i, j) -= f * m(r, j);
            }
        }
        pivots.push_back(c);
        ++r;
    }
    Matrix<T> out(r, m.cols());
    for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            out(i, j) = m(i, j);
        }
    }
    return {out, pivots};
}

template <class T>
std::size_t rank(const Matrix<T>& m)
{
    return rref(m).first.rows();
}

// Basis (as rows) of {x : m x = 0}.
template <class T>
Matrix<T> kernel(const Matrix<T>& m)
{
    auto [r, piv] = rref(m);
    std::vector<bool> is_pivot(m.cols(), false);
    for (auto p : piv) {
        is_pivot[p] = true;
    }
    std::vector<std::vector<T>> basis;
    for (std::size_t f = 0; f < m.cols(); ++f) {
        if (is_pivot[f]) {
            continue;
        }
        std::vector<T> v(m.cols(), T(0));
        v[f] = T(1);
        for (std::size_t i = 0; i < piv.size(); ++i) {
            v[piv[i]] = -r(i, f);
        }
        basis.push_back(std::move(v));
    }
    return Matrix<T>::from_rows(m.cols(), basis);
}

template <class T>
std::optional<Matrix<T>> inverse(const Matrix<T>& m)
{
    if (m.rows() != m.cols()) {
        return std::nullopt;
    }
    std::size_t n = m.rows();
    Matrix<T> aug(n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            aug(i, j) = m(i, j);
        }
        aug(i, n + i) = T(1);
    }
    auto [r, piv] = rref(aug);
    if (piv.size() < n || piv[n - 1] != n - 1) {
        return std::nullopt;
    }
    Matrix<T> inv(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            inv(i, j) = r(i, n + j);
        }
    }
    return inv;
}

// Solves m x = b; returns one solution if the system is consistent.
template <class T>
std::optional<std::vector<T>> solve(const Matrix<T>& m, const std::vector<T>& b)
{
    Matrix<T> aug(m.rows(), m.cols() + 1);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            aug(i, j) = m(i, j);
        }
        aug(i, m.cols()) = b[i];
    }
    auto [r, piv] = rref(aug);
    if (!piv.empty() && piv.back() == m.cols()) {
        return std::nullopt;
    }
    std::vector<T> x(m.cols(), T(0));
    for (std::size_t i = 0; i < piv.size(); ++i) {
        x[piv[i]] = r(i, m.cols());
    }
    return x;
}

// Subspace of T^d stored by its reduced row echelon basis.
template <class T>
class BasicSubspace {
public:
    BasicSubspace() = default;
    explicit BasicSubspace(std::size_t ambient) : ambient_(ambient), basis_(0, ambient) {}
    BasicSubspace(std::size_t ambient, const std::vector<std::vector<T>>& spanning)
        : BasicSubspace(Matrix<T>::from_rows(ambient, spanning))
    {
    }
    explicit BasicSubspace(const Matrix<T>& spanning) : ambient_(spanning.cols())
    {
        basis_ = rref(spanning).first;
    }

    static BasicSubspace whole(std::size_t d) { return BasicSubspace(Matrix<T>::identity(d)); }

    std::size_t ambient() const { return ambient_; }
    std::size_t dim() const { return basis_.rows(); }
    const Matrix<T>& basis() const { return basis_; }
    std::vector<std::vector<T>> rows() const { return basis_.row_list(); }

    bool contains(const std::vector<T>& v) const
    {
        auto rows_ = rows();
        rows_.push_back(v);
        return BasicSubspace(ambient_, rows_).dim() == dim();
    }
    bool contains(const BasicSubspace& o) const { return (*this + o).dim() == dim(); }

    friend BasicSubspace operator+(const BasicSubspace& a, const BasicSubspace& b)
    {
        a.check(b);
        auto r = a.rows();
        auto s = b.rows();
        r.insert(r.end(), s.begin(), s.end());
        return BasicSubspace(a.ambient_, r);
    }

    // Linear functionals vanishing on the subspace, as a subspace of the dual.
    BasicSubspace annihilator() const
    {
        if (dim() == 0) {
            return whole(ambient_);
        }
        return BasicSubspace(kernel(basis_));
    }

    friend BasicSubspace intersect(const BasicSubspace& a, const BasicSubspace& b)
    {
        a.check(b);
        return (a.annihilator() + b.annihilator()).annihilator();
    }

    // Image of the row vectors under v -> v * m.
    BasicSubspace image(const Matrix<T>& m) const
    {
        if (m.rows() != ambient_) {
            throw std::invalid_argument("subspace image: shape mismatch");
        }
        if (dim() == 0) {
            return BasicSubspace(m.cols());
        }
        return BasicSubspace(basis_ * m);
    }

    friend bool operator==(const BasicSubspace& a, const BasicSubspace& b)
    {
        return a.ambient_ == b.ambient_ && a.basis_ == b.basis_;
    }

private:
    void check(const BasicSubspace& b) const
    {
        if (ambient_ != b.ambient_) {
            throw std::invalid_argument("subspaces of different ambient spaces");
        }
    }

    std::size_t ambient_ = 0;
    Matrix<T> basis_;
};

using Subspace = BasicSubspace<TauFraction>;

inline Subspace tau_conjugate(const Subspace& s)
{
    return Subspace(s.basis().map([](const TauFraction& x) { return tau_conjugate(x); }));
}

// True when every basis entry is a rational constant.
inline bool is_rational(const Subspace& s)
{
    const auto& b = s.basis();
    for (std::size_t i = 0; i < b.rows(); ++i) {
        for (std::size_t j = 0; j < b.cols(); ++j) {
            if (!b(i, j).is_rational()) {
                return false;
            }
        }
    }
    return true;
}

inline Matrix<TauFraction> to_fraction(const Matrix<TauScalar>& m)
{
    return m.map([](const TauScalar& s) { return TauFraction(s); });
}

inline Matrix<TauFraction> to_fraction(const Matrix<Integer>& m)
{
    return m.map([](const Integer& z) { return TauFraction(Rational(z)); });
}

} // namespace shodge
