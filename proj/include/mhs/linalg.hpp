#pragma once

// Exact dense linear algebra over a field F (Rational or Gauss).
// Subspaces are stored by their reduced row-echelon basis, so two spanning
// sets of the same space give identical objects.

#include "mhs/scalars.hpp"

#include <algorithm>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mhs {

template <class F>
using Vec = std::vector<F>;

template <class F>
class Matrix {
  public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, F(0)) {}

    static Matrix identity(std::size_t n)
    {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i)
            m(i, i) = F(1);
        return m;
    }

    /// Matrix whose rows are the given vectors (all of length cols).
    static Matrix from_rows(const std::vector<Vec<F>>& rows, std::size_t cols)
    {
        Matrix m(rows.size(), cols);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != cols)
                throw std::invalid_argument("row length mismatch");
            for (std::size_t j = 0; j < cols; ++j)
                m(i, j) = rows[i][j];
        }
        return m;
    }

    static Matrix from_columns(const std::vector<Vec<F>>& cols, std::size_t rows)
    {
        return from_rows(cols, rows).transpose();
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    F& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const F& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    Vec<F> row(std::size_t r) const { return Vec<F>(data_.begin() + r * cols_, data_.begin() + (r + 1) * cols_); }
    Vec<F> col(std::size_t c) const
    {
        Vec<F> v(rows_);
        for (std::size_t r = 0; r < rows_; ++r)
            v[r] = (*this)(r, c);
        return v;
    }

    Matrix transpose() const
    {
        Matrix t(cols_, rows_);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < cols_; ++c)
                t(c, r) = (*this)(r, c);
        return t;
    }

    bool is_zero() const
    {
        return std::all_of(data_.begin(), data_.end(), [](const F& x) { return mhs::is_zero(x); });
    }

    Matrix& operator+=(const Matrix& o)
    {
        check_same_shape(o);
        for (std::size_t i = 0; i < data_.size(); ++i)
            data_[i] += o.data_[i];
        return *this;
    }
    Matrix& operator-=(const Matrix& o)
    {
        check_same_shape(o);
        for (std::size_t i = 0; i < data_.size(); ++i)
            data_[i] -= o.data_[i];
        return *this;
    }
    friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
    friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
    friend Matrix operator*(const F& s, Matrix a)
    {
        for (auto& x : a.data_)
            x = s * x;
        return a;
    }

    friend Matrix operator*(const Matrix& a, const Matrix& b)
    {
        if (a.cols_ != b.rows_)
            throw std::invalid_argument("matrix product dimension mismatch");
        Matrix r(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const F& aik = a(i, k);
                if (mhs::is_zero(aik))
                    continue;
                for (std::size_t j = 0; j < b.cols_; ++j)
                    r(i, j) += aik * b(k, j);
            }
        return r;
    }

    friend Vec<F> operator*(const Matrix& a, const Vec<F>& v)
    {
        if (a.cols_ != v.size())
            throw std::invalid_argument("matrix-vector dimension mismatch");
        Vec<F> r(a.rows_, F(0));
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k)
                if (!mhs::is_zero(v[k]))
                    r[i] += a(i, k) * v[k];
        return r;
    }

    friend bool operator==(const Matrix& a, const Matrix& b)
    {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

    Matrix conj() const
    {
        Matrix r = *this;
        for (auto& x : r.data_)
            x = mhs::conj(x);
        return r;
    }

  private:
    void check_same_shape(const Matrix& o) const
    {
        if (rows_ != o.rows_ || cols_ != o.cols_)
            throw std::invalid_argument("matrix shape mismatch");
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<F> data_;
};

template <class F>
bool is_zero_vector(const Vec<F>& v)
{
    return std::all_of(v.begin(), v.end(), [](const F& x) { return is_zero(x); });
}

template <class F>
Vec<F> conj(const Vec<F>& v)
{
    Vec<F> r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        r[i] = conj(v[i]);
    return r;
}

template <class F>
Vec<F> operator+(Vec<F> a, const Vec<F>& b)
{
    if (a.size() != b.size())
        throw std::invalid_argument("vector length mismatch");
    for (std::size_t i = 0; i < a.size(); ++i)
        a[i] += b[i];
    return a;
}

template <class F>
Vec<F> operator-(Vec<F> a, const Vec<F>& b)
{
    if (a.size() != b.size())
        throw std::invalid_argument("vector length mismatch");
    for (std::size_t i = 0; i < a.size(); ++i)
        a[i] -= b[i];
    return a;
}

template <class F>
Vec<F> scale(const F& s, Vec<F> v)
{
    for (auto& x : v)
        x = s * x;
    return v;
}

template <class F>
Vec<F> unit_vector(std::size_t n, std::size_t i)
{
    Vec<F> v(n, F(0));
    v.at(i) = F(1);
    return v;
}

template <class F>
struct Echelon {
    Matrix<F> reduced;               // nonzero rows only
    std::vector<std::size_t> pivots; // pivot column per row
};

/// Reduced row echelon form; pivots are the leftmost nonzero columns.
template <class F>
Echelon<F> rref(Matrix<F> m)
{
    std::size_t rows = m.rows(), cols = m.cols();
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t p = r;
        while (p < rows && is_zero(m(p, c)))
            ++p;
        if (p == rows)
            continue;
        if (p != r)
            for (std::size_t j = 0; j < cols; ++j)
                std::swap(m(p, j), m(r, j));
        F inv = F(1) / m(r, c);
        for (std::size_t j = c; j < cols; ++j)
            m(r, j) *= inv;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || is_zero(m(i, c)))
                continue;
            F f = m(i, c);
            for (std::size_t j = c; j < cols; ++j)
                m(i, j) -= f * m(r, j);
        }
        pivots.push_back(c);
        ++r;
    }
    Matrix<F> red(r, cols);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < cols; ++j)
            red(i, j) = m(i, j);
    return {std::move(red), std::move(pivots)};
}

template <class F>
std::size_t rank(const Matrix<F>& m)
{
    return rref(m).pivots.size();
}

template <class F>
class Subspace {
  public:
    Subspace() = default;
    explicit Subspace(std::size_t ambient) : ambient_(ambient), basis_(0, ambient) {}

    static Subspace zero(std::size_t ambient) { return Subspace(ambient); }
    static Subspace full(std::size_t ambient) { return span(ambient, identity_rows(ambient)); }

    static Subspace span(std::size_t ambient, const std::vector<Vec<F>>& vectors)
    {
        Subspace s(ambient);
        if (vectors.empty())
            return s;
        auto e = rref(Matrix<F>::from_rows(vectors, ambient));
        s.basis_ = std::move(e.reduced);
        s.pivots_ = std::move(e.pivots);
        return s;
    }

    static Subspace row_space(const Matrix<F>& m)
    {
        Subspace s(m.cols());
        auto e = rref(m);
        s.basis_ = std::move(e.reduced);
        s.pivots_ = std::move(e.pivots);
        return s;
    }

    std::size_t ambient() const { return ambient_; }
    std::size_t dim() const { return basis_.rows(); }
    bool is_zero() const { return dim() == 0; }
    bool is_full() const { return dim() == ambient_; }

    /// Canonical basis as rows.
    const Matrix<F>& basis() const { return basis_; }
    const std::vector<std::size_t>& pivots() const { return pivots_; }
    std::vector<Vec<F>> basis_vectors() const
    {
        std::vector<Vec<F>> v;
        for (std::size_t i = 0; i < dim(); ++i)
            v.push_back(basis_.row(i));
        return v;
    }

    /// ambient x dim matrix whose columns are the basis vectors.
    Matrix<F> embedding() const { return basis_.transpose(); }

    /// Coordinates of v (assumed in the subspace) on the canonical basis.
    Vec<F> coordinates(const Vec<F>& v) const
    {
        Vec<F> c(dim());
        for (std::size_t i = 0; i < dim(); ++i)
            c[i] = v.at(pivots_[i]);
        return c;
    }

    /// dim x ambient matrix selecting pivot coordinates (left inverse of embedding).
    Matrix<F> coordinate_map() const
    {
        Matrix<F> m(dim(), ambient_);
        for (std::size_t i = 0; i < dim(); ++i)
            m(i, pivots_[i]) = F(1);
        return m;
    }

    bool contains(const Vec<F>& v) const
    {
        if (v.size() != ambient_)
            throw std::invalid_argument("membership: dimension mismatch");
        Vec<F> r = v;
        for (std::size_t i = 0; i < dim(); ++i) {
            F f = r[pivots_[i]];
            if (mhs::is_zero(f))
                continue;
            for (std::size_t j = 0; j < ambient_; ++j)
                r[j] -= f * basis_(i, j);
        }
        return is_zero_vector(r);
    }

    bool contains(const Subspace& o) const
    {
        check_ambient(o);
        for (std::size_t i = 0; i < o.dim(); ++i)
            if (!contains(o.basis_.row(i)))
                return false;
        return true;
    }

    friend bool operator==(const Subspace& a, const Subspace& b)
    {
        return a.ambient_ == b.ambient_ && a.basis_ == b.basis_;
    }

    void check_ambient(const Subspace& o) const
    {
        if (ambient_ != o.ambient_)
            throw std::invalid_argument("subspaces live in different ambient spaces");
    }

  private:
    static std::vector<Vec<F>> identity_rows(std::size_t n)
    {
        std::vector<Vec<F>> rows;
        for (std::size_t i = 0; i < n; ++i)
            rows.push_back(unit_vector<F>(n, i));
        return rows;
    }

    std::size_t ambient_ = 0;
    Matrix<F> basis_;
    std::vector<std::size_t> pivots_;
};

/// Null space of m (as a subspace of F^cols).
template <class F>
Subspace<F> kernel(const Matrix<F>& m)
{
    auto e = rref(m);
    std::size_t cols = m.cols();
    std::vector<bool> is_pivot(cols, false);
    for (auto p : e.pivots)
        is_pivot[p] = true;
    std::vector<Vec<F>> vecs;
    for (std::size_t f = 0; f < cols; ++f) {
        if (is_pivot[f])
            continue;
        Vec<F> v(cols, F(0));
        v[f] = F(1);
        for (std::size_t r = 0; r < e.pivots.size(); ++r)
            v[e.pivots[r]] = -e.reduced(r, f);
        vecs.push_back(std::move(v));
    }
    return Subspace<F>::span(cols, vecs);
}

/// Column space of m (as a subspace of F^rows).
template <class F>
Subspace<F> image(const Matrix<F>& m)
{
    return Subspace<F>::row_space(m.transpose());
}

/// Linear functionals (rows) cutting out s: s = kernel(annihilator(s)).
template <class F>
Matrix<F> annihilator(const Subspace<F>& s)
{
    Subspace<F> k = kernel(s.basis());
    if (s.dim() == 0)
        k = Subspace<F>::full(s.ambient());
    return k.basis();
}

template <class F>
Subspace<F> sum(const Subspace<F>& a, const Subspace<F>& b)
{
    a.check_ambient(b);
    auto v = a.basis_vectors();
    auto w = b.basis_vectors();
    v.insert(v.end(), w.begin(), w.end());
    return Subspace<F>::span(a.ambient(), v);
}

template <class F>
Subspace<F> intersect(const Subspace<F>& a, const Subspace<F>& b)
{
    a.check_ambient(b);
    Matrix<F> ea = annihilator(a), eb = annihilator(b);
    std::vector<Vec<F>> rows;
    for (std::size_t i = 0; i < ea.rows(); ++i)
        rows.push_back(ea.row(i));
    for (std::size_t i = 0; i < eb.rows(); ++i)
        rows.push_back(eb.row(i));
    if (rows.empty())
        return Subspace<F>::full(a.ambient());
    return kernel(Matrix<F>::from_rows(rows, a.ambient()));
}

/// Image of a subspace under m.
template <class F>
Subspace<F> apply(const Matrix<F>& m, const Subspace<F>& s)
{
    if (m.cols() != s.ambient())
        throw std::invalid_argument("apply: dimension mismatch");
    if (s.dim() == 0)
        return Subspace<F>::zero(m.rows());
    return image(m * s.embedding());
}

/// {x : m x in s}.
template <class F>
Subspace<F> preimage(const Matrix<F>& m, const Subspace<F>& s)
{
    if (m.rows() != s.ambient())
        throw std::invalid_argument("preimage: dimension mismatch");
    if (s.is_full())
        return Subspace<F>::full(m.cols());
    return kernel(annihilator(s) * m);
}

/// Canonical solution of m x = v (free variables set to zero), if any.
template <class F>
std::optional<Vec<F>> solve(const Matrix<F>& m, const Vec<F>& v)
{
    if (m.rows() != v.size())
        throw std::invalid_argument("solve: dimension mismatch");
    Matrix<F> aug(m.rows(), m.cols() + 1);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j)
            aug(i, j) = m(i, j);
        aug(i, m.cols()) = v[i];
    }
    auto e = rref(aug);
    Vec<F> x(m.cols(), F(0));
    for (std::size_t r = 0; r < e.pivots.size(); ++r) {
        if (e.pivots[r] == m.cols())
            return std::nullopt;
        x[e.pivots[r]] = e.reduced(r, m.cols());
    }
    return x;
}

/// Projection onto big/small, defined on the whole ambient space.
/// map: ambient -> F^(dim big - dim small); section: F^q -> big.  On big,
/// map has kernel exactly small and map * section = identity.
template <class F>
struct QuotientMap {
    Matrix<F> map;
    Matrix<F> section;
    std::size_t dim() const { return map.rows(); }
};

template <class F>
QuotientMap<F> quotient_map(const Subspace<F>& small, const Subspace<F>& big)
{
    small.check_ambient(big);
    if (!big.contains(small))
        throw std::invalid_argument("quotient_map: subspace is not contained in the larger space");
    std::size_t n = small.ambient();
    // basis: small's canonical rows, then big's rows extending it, then unit vectors
    std::vector<Vec<F>> chosen = small.basis_vectors();
    std::size_t first_quot = chosen.size();
    auto extend = [&](const Vec<F>& v) {
        Subspace<F> cur = Subspace<F>::span(n, chosen);
        if (!cur.contains(v))
            chosen.push_back(v);
    };
    for (const auto& v : big.basis_vectors())
        extend(v);
    std::size_t end_quot = chosen.size();
    for (std::size_t i = 0; i < n && chosen.size() < n; ++i)
        extend(unit_vector<F>(n, i));
    Matrix<F> basis = Matrix<F>::from_columns(chosen, n);
    // invert basis
    Matrix<F> inv(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        auto x = solve(basis, unit_vector<F>(n, i));
        for (std::size_t j = 0; j < n; ++j)
            inv(j, i) = (*x)[j];
    }
    std::size_t q = end_quot - first_quot;
    QuotientMap<F> result{Matrix<F>(q, n), Matrix<F>(n, q)};
    for (std::size_t r = 0; r < q; ++r) {
        for (std::size_t j = 0; j < n; ++j) {
            result.map(r, j) = inv(first_quot + r, j);
            result.section(j, r) = chosen[first_quot + r][j];
        }
    }
    return result;
}

template <class F>
Matrix<F> block_diagonal(const std::vector<Matrix<F>>& blocks)
{
    std::size_t r = 0, c = 0;
    for (const auto& b : blocks) {
        r += b.rows();
        c += b.cols();
    }
    Matrix<F> m(r, c);
    std::size_t ro = 0, co = 0;
    for (const auto& b : blocks) {
        for (std::size_t i = 0; i < b.rows(); ++i)
            for (std::size_t j = 0; j < b.cols(); ++j)
                m(ro + i, co + j) = b(i, j);
        ro += b.rows();
        co += b.cols();
    }
    return m;
}

template <class F>
Matrix<F> power(const Matrix<F>& m, unsigned k)
{
    Matrix<F> r = Matrix<F>::identity(m.rows());
    for (unsigned i = 0; i < k; ++i)
        r = r * m;
    return r;
}

template <class F>
bool is_nilpotent(const Matrix<F>& m)
{
    return m.rows() == m.cols() && power(m, static_cast<unsigned>(m.rows())).is_zero();
}

template <class F>
std::string matrix_to_string(const Matrix<F>& m)
{
    std::string s = "[";
    for (std::size_t i = 0; i < m.rows(); ++i) {
        s += i ? ", [" : "[";
        for (std::size_t j = 0; j < m.cols(); ++j)
            s += (j ? ", " : "") + to_string(m(i, j));
        s += "]";
    }
    return s + "]";
}

template <class F>
std::string vector_to_string(const Vec<F>& v)
{
    std::string s = "(";
    for (std::size_t j = 0; j < v.size(); ++j)
        s += (j ? ", " : "") + to_string(v[j]);
    return s + ")";
}

using GMatrix = Matrix<Gauss>;
using GVec = Vec<Gauss>;
using GSpace = Subspace<Gauss>;

} // namespace mhs
