#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "implicax/errors.hpp"
#include "implicax/poly.hpp"

namespace implicax {

/// Default seed for every randomized choice (specializations, sample points).
inline constexpr std::uint64_t kDefaultSeed = 20020101;

using Rng = std::mt19937_64;

/// No nonsingular minor of the requested size exists.
class RankDeficient : public Error {
public:
    using Error::Error;
};

/// Dense row-major matrix over the ground field.
template <FieldElement K>
class Mat {
public:
    Mat(std::size_t rows, std::size_t cols, FieldSpec field)
        : rows_(rows), cols_(cols), field_(field), data_(rows * cols, K::zero(field)) {}

    static Mat identity(std::size_t n, FieldSpec field) {
        Mat m(n, n, field);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = K::one(field);
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    const FieldSpec& field() const { return field_; }

    K& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const K& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<const K> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

    bool is_zero() const {
        return std::all_of(data_.begin(), data_.end(), [](const K& c) { return c.is_zero(); });
    }

    Mat transpose() const {
        Mat t(cols_, rows_, field_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    friend Mat operator*(const Mat& a, const Mat& b) {
        if (a.cols_ != b.rows_) throw ArithmeticError("matrix shape mismatch");
        Mat r(a.rows_, b.cols_, a.field_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const K& x = a(i, k);
                if (x.is_zero()) continue;
                for (std::size_t j = 0; j < b.cols_; ++j)
                    if (!b(k, j).is_zero()) r(i, j) += x * b(k, j);
            }
        return r;
    }

    std::vector<K> apply(std::span<const K> v) const {
        if (v.size() != cols_) throw ArithmeticError("vector length mismatch");
        std::vector<K> out(rows_, K::zero(field_));
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                if (!(*this)(i, j).is_zero() && !v[j].is_zero()) out[i] += (*this)(i, j) * v[j];
        return out;
    }

    Mat submatrix(std::span<const std::size_t> rs, std::span<const std::size_t> cs) const {
        Mat r(rs.size(), cs.size(), field_);
        for (std::size_t i = 0; i < rs.size(); ++i)
            for (std::size_t j = 0; j < cs.size(); ++j) r(i, j) = (*this)(rs[i], cs[j]);
        return r;
    }

    friend bool operator==(const Mat& a, const Mat& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

private:
    std::size_t rows_, cols_;
    FieldSpec field_;
    std::vector<K> data_;
};

/// Dense matrix with entries in k[T] (in practice linear forms in T).
template <FieldElement K>
class PolyMat {
public:
    PolyMat(std::size_t rows, std::size_t cols, RingPtr ring)
        : rows_(rows), cols_(cols), ring_(ring), data_(rows * cols, Poly<K>(ring)) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    const RingPtr& ring() const { return ring_; }

    Poly<K>& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Poly<K>& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    bool is_zero() const {
        return std::all_of(data_.begin(), data_.end(), [](const auto& p) { return p.is_zero(); });
    }

    /// Largest total degree of an entry (-1 for the zero matrix).
    int max_entry_degree() const {
        int d = -1;
        for (const auto& p : data_) d = std::max(d, p.total_degree());
        return d;
    }

    PolyMat submatrix(std::span<const std::size_t> rs, std::span<const std::size_t> cs) const {
        PolyMat r(rs.size(), cs.size(), ring_);
        for (std::size_t i = 0; i < rs.size(); ++i)
            for (std::size_t j = 0; j < cs.size(); ++j) r(i, j) = (*this)(rs[i], cs[j]);
        return r;
    }

    friend PolyMat operator*(const PolyMat& a, const PolyMat& b) {
        if (a.cols_ != b.rows_) throw ArithmeticError("matrix shape mismatch");
        PolyMat r(a.rows_, b.cols_, a.ring_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                if (a(i, k).is_zero()) continue;
                for (std::size_t j = 0; j < b.cols_; ++j)
                    if (!b(k, j).is_zero()) r(i, j) += a(i, k) * b(k, j);
            }
        return r;
    }

    friend PolyMat operator*(const PolyMat& a, const Mat<K>& b) {
        if (a.cols_ != b.rows()) throw ArithmeticError("matrix shape mismatch");
        PolyMat r(a.rows_, b.cols(), a.ring_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                if (a(i, k).is_zero()) continue;
                for (std::size_t j = 0; j < b.cols(); ++j)
                    if (!b(k, j).is_zero()) r(i, j) += a(i, k) * b(k, j);
            }
        return r;
    }

    std::string to_string() const {
        std::string s = "[";
        for (std::size_t i = 0; i < rows_; ++i) {
            s += i ? ", [" : "[";
            for (std::size_t j = 0; j < cols_; ++j) s += (j ? ", " : "") + (*this)(i, j).to_string();
            s += "]";
        }
        return s + "]";
    }

private:
    std::size_t rows_, cols_;
    RingPtr ring_;
    std::vector<Poly<K>> data_;
};

// -- elimination over the field ----------------------------------------------

template <FieldElement K>
struct Echelon {
    Mat<K> reduced;                    // reduced row echelon form
    std::vector<std::size_t> pivots;   // pivot column of each nonzero row
    std::size_t rank() const { return pivots.size(); }
};

/// Gauss-Jordan reduction to reduced row echelon form.
template <FieldElement K>
Echelon<K> rref(Mat<K> m) {
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
        std::size_t p = r;
        while (p < m.rows() && m(p, c).is_zero()) ++p;
        if (p == m.rows()) continue;
        if (p != r)
            for (std::size_t j = c; j < m.cols(); ++j) std::swap(m(p, j), m(r, j));
        K inv = m(r, c).inverse();
        for (std::size_t j = c; j < m.cols(); ++j)
            if (!m(r, j).is_zero()) m(r, j) *= inv;
        std::vector<std::size_t> nz;
        for (std::size_t j = c + 1; j < m.cols(); ++j)
            if (!m(r, j).is_zero()) nz.push_back(j);
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i == r || m(i, c).is_zero()) continue;
            K factor = m(i, c);
            m(i, c) = K::zero(m.field());
            for (auto j : nz) m(i, j) -= factor * m(r, j);
        }
        pivots.push_back(c);
        ++r;
    }
    return {std::move(m), std::move(pivots)};
}

template <FieldElement K>
std::size_t rank(const Mat<K>& m) {
    return rref(m).rank();
}

template <FieldElement K>
struct RankKernel {
    std::size_t rank = 0;
    /// Reduced echelon kernel basis: vector k has a 1 in free_columns[k] and
    /// 0 in every other free column.
    std::vector<std::vector<K>> kernel;
    std::vector<std::size_t> free_columns;
};

template <FieldElement K>
RankKernel<K> rank_and_kernel(const Mat<K>& m) {
    auto e = rref(m);
    RankKernel<K> out;
    out.rank = e.rank();
    std::vector<bool> is_pivot(m.cols(), false);
    for (auto c : e.pivots) is_pivot[c] = true;
    for (std::size_t f = 0; f < m.cols(); ++f) {
        if (is_pivot[f]) continue;
        std::vector<K> v(m.cols(), K::zero(m.field()));
        v[f] = K::one(m.field());
        for (std::size_t r = 0; r < e.pivots.size(); ++r)
            if (!e.reduced(r, f).is_zero()) v[e.pivots[r]] = -e.reduced(r, f);
        out.kernel.push_back(std::move(v));
        out.free_columns.push_back(f);
    }
    return out;
}

/// Row-reduced basis of the span of the given vectors.
template <FieldElement K>
std::vector<std::vector<K>> row_basis(const std::vector<std::vector<K>>& vectors, std::size_t dim,
                                      const FieldSpec& field) {
    Mat<K> m(vectors.size(), dim, field);
    for (std::size_t i = 0; i < vectors.size(); ++i)
        for (std::size_t j = 0; j < dim; ++j) m(i, j) = vectors[i][j];
    auto e = rref(std::move(m));
    std::vector<std::vector<K>> out;
    for (std::size_t r = 0; r < e.rank(); ++r) {
        auto row = e.reduced.row(r);
        out.emplace_back(row.begin(), row.end());
    }
    return out;
}

// -- determinants -------------------------------------------------------------

namespace detail {

template <class T, class IsZero, class Div>
T bareiss(std::vector<T> a, std::size_t n, T one, IsZero is_zero, Div div) {
    if (n == 0) return one;
    bool negate = false;
    T prev = one;
    auto at = [&](std::size_t i, std::size_t j) -> T& { return a[i * n + j]; };
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (is_zero(at(k, k))) {
            std::size_t p = k + 1;
            while (p < n && is_zero(at(p, k))) ++p;
            if (p == n) return one - one;
            for (std::size_t j = 0; j < n; ++j) std::swap(at(k, j), at(p, j));
            negate = !negate;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                T num = at(k, k) * at(i, j);
                if (!is_zero(at(i, k))) num = num - at(i, k) * at(k, j);
                at(i, j) = div(num, prev);
            }
        }
        prev = at(k, k);
    }
    T d = at(n - 1, n - 1);
    return negate ? -d : d;
}

} // namespace detail

/// Fraction-free (Bareiss) determinant over the field.
template <FieldElement K>
K det(const Mat<K>& m) {
    if (m.rows() != m.cols()) throw ArithmeticError("determinant of a non-square matrix");
    std::vector<K> a;
    a.reserve(m.rows() * m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (const auto& x : m.row(i)) a.push_back(x);
    return detail::bareiss<K>(
        std::move(a), m.rows(), K::one(m.field()), [](const K& x) { return x.is_zero(); },
        [](const K& x, const K& y) { return x / y; });
}

/// Fraction-free (Bareiss) determinant over k[T]; every division is exact.
template <FieldElement K>
Poly<K> det(const PolyMat<K>& m) {
    if (m.rows() != m.cols()) throw ArithmeticError("determinant of a non-square matrix");
    std::vector<Poly<K>> a;
    a.reserve(m.rows() * m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) a.push_back(m(i, j));
    auto one = Poly<K>::constant(m.ring(), K::one(m.ring()->field));
    return detail::bareiss<Poly<K>>(
        std::move(a), m.rows(), one, [](const Poly<K>& x) { return x.is_zero(); },
        [](const Poly<K>& x, const Poly<K>& y) {
            auto q = try_divide(x, y);
            if (!q) throw ConsistencyError("inexact Bareiss division");
            return std::move(*q);
        });
}

// -- specialization and minors --------------------------------------------------

template <FieldElement K>
Mat<K> specialize(const PolyMat<K>& m, std::span<const K> point) {
    Mat<K> r(m.rows(), m.cols(), m.ring()->field);
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            if (!m(i, j).is_zero()) r(i, j) = evaluate(m(i, j), point);
    return r;
}

/// Specialization by variable name; every variable occurring in m needs a value.
template <FieldElement K>
Mat<K> specialize(const PolyMat<K>& m, const std::map<std::string, K>& point) {
    const auto& ring = *m.ring();
    unsigned used = 0;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) used |= m(i, j).support();
    std::vector<K> values;
    for (std::size_t v = 0; v < ring.nvars(); ++v) {
        auto it = point.find(ring.vars[v]);
        if (it == point.end()) {
            if (used & (1u << v)) throw ArithmeticError("no value for variable " + ring.vars[v]);
            values.push_back(K::zero(ring.field));
        } else {
            values.push_back(it->second);
        }
    }
    return specialize(m, std::span<const K>(values));
}

template <FieldElement K>
std::vector<K> random_point(Rng& rng, const FieldSpec& f, std::size_t n) {
    std::vector<K> p;
    for (std::size_t i = 0; i < n; ++i) p.push_back(K::random(rng, f, 1000));
    return p;
}

/// Rank over k(T), estimated at one random specialization (a lower bound,
/// exact with high probability).
template <FieldElement K>
std::size_t generic_rank(const PolyMat<K>& m, Rng& rng) {
    auto point = random_point<K>(rng, m.ring()->field, m.ring()->nvars());
    return rank(specialize(m, std::span<const K>(point)));
}

template <FieldElement K>
struct MinorChoice {
    std::vector<std::size_t> rows;
    std::vector<std::size_t> cols;
    Poly<K> det;
};

inline constexpr int kMinorAttempts = 8;

/// Columns c with |c| = |rows| such that m[rows, c] is nonsingular over k(T).
/// Random specialization picks pivot columns; the symbolic determinant
/// confirms the choice.
template <FieldElement K>
MinorChoice<K> select_columns(const PolyMat<K>& m, const std::vector<std::size_t>& rows, Rng& rng) {
    std::vector<std::size_t> all_cols(m.cols());
    for (std::size_t j = 0; j < m.cols(); ++j) all_cols[j] = j;
    auto sub = m.submatrix(rows, all_cols);
    for (int attempt = 0; attempt < kMinorAttempts; ++attempt) {
        auto point = random_point<K>(rng, m.ring()->field, m.ring()->nvars());
        auto e = rref(specialize(sub, std::span<const K>(point)));
        if (e.rank() < rows.size()) continue;
        std::vector<std::size_t> cols(e.pivots.begin(), e.pivots.begin() + static_cast<long>(rows.size()));
        auto d = det(m.submatrix(rows, cols));
        if (!d.is_zero()) return {rows, cols, std::move(d)};
    }
    throw RankDeficient("no nonsingular " + std::to_string(rows.size()) + "x" + std::to_string(rows.size()) +
                        " minor on the given rows");
}

/// Row and column index sets of size target_rank with nonsingular minor.
template <FieldElement K>
MinorChoice<K> nonsingular_minor_select(const PolyMat<K>& m, std::size_t target_rank, std::uint64_t seed) {
    if (target_rank > std::min(m.rows(), m.cols())) throw RankDeficient("target rank exceeds matrix size");
    Rng rng(seed);
    std::vector<std::size_t> all_cols(m.cols());
    for (std::size_t j = 0; j < m.cols(); ++j) all_cols[j] = j;
    for (int attempt = 0; attempt < kMinorAttempts; ++attempt) {
        auto point = random_point<K>(rng, m.ring()->field, m.ring()->nvars());
        auto spec = specialize(m, std::span<const K>(point));
        auto ec = rref(spec);
        if (ec.rank() < target_rank) continue;
        std::vector<std::size_t> cols(ec.pivots.begin(), ec.pivots.begin() + static_cast<long>(target_rank));
        std::vector<std::size_t> all_rows(m.rows());
        for (std::size_t i = 0; i < m.rows(); ++i) all_rows[i] = i;
        auto er = rref(spec.submatrix(all_rows, cols).transpose());
        std::vector<std::size_t> rows(er.pivots.begin(), er.pivots.begin() + static_cast<long>(target_rank));
        auto d = det(m.submatrix(rows, cols));
        if (!d.is_zero()) return {rows, cols, std::move(d)};
    }
    throw RankDeficient("no nonsingular minor of size " + std::to_string(target_rank));
}

} // namespace implicax
