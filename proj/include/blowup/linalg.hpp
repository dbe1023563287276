#pragma once

#include "blowup/rational.hpp"

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

namespace blowup {

using SparseVector = std::map<std::size_t, Rational>;

// Row-major sparse matrix over the rationals.
class SparseMatrix {
public:
    SparseMatrix() = default;
    SparseMatrix(std::size_t rows, std::size_t cols) : cols_(cols), rows_(rows) {}

    std::size_t rows() const { return rows_.size(); }
    std::size_t cols() const { return cols_; }
    const SparseVector& row(std::size_t i) const { return rows_.at(i); }
    const std::vector<SparseVector>& row_data() const { return rows_; }

    void set(std::size_t i, std::size_t j, const Rational& v) {
        if (i >= rows_.size() || j >= cols_) throw std::out_of_range("SparseMatrix::set");
        if (sgn(v) == 0) rows_[i].erase(j);
        else rows_[i][j] = v;
    }
    void add(std::size_t i, std::size_t j, const Rational& v) {
        if (i >= rows_.size() || j >= cols_) throw std::out_of_range("SparseMatrix::add");
        Rational& x = rows_[i][j];
        x += v;
        if (sgn(x) == 0) rows_[i].erase(j);
    }
    Rational get(std::size_t i, std::size_t j) const {
        auto it = rows_.at(i).find(j);
        return it == rows_.at(i).end() ? Rational(0) : it->second;
    }
    std::size_t append_row(SparseVector r = {}) {
        rows_.push_back(std::move(r));
        return rows_.size() - 1;
    }
    std::size_t nonzeros() const {
        std::size_t n = 0;
        for (const auto& r : rows_) n += r.size();
        return n;
    }
    bool is_zero() const { return nonzeros() == 0; }

    SparseMatrix transpose() const {
        SparseMatrix t(cols_, rows_.size());
        for (std::size_t i = 0; i < rows_.size(); ++i)
            for (const auto& [j, v] : rows_[i]) t.rows_[j][i] = v;
        return t;
    }

    friend SparseMatrix operator*(const SparseMatrix& a, const SparseMatrix& b) {
        if (a.cols_ != b.rows()) throw std::invalid_argument("SparseMatrix: dimension mismatch in product");
        SparseMatrix c(a.rows(), b.cols_);
        for (std::size_t i = 0; i < a.rows(); ++i)
            for (const auto& [k, av] : a.rows_[i])
                for (const auto& [j, bv] : b.rows_[k]) c.add(i, j, av * bv);
        return c;
    }

    std::vector<std::vector<Rational>> dense() const {
        std::vector<std::vector<Rational>> d(rows_.size(), std::vector<Rational>(cols_, Rational(0)));
        for (std::size_t i = 0; i < rows_.size(); ++i)
            for (const auto& [j, v] : rows_[i]) d[i][j] = v;
        return d;
    }

private:
    std::size_t cols_ = 0;
    std::vector<SparseVector> rows_;
};

// Reduced row echelon form with a column priority (earlier columns pivot first).
struct RowEchelon {
    std::vector<SparseVector> rows;  // pivot row i has a 1 at pivots[i], zeros at other pivots
    std::vector<std::size_t> pivots;
    std::size_t cols = 0;
    std::vector<std::size_t> order;  // column priority used

    std::size_t rank() const { return pivots.size(); }
};

namespace detail {

inline void axpy(SparseVector& y, const Rational& a, const SparseVector& x) {
    for (const auto& [j, v] : x) {
        Rational& t = y[j];
        t += a * v;
        if (sgn(t) == 0) y.erase(j);
    }
}

}  // namespace detail

inline RowEchelon row_echelon(const SparseMatrix& m, std::vector<std::size_t> order = {}) {
    RowEchelon e;
    e.cols = m.cols();
    if (order.empty()) {
        order.resize(m.cols());
        for (std::size_t j = 0; j < order.size(); ++j) order[j] = j;
    }
    std::vector<std::size_t> rank_of(m.cols(), 0);
    for (std::size_t i = 0; i < order.size(); ++i) rank_of[order[i]] = i;
    e.order = order;

    // pivot column -> row index in e.rows; rows kept fully reduced against each other
    std::map<std::size_t, std::size_t> by_col;
    for (const auto& input : m.row_data()) {
        SparseVector r = input;
        for (const auto& [c, idx] : by_col) {
            auto it = r.find(c);
            if (it != r.end()) {
                Rational f = -it->second;
                detail::axpy(r, f, e.rows[idx]);
            }
        }
        if (r.empty()) continue;
        std::size_t piv = r.begin()->first;
        for (const auto& [j, v] : r)
            if (rank_of[j] < rank_of[piv]) piv = j;
        Rational inv = 1 / r.at(piv);
        for (auto& [j, v] : r) v *= inv;
        for (auto& other : e.rows) {
            auto it = other.find(piv);
            if (it != other.end()) {
                Rational f = -it->second;
                detail::axpy(other, f, r);
            }
        }
        by_col[piv] = e.rows.size();
        e.rows.push_back(std::move(r));
        e.pivots.push_back(piv);
    }
    return e;
}

inline std::size_t rank(const SparseMatrix& m) {
    // eliminate along the smaller dimension
    if (m.cols() < m.rows()) return row_echelon(m.transpose()).rank();
    return row_echelon(m).rank();
}

// Kernel basis: one vector per free column, equal to 1 there and 0 at other free columns.
struct Kernel {
    std::vector<SparseVector> basis;
    std::vector<std::size_t> free_columns;
};

inline Kernel kernel(const SparseMatrix& m, std::vector<std::size_t> order = {}) {
    RowEchelon e = row_echelon(m, std::move(order));
    std::vector<bool> is_pivot(m.cols(), false);
    for (std::size_t p : e.pivots) is_pivot[p] = true;
    Kernel k;
    for (std::size_t j = 0; j < m.cols(); ++j)
        if (!is_pivot[j]) k.free_columns.push_back(j);
    std::map<std::size_t, std::vector<std::pair<std::size_t, Rational>>> column_entries;
    for (std::size_t i = 0; i < e.rows.size(); ++i)
        for (const auto& [j, v] : e.rows[i])
            if (!is_pivot[j]) column_entries[j].emplace_back(e.pivots[i], v);
    for (std::size_t f : k.free_columns) {
        SparseVector v;
        v[f] = 1;
        for (const auto& [p, c] : column_entries[f]) v[p] = -c;
        k.basis.push_back(std::move(v));
    }
    return k;
}

inline SparseMatrix from_columns(const std::vector<SparseVector>& columns, std::size_t rows) {
    SparseMatrix m(rows, columns.size());
    for (std::size_t j = 0; j < columns.size(); ++j)
        for (const auto& [i, v] : columns[j]) m.set(i, j, v);
    return m;
}

}  // namespace blowup
