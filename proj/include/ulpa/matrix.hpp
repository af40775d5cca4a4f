#pragma once

#include <vector>

#include <ulpa/ring.hpp>

namespace ulpa {

// Dense matrix with exact ring scalars.
class Matrix {
public:
    Matrix(Ring ring, int rows, int cols)
        : ring_(ring), rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols, ring.zero()) {}

    static Matrix identity(Ring ring, int n) {
        Matrix m(ring, n, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = ring.one();
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    const Ring& ring() const { return ring_; }

    Scalar& at(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
    const Scalar& at(int i, int j) const { return a_[static_cast<size_t>(i) * cols_ + j]; }

    bool is_zero() const {
        for (const auto& x : a_)
            if (!ring_.is_zero(x)) return false;
        return true;
    }

    std::vector<Scalar> column(int j) const {
        std::vector<Scalar> out(rows_);
        for (int i = 0; i < rows_; ++i) out[i] = at(i, j);
        return out;
    }

    std::vector<Scalar> apply(const std::vector<Scalar>& v) const {
        if (static_cast<int>(v.size()) != cols_) throw Error("dimension mismatch");
        std::vector<Scalar> out(rows_, ring_.zero());
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j)
                out[i] = ring_.add(out[i], ring_.mul(at(i, j), v[j]));
        return out;
    }

    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        if (a.cols_ != b.rows_) throw Error("dimension mismatch in matrix product");
        Matrix out(a.ring_, a.rows_, b.cols_);
        for (int i = 0; i < a.rows_; ++i)
            for (int k = 0; k < a.cols_; ++k) {
                if (a.ring_.is_zero(a.at(i, k))) continue;
                for (int j = 0; j < b.cols_; ++j)
                    out.at(i, j) = a.ring_.add(out.at(i, j), a.ring_.mul(a.at(i, k), b.at(k, j)));
            }
        return out;
    }

    friend Matrix operator+(const Matrix& a, const Matrix& b) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw Error("dimension mismatch in matrix sum");
        Matrix out(a.ring_, a.rows_, a.cols_);
        for (size_t i = 0; i < a.a_.size(); ++i) out.a_[i] = a.ring_.add(a.a_[i], b.a_[i]);
        return out;
    }

    friend Matrix operator-(const Matrix& a, const Matrix& b) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw Error("dimension mismatch in matrix sum");
        Matrix out(a.ring_, a.rows_, a.cols_);
        for (size_t i = 0; i < a.a_.size(); ++i) out.a_[i] = a.ring_.sub(a.a_[i], b.a_[i]);
        return out;
    }

    friend bool operator==(const Matrix& a, const Matrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.a_ == b.a_;
    }

private:
    Ring ring_;
    int rows_, cols_;
    std::vector<Scalar> a_;
};

// Incremental row-reduced span of vectors over a field; used for rank,
// membership and closure computations.
class SpanBuilder {
public:
    SpanBuilder(Ring ring, int dim) : ring_(ring), dim_(dim) {
        if (!ring.is_field()) throw Error("exact elimination needs a field, not " + ring.name());
    }

    // Returns true when the vector enlarged the span.
    bool add(std::vector<Scalar> v) {
        if (static_cast<int>(v.size()) != dim_) throw Error("dimension mismatch");
        reduce(v);
        int pivot = -1;
        for (int i = 0; i < dim_; ++i)
            if (!ring_.is_zero(v[i])) {
                pivot = i;
                break;
            }
        if (pivot < 0) return false;
        Scalar inv = ring_.inv(v[pivot]);
        for (auto& x : v) x = ring_.mul(x, inv);
        rows_.push_back(std::move(v));
        pivots_.push_back(pivot);
        return true;
    }

    bool contains(std::vector<Scalar> v) const {
        reduce(v);
        for (const auto& x : v)
            if (!ring_.is_zero(x)) return false;
        return true;
    }

    int rank() const { return static_cast<int>(rows_.size()); }

private:
    void reduce(std::vector<Scalar>& v) const {
        for (size_t r = 0; r < rows_.size(); ++r) {
            const Scalar c = v[pivots_[r]];  // copy: the loop below clears this slot
            if (ring_.is_zero(c)) continue;
            for (int i = 0; i < dim_; ++i) v[i] = ring_.sub(v[i], ring_.mul(c, rows_[r][i]));
        }
    }

    Ring ring_;
    int dim_;
    std::vector<std::vector<Scalar>> rows_;
    std::vector<int> pivots_;
};

inline int matrix_rank(const Matrix& m) {
    SpanBuilder span(m.ring(), m.rows());
    for (int j = 0; j < m.cols(); ++j) span.add(m.column(j));
    return span.rank();
}

inline int span_rank(const Ring& ring, int dim, const std::vector<std::vector<Scalar>>& vectors) {
    SpanBuilder span(ring, dim);
    for (const auto& v : vectors) span.add(v);
    return span.rank();
}

}  // namespace ulpa
