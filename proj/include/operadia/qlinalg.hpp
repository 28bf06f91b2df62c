#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace operadia {

using Rational = mpq_class;

std::string to_string(const Rational& q);
Rational parse_rational(const std::string& s);

// Sorted (index, value) pairs with no stored zeros.
class SVec {
public:
    using Entry = std::pair<int, Rational>;

    SVec() = default;
    explicit SVec(std::vector<Entry> entries);

    static SVec unit(int i, const Rational& v = 1);

    const std::vector<Entry>& entries() const { return e_; }
    bool empty() const { return e_.empty(); }
    std::size_t nnz() const { return e_.size(); }
    Rational get(int i) const;

    void axpy(const Rational& a, const SVec& x);
    SVec scaled(const Rational& a) const;
    Rational dot(const SVec& o) const;

    bool operator==(const SVec& o) const { return e_ == o.e_; }

private:
    std::vector<Entry> e_;
};

// Column-major sparse matrix over the rationals.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols);

    static Matrix identity(std::size_t n);
    static Matrix zero(std::size_t rows, std::size_t cols) { return Matrix(rows, cols); }
    static Matrix from_dense(const std::vector<std::vector<Rational>>& rows);
    static Matrix from_triplets(std::size_t rows, std::size_t cols,
                                const std::vector<std::tuple<int, int, Rational>>& t);
    static Matrix from_columns(std::size_t rows, std::vector<SVec> cols);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_.size(); }
    const SVec& col(std::size_t j) const { return cols_[j]; }
    const std::vector<SVec>& columns() const { return cols_; }
    void set_col(std::size_t j, SVec v);
    Rational at(std::size_t i, std::size_t j) const { return cols_[j].get(static_cast<int>(i)); }
    void add_to(std::size_t i, std::size_t j, const Rational& v);

    std::size_t nnz() const;
    bool is_zero() const;

    Matrix operator*(const Matrix& b) const;
    SVec operator*(const SVec& v) const;
    Matrix operator+(const Matrix& b) const;
    Matrix operator-(const Matrix& b) const;
    Matrix operator-() const;
    Matrix scaled(const Rational& a) const;
    Matrix transpose() const;
    Matrix select_columns(const std::vector<int>& idx) const;
    Matrix select_rows(const std::vector<int>& idx) const;
    Matrix hstack(const Matrix& b) const;
    Matrix vstack(const Matrix& b) const;

    // Row-major (row, col, value) list.
    std::vector<std::tuple<int, int, Rational>> entries() const;
    std::vector<std::vector<Rational>> dense() const;

    bool operator==(const Matrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_; }
    bool operator!=(const Matrix& o) const { return !(*this == o); }

private:
    std::size_t rows_ = 0;
    std::vector<SVec> cols_;
};

struct Subspace {
    std::size_t ambient_dim = 0;
    Matrix basis;  // columns

    std::size_t dim() const { return basis.cols(); }
};

// Reduced row echelon form of the row space of a matrix.
struct RowEchelon {
    std::vector<int> pivots;   // pivot column per row
    std::vector<SVec> rows;    // normalized rows, pivot entry 1, other pivot columns 0
    std::size_t cols = 0;
};

RowEchelon rref(const Matrix& m);

std::size_t rank(const Matrix& m);
Subspace kernel_basis(const Matrix& m);
Subspace image_basis(const Matrix& m);
std::pair<Matrix, Matrix> quotient(std::size_t ambient_dim, const Subspace& sub);
Matrix kronecker(const Matrix& a, const Matrix& b);

// Solutions x of m x = b for every column b of rhs, or nullopt if one column is inconsistent.
std::optional<Matrix> solve(const Matrix& m, const Matrix& rhs);

Subspace span(const Matrix& generators);
Subspace subspace_sum(const Subspace& a, const Subspace& b);
Subspace intersection(const Subspace& a, const Subspace& b);
bool contains(const Subspace& big, const Subspace& small);
bool contains(const Subspace& big, const SVec& v);
bool same_subspace(const Subspace& a, const Subspace& b);

}  // namespace operadia
