#ifndef SUBFRACTAL_MATRIX_HPP
#define SUBFRACTAL_MATRIX_HPP

#include <cstddef>
#include <vector>

namespace subfractal {

/// Small dense row-major matrix of doubles. The matrices in this library
/// are desk-scale (N = m^(k-1) or a handful of graph vertices), so no
/// sparse machinery is needed.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    bool operator==(const Matrix& other) const = default;

    Matrix transposed() const;
    Matrix operator*(const Matrix& rhs) const;
    std::vector<double> operator*(const std::vector<double>& v) const;

    /// Scale column j by s[j] (right-multiplication by diag(s)).
    void scale_columns(const std::vector<double>& s);

    /// this restricted to the given row/column index set, in the given order.
    Matrix submatrix(const std::vector<int>& indices) const;

    /// Simultaneous row/column permutation: out(i,j) = in(perm[i], perm[j]).
    Matrix permuted(const std::vector<int>& perm) const;

    double entry_sum() const;
    double max_row_sum() const;
    bool all_nonnegative() const;
    bool all_finite() const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

} // namespace subfractal

#endif
