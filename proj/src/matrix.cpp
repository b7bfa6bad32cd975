#include "subfractal/matrix.hpp"

#include <cmath>

namespace subfractal {

Matrix Matrix::identity(std::size_t n)
{
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        m(i, i) = 1.0;
    return m;
}

Matrix Matrix::transposed() const
{
    Matrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            out(j, i) = (*this)(i, j);
    return out;
}

Matrix Matrix::operator*(const Matrix& rhs) const
{
    Matrix out(rows_, rhs.cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t k = 0; k < cols_; ++k) {
            const double a = (*this)(i, k);
            if (a == 0.0)
                continue;
            for (std::size_t j = 0; j < rhs.cols_; ++j)
                out(i, j) += a * rhs(k, j);
        }
    }
    return out;
}

std::vector<double> Matrix::operator*(const std::vector<double>& v) const
{
    std::vector<double> out(rows_, 0.0);
    for (std::size_t i = 0; i < rows_; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < cols_; ++j)
            acc += (*this)(i, j) * v[j];
        out[i] = acc;
    }
    return out;
}

void Matrix::scale_columns(const std::vector<double>& s)
{
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            (*this)(i, j) *= s[j];
}

Matrix Matrix::submatrix(const std::vector<int>& indices) const
{
    Matrix out(indices.size(), indices.size());
    for (std::size_t i = 0; i < indices.size(); ++i)
        for (std::size_t j = 0; j < indices.size(); ++j)
            out(i, j) = (*this)(static_cast<std::size_t>(indices[i]),
                                static_cast<std::size_t>(indices[j]));
    return out;
}

Matrix Matrix::permuted(const std::vector<int>& perm) const
{
    return submatrix(perm);
}

double Matrix::entry_sum() const
{
    double s = 0.0;
    for (double x : data_)
        s += x;
    return s;
}

double Matrix::max_row_sum() const
{
    double best = 0.0;
    for (std::size_t i = 0; i < rows_; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < cols_; ++j)
            s += (*this)(i, j);
        if (s > best)
            best = s;
    }
    return best;
}

bool Matrix::all_nonnegative() const
{
    for (double x : data_)
        if (!(x >= 0.0))
            return false;
    return true;
}

bool Matrix::all_finite() const
{
    for (double x : data_)
        if (!std::isfinite(x))
            return false;
    return true;
}

} // namespace subfractal
