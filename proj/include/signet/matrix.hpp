#pragma once

#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

namespace signet {

/// Dense row-major real matrix. Everything in this toolkit runs at desk
/// scale (n <= ~200), so no sparse storage is provided.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
    Matrix(std::initializer_list<std::initializer_list<double>> rows);

    static Matrix identity(std::size_t n);
    /// Rank-one matrix ones*ones^T / n ("J" in consensus analysis).
    static Matrix ones_outer(std::size_t n);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    const std::vector<double>& data() const noexcept { return data_; }

    Matrix transpose() const;

    Matrix& operator+=(const Matrix& rhs);
    Matrix& operator-=(const Matrix& rhs);
    Matrix& operator*=(double s);

    friend Matrix operator+(Matrix lhs, const Matrix& rhs) { return lhs += rhs; }
    friend Matrix operator-(Matrix lhs, const Matrix& rhs) { return lhs -= rhs; }
    friend Matrix operator*(Matrix lhs, double s) { return lhs *= s; }
    friend Matrix operator*(double s, Matrix rhs) { return rhs *= s; }

    bool operator==(const Matrix& rhs) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

using Vector = std::vector<double>;

Matrix mat_mul(const Matrix& a, const Matrix& b);
Vector mat_vec(const Matrix& a, const Vector& x);
Vector vec_mat(const Vector& x, const Matrix& a);  // x^T A, returned as a vector

double dot(const Vector& a, const Vector& b);
double norm2(const Vector& x);
double norm_inf(const Vector& x);
Vector& axpy(Vector& y, double alpha, const Vector& x);  // y += alpha*x

double max_abs(const Matrix& a);
double frobenius_norm(const Matrix& a);
/// max_i sum_j |a_ij|
double inf_norm(const Matrix& a);
bool is_symmetric(const Matrix& a, double tol);

Matrix mat_pow(const Matrix& a, unsigned k);

/// Row-major CSV with 17 significant digits per entry.
std::string matrix_to_csv(const Matrix& a);

/// LU factorization with partial pivoting; solve() reuses the factors.
class LuFactorization {
public:
    explicit LuFactorization(Matrix a);

    bool singular() const noexcept { return singular_; }
    /// Solves A x = b. Near-singular systems still produce a (large) result,
    /// which is what inverse iteration wants.
    Vector solve(const Vector& b) const;

private:
    Matrix lu_;
    std::vector<std::size_t> perm_;
    bool singular_ = false;
};

}  // namespace signet
