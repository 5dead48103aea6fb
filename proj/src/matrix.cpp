#include "signet/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "signet/error.hpp"

namespace signet {

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
    rows_ = rows.size();
    cols_ = rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& row : rows) {
        if (row.size() != cols_) throw std::invalid_argument("ragged initializer");
        data_.insert(data_.end(), row.begin(), row.end());
    }
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::ones_outer(std::size_t n) {
    Matrix m(n, n, 1.0 / static_cast<double>(n));
    return m;
}

Matrix Matrix::transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

Matrix& Matrix::operator+=(const Matrix& rhs) {
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += rhs.data_[k];
    return *this;
}

Matrix& Matrix::operator-=(const Matrix& rhs) {
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= rhs.data_[k];
    return *this;
}

Matrix& Matrix::operator*=(double s) {
    for (double& v : data_) v *= s;
    return *this;
}

Matrix mat_mul(const Matrix& a, const Matrix& b) {
    Matrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    }
    return c;
}

Vector mat_vec(const Matrix& a, const Vector& x) {
    Vector y(a.rows(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

Vector vec_mat(const Vector& x, const Matrix& a) {
    Vector y(a.cols(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        const double xi = x[i];
        if (xi == 0.0) continue;
        for (std::size_t j = 0; j < a.cols(); ++j) y[j] += xi * a(i, j);
    }
    return y;
}

double dot(const Vector& a, const Vector& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(const Vector& x) { return std::sqrt(dot(x, x)); }

double norm_inf(const Vector& x) {
    double m = 0.0;
    for (double v : x) m = std::max(m, std::fabs(v));
    return m;
}

Vector& axpy(Vector& y, double alpha, const Vector& x) {
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += alpha * x[i];
    return y;
}

double max_abs(const Matrix& a) {
    double m = 0.0;
    for (double v : a.data()) m = std::max(m, std::fabs(v));
    return m;
}

double frobenius_norm(const Matrix& a) {
    double s = 0.0;
    for (double v : a.data()) s += v * v;
    return std::sqrt(s);
}

double inf_norm(const Matrix& a) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < a.cols(); ++j) s += std::fabs(a(i, j));
        m = std::max(m, s);
    }
    return m;
}

bool is_symmetric(const Matrix& a, double tol) {
    if (a.rows() != a.cols()) return false;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = i + 1; j < a.cols(); ++j)
            if (std::fabs(a(i, j) - a(j, i)) > tol) return false;
    return true;
}

Matrix mat_pow(const Matrix& a, unsigned k) {
    Matrix result = Matrix::identity(a.rows());
    Matrix base = a;
    while (k > 0) {
        if (k & 1u) result = mat_mul(result, base);
        base = mat_mul(base, base);
        k >>= 1u;
    }
    return result;
}

std::string matrix_to_csv(const Matrix& a) {
    std::string out;
    char buf[40];
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            std::snprintf(buf, sizeof buf, "%.17g", a(i, j));
            out += buf;
            out += (j + 1 == a.cols()) ? '\n' : ',';
        }
    }
    return out;
}

LuFactorization::LuFactorization(Matrix a) : lu_(std::move(a)) {
    const std::size_t n = lu_.rows();
    perm_.resize(n);
    for (std::size_t i = 0; i < n; ++i) perm_[i] = i;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        double best = std::fabs(lu_(perm_[col], col));
        for (std::size_t r = col + 1; r < n; ++r) {
            const double v = std::fabs(lu_(perm_[r], col));
            if (v > best) {
                best = v;
                pivot = r;
            }
        }
        std::swap(perm_[col], perm_[pivot]);
        const double p = lu_(perm_[col], col);
        if (best == 0.0) {
            singular_ = true;
            continue;
        }
        for (std::size_t r = col + 1; r < n; ++r) {
            const double factor = lu_(perm_[r], col) / p;
            lu_(perm_[r], col) = factor;
            for (std::size_t c = col + 1; c < n; ++c)
                lu_(perm_[r], c) -= factor * lu_(perm_[col], c);
        }
    }
}

Vector LuFactorization::solve(const Vector& b) const {
    const std::size_t n = lu_.rows();
    Vector y(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double s = b[perm_[i]];
        for (std::size_t j = 0; j < i; ++j) s -= lu_(perm_[i], j) * y[j];
        y[i] = s;
    }
    Vector x(n, 0.0);
    for (std::size_t ii = n; ii-- > 0;) {
        double s = y[ii];
        for (std::size_t j = ii + 1; j < n; ++j) s -= lu_(perm_[ii], j) * x[j];
        const double d = lu_(perm_[ii], ii);
        // Near-singular diagonal: substitute a tiny pivot so inverse
        // iteration blows up along the null direction instead of dividing by 0.
        x[ii] = s / (d != 0.0 ? d : 1e-300);
    }
    return x;
}

const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::SelfLoop: return "SelfLoop";
        case ErrorCode::DuplicateEdge: return "DuplicateEdge";
        case ErrorCode::NodeOutOfRange: return "NodeOutOfRange";
        case ErrorCode::NonpositiveWeight: return "NonpositiveWeight";
        case ErrorCode::DisconnectedGraph: return "DisconnectedGraph";
        case ErrorCode::DirectedGraphUnsupported: return "DirectedGraphUnsupported";
        case ErrorCode::PositiveSubgraphDisconnected: return "PositiveSubgraphDisconnected";
        case ErrorCode::AlphaOutOfRange: return "AlphaOutOfRange";
        case ErrorCode::ProbabilityNotNormalized: return "ProbabilityNotNormalized";
        case ErrorCode::GaugeRequestedOnUnbalancedGraph: return "GaugeRequestedOnUnbalancedGraph";
        case ErrorCode::NotSymmetric: return "NotSymmetric";
        case ErrorCode::NoConvergence: return "NoConvergence";
        case ErrorCode::NotInConvergenceRegime: return "NotInConvergenceRegime";
        case ErrorCode::EigenvalueOneNotSimple: return "EigenvalueOneNotSimple";
        case ErrorCode::StepConditionViolated: return "StepConditionViolated";
        case ErrorCode::ParameterRangeViolation: return "ParameterRangeViolation";
        case ErrorCode::MonitorsMissing: return "MonitorsMissing";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::Precondition: return "Precondition";
    }
    return "Unknown";
}

}  // namespace signet
