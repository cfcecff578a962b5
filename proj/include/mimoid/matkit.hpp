#pragma once

#include <complex>
#include <limits>
#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace mimoid {

using Matrix  = Eigen::MatrixXd;
using Vector  = Eigen::VectorXd;
using Complex = std::complex<double>;

inline constexpr double kMachineEps = std::numeric_limits<double>::epsilon();

} // namespace mimoid

// Dense numerical primitives with fixed sign conventions so that repeated runs
// and golden tests are bit-stable.
namespace mimoid::matkit {

struct SvdResult {
    Matrix left_vectors;   // rows x rows
    Vector singular_values; // min(rows, cols), non-increasing
    Matrix right_vectors;  // cols x cols
};

struct TruncatedSvd {
    Matrix left;   // rows x r
    Vector values; // r
    Matrix right;  // cols x r, so M_r = left * diag(values) * right^T

    [[nodiscard]] Matrix reconstruct() const;
};

struct LqResult {
    Matrix L;  // rows x k, lower trapezoidal, non-negative diagonal
    Matrix Qt; // k x cols, orthonormal rows; k = min(rows, cols)
};

// Full SVD. In each left singular vector the first entry of largest absolute
// value is made non-negative; the matching right vector is flipped with it.
SvdResult svd(const Matrix& M);

Vector singular_values(const Matrix& M);

TruncatedSvd truncated_svd(const Matrix& M, int r);

LqResult lq(const Matrix& M);

// Moore-Penrose inverse; singular values below rank_tol * sigma_max are
// dropped. Default rank_tol is max(rows, cols) * machine epsilon.
Matrix pinv(const Matrix& M, std::optional<double> rank_tol = std::nullopt);

// Eigenvalues with multiplicity, sorted by (real, imag).
std::vector<Complex> spectrum(const Matrix& M);

double spectral_norm(const Matrix& M);

// sigma_max / sigma_min over all min(rows, cols) singular values; +inf when
// the smallest one is exactly zero.
double cond(const Matrix& M);

// Number of singular values above rank_tol * sigma_max (same default as pinv).
int numerical_rank(const Matrix& M, std::optional<double> rank_tol = std::nullopt);

double default_rank_tol(const Matrix& M);

void require_finite(const Matrix& M, const char* what);

} // namespace mimoid::matkit
