#include "mimoid/matkit.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mimoid/error.hpp"

namespace mimoid::matkit {

void require_finite(const Matrix& M, const char* what) {
    if (!M.allFinite()) {
        throw Error(ErrorKind::InvalidInput, std::string(what) + " contains non-finite entries");
    }
}

SvdResult svd(const Matrix& M) {
    require_finite(M, "svd input");
    Eigen::JacobiSVD<Matrix> solver(M, Eigen::ComputeFullU | Eigen::ComputeFullV);
    SvdResult out{solver.matrixU(), solver.singularValues(), solver.matrixV()};

    const Eigen::Index k = out.singular_values.size();
    for (Eigen::Index j = 0; j < k; ++j) {
        auto u = out.left_vectors.col(j);
        Eigen::Index pivot = 0;
        double best = -1.0;
        for (Eigen::Index i = 0; i < u.size(); ++i) {
            if (std::abs(u(i)) > best) {
                best = std::abs(u(i));
                pivot = i;
            }
        }
        if (u(pivot) < 0.0) {
            out.left_vectors.col(j) *= -1.0;
            out.right_vectors.col(j) *= -1.0;
        }
    }
    return out;
}

Vector singular_values(const Matrix& M) {
    require_finite(M, "singular value input");
    Eigen::JacobiSVD<Matrix> solver(M);
    return solver.singularValues();
}

Matrix TruncatedSvd::reconstruct() const {
    return left * values.asDiagonal() * right.transpose();
}

TruncatedSvd truncated_svd(const Matrix& M, int r) {
    const auto max_rank = std::min(M.rows(), M.cols());
    if (r < 1 || r > max_rank) {
        throw Error(ErrorKind::Rank, "truncation rank " + std::to_string(r) + " outside [1, " +
                                         std::to_string(max_rank) + "]");
    }
    auto full = svd(M);
    return {full.left_vectors.leftCols(r), full.singular_values.head(r), full.right_vectors.leftCols(r)};
}

LqResult lq(const Matrix& M) {
    require_finite(M, "lq input");
    const Eigen::Index rows = M.rows();
    const Eigen::Index cols = M.cols();
    const Eigen::Index k = std::min(rows, cols);

    // LQ of M is the transpose of QR of M^T.
    Eigen::HouseholderQR<Matrix> qr(M.transpose());
    Matrix Q = qr.householderQ() * Matrix::Identity(cols, k);
    Matrix R = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();

    LqResult out{R.transpose(), Q.transpose()};
    for (Eigen::Index j = 0; j < k; ++j) {
        if (out.L(j, j) < 0.0) {
            out.L.col(j) *= -1.0;
            out.Qt.row(j) *= -1.0;
        }
    }
    return out;
}

double default_rank_tol(const Matrix& M) {
    return static_cast<double>(std::max(M.rows(), M.cols())) * kMachineEps;
}

Matrix pinv(const Matrix& M, std::optional<double> rank_tol) {
    if (rank_tol && *rank_tol < 0.0) {
        throw Error(ErrorKind::InvalidInput, "rank tolerance must be non-negative");
    }
    const double tol = rank_tol.value_or(default_rank_tol(M));
    if (M.size() == 0) {
        return Matrix::Zero(M.cols(), M.rows());
    }
    auto s = svd(M);
    Matrix out = Matrix::Zero(M.cols(), M.rows());
    const double smax = s.singular_values.size() > 0 ? s.singular_values(0) : 0.0;
    if (smax == 0.0) {
        return out;
    }
    for (Eigen::Index j = 0; j < s.singular_values.size(); ++j) {
        const double sj = s.singular_values(j);
        if (sj <= tol * smax) {
            break;
        }
        out.noalias() += (1.0 / sj) * s.right_vectors.col(j) * s.left_vectors.col(j).transpose();
    }
    return out;
}

int numerical_rank(const Matrix& M, std::optional<double> rank_tol) {
    const double tol = rank_tol.value_or(default_rank_tol(M));
    if (M.size() == 0) {
        return 0;
    }
    Vector s = singular_values(M);
    if (s(0) == 0.0) {
        return 0;
    }
    int r = 0;
    for (Eigen::Index j = 0; j < s.size(); ++j) {
        if (s(j) > tol * s(0)) {
            ++r;
        }
    }
    return r;
}

std::vector<Complex> spectrum(const Matrix& M) {
    if (M.rows() != M.cols()) {
        throw Error(ErrorKind::Shape, "spectrum requires a square matrix, got " + std::to_string(M.rows()) +
                                          "x" + std::to_string(M.cols()));
    }
    require_finite(M, "spectrum input");
    std::vector<Complex> out;
    if (M.rows() == 0) {
        return out;
    }
    Eigen::EigenSolver<Matrix> solver(M, false);
    const auto& ev = solver.eigenvalues();
    out.assign(ev.data(), ev.data() + ev.size());
    std::sort(out.begin(), out.end(), [](const Complex& a, const Complex& b) {
        if (a.real() != b.real()) {
            return a.real() < b.real();
        }
        return a.imag() < b.imag();
    });
    return out;
}

double spectral_norm(const Matrix& M) {
    if (M.size() == 0) {
        return 0.0;
    }
    return singular_values(M)(0);
}

double cond(const Matrix& M) {
    if (M.size() == 0) {
        return 1.0;
    }
    Vector s = singular_values(M);
    const double smin = s(s.size() - 1);
    if (smin == 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    return s(0) / smin;
}

} // namespace mimoid::matkit
