#include "mimoid/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "mimoid/error.hpp"

namespace mimoid::bounds {

namespace {

// floor(a / b) for non-negative a and positive b.
int floor_div(int a, int b) {
    return a / b;
}

double decay_exponent(int n, int dim, int window) {
    return static_cast<double>(floor_div(n - 1, 2 * dim)) / std::log(2.0 * dim * window);
}

} // namespace

double rho() {
    return std::exp(std::numbers::pi * std::numbers::pi / 4.0);
}

BoundReport make_report(std::string name, double measured, double bound, Direction direction,
                        std::vector<std::pair<std::string, double>> parameters) {
    BoundReport r;
    r.name = std::move(name);
    r.measured = measured;
    r.bound = bound;
    r.direction = direction;
    r.satisfied = direction == Direction::Upper ? measured <= bound * (1.0 + kRelativeSlack)
                                                : measured >= bound * (1.0 - kRelativeSlack);
    r.bound_below_machine_eps = bound < kMachineEps;
    r.parameters = std::move(parameters);
    return r;
}

CondLowerBounds cond_lower_bounds(int n, int m, int p, int K1, int K2) {
    if (n < 1 || m < 1 || p < 1 || K1 < 1 || K2 < 1) {
        throw Error(ErrorKind::Window, "dimensions and windows must be positive");
    }
    if (n > m * K1 || n > p * K2) {
        throw Error(ErrorKind::Window, "full rank O and Q need n <= mK1 and n <= pK2");
    }
    return {0.25 * std::pow(rho(), decay_exponent(n, m, K1)), 0.25 * std::pow(rho(), decay_exponent(n, p, K2))};
}

double hankel_sigma_n_bound(int n, int m, int p, int K1, int K2, double delta_bar, HankelVariant variant) {
    if (n < 1 || m < 1 || p < 1 || K1 < 1 || K2 < 1) {
        throw Error(ErrorKind::Window, "dimensions and windows must be positive");
    }
    double first = 0.0;
    int K = 0;
    if (variant == HankelVariant::Full) {
        first = decay_exponent(n, m, K1);
        K = K1 + K2;
    } else {
        if (K1 == 1) {
            throw Error(ErrorKind::UndefinedLog, "H^- bound needs K1 >= 2 (log(2m(K1-1)) is undefined)");
        }
        first = decay_exponent(n, m, K1 - 1);
        K = K1 + K2 - 1;
    }
    const double second = decay_exponent(n, p, K2);
    return 2.0 * delta_bar * n * K * std::sqrt(static_cast<double>(p * m)) * std::pow(rho(), -std::max(first, second));
}

double krylov_sv_bound(int n, int m_blocks, int p, double X_norm) {
    if (n < 1 || m_blocks < 1 || p < 1 || p > n) {
        throw Error(ErrorKind::Window, "Krylov bound needs 1 <= p <= n and m >= 1");
    }
    const int odd_correction = (p % 2 == 0 || p == 1) ? 0 : 1;
    const int effective = std::min(n, m_blocks * (p - odd_correction));
    const double exponent =
        static_cast<double>(floor_div(effective - 1, 2 * p)) / std::log(2.0 * m_blocks * p);
    return 4.0 * std::pow(rho(), -exponent) * X_norm;
}

std::vector<BoundReport> hankel_decay_check(const Matrix& H) {
    if (H.rows() != H.cols() || H.rows() == 0) {
        throw Error(ErrorKind::Structure, "Hankel decay check needs a non-empty square matrix");
    }
    matkit::require_finite(H, "Hankel matrix");
    const auto n = static_cast<int>(H.rows());
    const double scale = std::max(H.cwiseAbs().maxCoeff(), 1e-300);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i + 1 < n && j > 0 && std::abs(H(i, j) - H(i + 1, j - 1)) > 1e-10 * scale) {
                throw Error(ErrorKind::Structure, "matrix is not Hankel");
            }
            if (std::abs(H(i, j) - H(j, i)) > 1e-10 * scale) {
                throw Error(ErrorKind::Structure, "matrix is not symmetric");
            }
        }
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(H, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-10 * scale * n) {
        throw Error(ErrorKind::Structure, "Hankel matrix is not positive semi-definite");
    }

    const Vector s = matkit::singular_values(H);
    std::vector<BoundReport> out;
    for (int k = 1; 1 + 2 * k <= n; ++k) {
        const double factor = 16.0 * std::pow(rho(), -(2.0 * k - 2.0) / std::log(2.0 * n));
        for (int j = 1; j + 2 * k <= n; ++j) {
            out.push_back(make_report("hankel-decay", s(j + 2 * k - 1), factor * s(j - 1), Direction::Upper,
                                      {{"n", n}, {"j", j}, {"k", k}}));
        }
    }
    return out;
}

double obsv_frobenius_sq_bound(double c_max, int m, int n, int K1) {
    return c_max * c_max * m * n * K1;
}

double ctrb_frobenius_sq_bound(double b_max, int p, int n, int K2) {
    return b_max * b_max * p * n * K2;
}

} // namespace mimoid::bounds
