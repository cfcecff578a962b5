#pragma once

#include <cstdint>

#include "mimoid/lti.hpp"
#include "mimoid/rng.hpp"

namespace test {

using mimoid::Matrix;
using mimoid::Vector;

inline Matrix random_matrix(int rows, int cols, std::uint64_t seed, double lo = -1.0, double hi = 1.0) {
    mimoid::CounterRng rng(seed, 0, mimoid::streams::kSystem);
    Matrix M(rows, cols);
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) {
            M(i, j) = rng.uniform(lo, hi);
        }
    }
    return M;
}

inline Matrix random_orthogonal(int n, std::uint64_t seed) {
    Eigen::HouseholderQR<Matrix> qr(random_matrix(n, n, seed));
    return qr.householderQ();
}

inline double relative_error(const Matrix& a, const Matrix& b) {
    const double scale = std::max(b.norm(), 1e-300);
    return (a - b).norm() / scale;
}

// Diagonal model whose poles are spread over [-radius, radius] with a
// minimum gap, and B, C entries bounded away from zero so the model is
// minimal and reasonably conditioned.
inline mimoid::lti::StateSpaceModel well_conditioned_diag_model(int n, int p, int m, std::uint64_t seed,
                                                               double radius = 0.9) {
    mimoid::CounterRng rng(seed, 0, mimoid::streams::kSystem);
    Vector poles(n);
    for (int i = 0; i < n; ++i) {
        const double slot = n == 1 ? 0.0 : -radius + 2.0 * radius * i / (n - 1);
        poles(i) = slot + rng.uniform(-0.05, 0.05) * radius;
    }
    auto entry = [&] {
        const double mag = rng.uniform(0.5, 1.0);
        return rng.uniform() < 0.5 ? -mag : mag;
    };
    Matrix B(n, p);
    Matrix C(m, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < p; ++j) {
            B(i, j) = entry();
        }
    }
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < n; ++j) {
            C(i, j) = entry();
        }
    }
    return mimoid::lti::make_diagonal_model(poles, B, C);
}

// Similarity transform (T A T^-1, T B, C T^-1).
inline mimoid::lti::StateSpaceModel transformed(const mimoid::lti::StateSpaceModel& model, const Matrix& T) {
    const Matrix Ti = T.inverse();
    auto out = model;
    out.A = T * model.A * Ti;
    out.B = T * model.B;
    out.C = model.C * Ti;
    out.process_cov = T * model.process_cov * T.transpose();
    out.diagonal = false;
    return out;
}

} // namespace test

#include "mimoid/estimators.hpp"

namespace test {

// Exact Markov parameters plus a random perturbation whose induced
// ||L - L_hat|| stays below sigma_n(H^-)/2. Returns the perturbation report.
struct PerturbationInstance {
    mimoid::estimators::PerturbationReport report;
    int n = 0;
};

inline PerturbationInstance perturbation_instance(std::uint64_t seed) {
    using namespace mimoid;
    CounterRng rng(seed, 0, streams::kSystem);
    const int n = 1 + static_cast<int>(rng.uniform() * 3);
    const int p = 1 + static_cast<int>(rng.uniform() * 2);
    const int m = 1 + static_cast<int>(rng.uniform() * 2);
    const int K1 = n + 1;
    const int K2 = n + 2;
    const auto model = well_conditioned_diag_model(n, p, m, derive_seed(seed, 1), 0.8);
    const auto exact = lti::markov_sequence(model, K1 + K2 - 1);
    const auto reference = estimators::ho_kalman(exact, n, K1, K2).as_model();
    const auto H = lti::build_hankel(exact, K1, K2);
    const Matrix L = matkit::truncated_svd(H.H_minus, n).reconstruct();
    const double sigma_n = matkit::singular_values(H.H_minus)(n - 1);

    double scale = rng.uniform(0.01, 0.4) * sigma_n;
    for (int attempt = 0;; ++attempt) {
        lti::MarkovSequence noisy = exact;
        for (auto& block : noisy.blocks) {
            block += scale * random_matrix(m, p, derive_seed(seed, 2, attempt * 1000 + (&block - noisy.blocks.data())));
        }
        const auto est = estimators::ho_kalman(noisy, n, K1, K2);
        const Matrix L_hat = matkit::truncated_svd(est.hankel->H_minus, n).reconstruct();
        auto report = estimators::hokalman_perturbation_check(H, L, L_hat, est, reference);
        if (report.precondition_holds) {
            return {report, n};
        }
        scale *= 0.5;
    }
}

} // namespace test
