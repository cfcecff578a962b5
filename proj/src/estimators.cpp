#include "mimoid/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mimoid/error.hpp"

namespace mimoid::estimators {

std::string_view to_string(Method method) {
    return method == Method::HoKalman ? "ho-kalman" : "moesp";
}

lti::StateSpaceModel RealizationEstimate::as_model() const {
    lti::StateSpaceModel model;
    model.A = A_hat;
    model.B = B_hat;
    model.C = C_hat;
    model.process_cov = Matrix::Zero(A_hat.rows(), A_hat.rows());
    model.meas_cov = Matrix::Identity(C_hat.rows(), C_hat.rows());
    return model;
}

namespace {

constexpr double kRankThreshold = 1e-10;

// First block j whose columns [0, p(j+1)) lose rank in the regressor.
int first_deficient_block(const Matrix& regressor, int p, int blocks) {
    for (int j = 0; j < blocks; ++j) {
        Eigen::ColPivHouseholderQR<Matrix> qr(regressor.leftCols(p * (j + 1)));
        qr.setThreshold(kRankThreshold);
        if (qr.rank() < p * (j + 1)) {
            return j;
        }
    }
    return blocks - 1;
}

// Solves min ||regressor * theta - target|| and checks full column rank.
Matrix solve_ls(const Matrix& regressor, const Matrix& target, int p, int blocks) {
    Eigen::ColPivHouseholderQR<Matrix> qr(regressor);
    qr.setThreshold(kRankThreshold);
    if (qr.rank() < regressor.cols()) {
        const int j = first_deficient_block(regressor, p, blocks);
        throw Error(ErrorKind::Excitation, "inputs do not excite Markov block H_" + std::to_string(j) + " (rank " +
                                               std::to_string(qr.rank()) + " of " +
                                               std::to_string(regressor.cols()) + ")");
    }
    return qr.solve(target);
}

} // namespace

lti::MarkovSequence estimate_markov_ols(const lti::Dataset& data, int T, OlsMode mode) {
    data.validate();
    if (T < 1) {
        throw Error(ErrorKind::Length, "Markov horizon must be at least 1");
    }
    const int K = data.length();
    if (K < T) {
        throw Error(ErrorKind::Length, "trajectories of length " + std::to_string(K) + " cannot identify " +
                                           std::to_string(T) + " Markov blocks");
    }
    const int N = data.size();
    const int p = static_cast<int>(data.trajectories.front().inputs.rows());
    const int m = static_cast<int>(data.trajectories.front().outputs.rows());

    // Row r of the regressor holds (u_{k-1}, ..., u_0, 0, ...) for one (l, k).
    const int per_traj = mode == OlsMode::ToeplitzLs ? T : 1;
    Matrix phi = Matrix::Zero(static_cast<Eigen::Index>(N) * per_traj, p * T);
    Matrix target(phi.rows(), m);
    Eigen::Index row = 0;
    for (const auto& traj : data.trajectories) {
        const int k_first = mode == OlsMode::ToeplitzLs ? 1 : T;
        for (int k = k_first; k <= T; ++k, ++row) {
            for (int j = 0; j < k; ++j) {
                phi.block(row, j * p, 1, p) = traj.inputs.col(k - 1 - j).transpose();
            }
            target.row(row) = traj.outputs.col(k).transpose();
        }
    }

    const Matrix theta = solve_ls(phi, target, p, T); // (pT) x m, theta^T = [H_0 ... H_{T-1}]
    lti::MarkovSequence out;
    out.blocks.reserve(static_cast<std::size_t>(T));
    for (int j = 0; j < T; ++j) {
        out.blocks.push_back(theta.middleRows(j * p, p).transpose());
    }
    return out;
}

RealizationEstimate ho_kalman(const lti::MarkovSequence& markov, int n, int K1, int K2) {
    const int m = markov.m();
    const int p = markov.p();
    if (K2 < 2) {
        throw Error(ErrorKind::Window, "Ho-Kalman needs K2 >= 2 so that H^- and H^+ are non-empty");
    }
    if (n < 1 || n > std::min(m * K1, p * (K2 - 1))) {
        throw Error(ErrorKind::Rank, "order " + std::to_string(n) + " outside [1, min(mK1, p(K2-1))]");
    }

    // Step 1: Hankel matrices.
    auto hankel = lti::build_hankel(markov, K1, K2);

    // Step 2: rank-n truncation of H^-.
    const auto full = matkit::svd(hankel.H_minus);
    const Vector& s = full.singular_values;
    const auto L = matkit::truncated_svd(hankel.H_minus, n);

    RealizationEstimate est;
    est.method = Method::HoKalman;
    est.K1 = K1;
    est.K2 = K2;
    est.singular_values_used = s.head(std::min<Eigen::Index>(n + 1, s.size()));
    if (s(n - 1) <= matkit::default_rank_tol(hankel.H_minus) * s(0)) {
        est.warnings.push_back("sigma_n(H^-) = " + std::to_string(s(n - 1)) +
                               " is below the rank tolerance; truncation is ill-conditioned");
    }

    // Step 3: balanced factors.
    const Vector root = L.values.cwiseSqrt();
    est.O_hat = L.left * root.asDiagonal();
    est.Q_hat = root.asDiagonal() * L.right.transpose();

    // Step 4: system matrices.
    est.C_hat = est.O_hat.topRows(m);
    est.B_hat = est.Q_hat.leftCols(p);
    est.A_hat = matkit::pinv(est.O_hat) * hankel.H_plus * matkit::pinv(est.Q_hat);
    est.hankel = std::move(hankel);
    return est;
}

Matrix procrustes(const Matrix& source, const Matrix& target) {
    const auto s = matkit::svd(source.transpose() * target);
    return s.left_vectors * s.right_vectors.transpose();
}

PerturbationReport hokalman_perturbation_check(const lti::HankelSet& H_true, const Matrix& L, const Matrix& L_hat,
                                       const RealizationEstimate& estimate, const lti::StateSpaceModel& reference) {
    if (!estimate.hankel) {
        throw Error(ErrorKind::InvalidInput, "perturbation check needs a Ho-Kalman estimate carrying its Hankel set");
    }
    const int n = estimate.n();
    const Vector s = matkit::singular_values(H_true.H_minus);
    if (s.size() < n || !(s(n - 1) > 0.0)) {
        throw Error(ErrorKind::Rank, "sigma_n(H^-) must be positive");
    }

    PerturbationReport report;
    report.sigma_n = s(n - 1);
    report.perturbation = matkit::spectral_norm(L - L_hat);
    report.precondition_holds = report.perturbation <= report.sigma_n / 2.0;
    if (!report.precondition_holds) {
        return report;
    }

    const auto bars = lti::build_obsv_ctrb(reference, H_true.K1, H_true.K2 - 1);
    const Matrix U = procrustes(estimate.O_hat, bars.O);
    report.unitary = U;

    const double sigma = report.sigma_n;
    const double factor_bound = report.perturbation * std::sqrt(10.0 * n / sigma);
    auto fill = [](BoundCheck& check, double achieved, double bound) {
        check.achieved = achieved;
        check.bound = bound;
        check.satisfied = achieved <= bound * (1.0 + 1e-9) + 1e-12;
    };
    fill(report.C, (reference.C - estimate.C_hat * U).norm(), factor_bound);
    fill(report.O, (bars.O - estimate.O_hat * U).norm(), factor_bound);
    fill(report.B, (reference.B - U.transpose() * estimate.B_hat).norm(), factor_bound);
    fill(report.Q, (bars.Q - U.transpose() * estimate.Q_hat).norm(), factor_bound);

    const double hplus_err = matkit::spectral_norm(H_true.H_plus - estimate.hankel->H_plus);
    const double a_bound = 9.0 * std::sqrt(static_cast<double>(n)) / sigma *
                           (std::sqrt(report.perturbation / sigma) * matkit::spectral_norm(H_true.H_plus) + hplus_err);
    fill(report.A, (reference.A - U.transpose() * estimate.A_hat * U).norm(), a_bound);
    return report;
}

RealizationEstimate moesp(const lti::Dataset& data, int n, int K1, int K2) {
    data.validate();
    const int K = data.length();
    const int N = data.size();
    const int p = static_cast<int>(data.trajectories.front().inputs.rows());
    const int m = static_cast<int>(data.trajectories.front().outputs.rows());
    if (n < 1) {
        throw Error(ErrorKind::Rank, "order must be at least 1");
    }
    const int min_K1 = (n + m - 1) / m + 1;
    if (K1 < min_K1) {
        throw Error(ErrorKind::Window, "MOESP needs K1 >= ceil(n/m) + 1 = " + std::to_string(min_K1));
    }
    if (K2 < 1 || K1 + K2 - 1 > K) {
        throw Error(ErrorKind::Length, "MOESP window K1 + K2 - 1 = " + std::to_string(K1 + K2 - 1) +
                                           " exceeds trajectory length " + std::to_string(K));
    }
    const Eigen::Index cols = static_cast<Eigen::Index>(N) * K2;
    if (cols < (p + m) * K1) {
        throw Error(ErrorKind::Length, "MOESP needs at least (p+m)K1 = " + std::to_string((p + m) * K1) +
                                           " data columns, got " + std::to_string(cols));
    }

    // Step 1: Z_p = [U_p; Y_p], per-trajectory blocks side by side.
    Matrix Zp((p + m) * K1, cols);
    for (int l = 0; l < N; ++l) {
        const auto& traj = data.trajectories[static_cast<std::size_t>(l)];
        for (int j = 0; j < K2; ++j) {
            const Eigen::Index c = static_cast<Eigen::Index>(l) * K2 + j;
            for (int i = 0; i < K1; ++i) {
                Zp.block(i * p, c, p, 1) = traj.inputs.col(i + j);
                Zp.block(p * K1 + i * m, c, m, 1) = traj.outputs.col(i + j);
            }
        }
    }

    // Step 2: LQ; L22 is the output block orthogonal to the input rows.
    const auto lqr = matkit::lq(Zp);
    const Matrix L22 = lqr.L.block(p * K1, p * K1, m * K1, m * K1);

    // Step 3: observability estimate from the leading n directions of L22.
    const auto sv = matkit::svd(L22);
    const Vector& s = sv.singular_values;
    const double tol = matkit::default_rank_tol(L22);
    if (!(s(n - 1) > tol * s(0))) {
        throw Error(ErrorKind::OrderDeficiency, "L22 has fewer than " + std::to_string(n) +
                                                    " singular values above tolerance");
    }
    RealizationEstimate est;
    est.method = Method::Moesp;
    est.K1 = K1;
    est.K2 = K2;
    est.singular_values_used = s.head(std::min<Eigen::Index>(n + 1, s.size()));
    est.O_hat = sv.left_vectors.leftCols(n) * s.head(n).cwiseSqrt().asDiagonal();

    // Step 4: C from the top block, A from the shift structure.
    est.C_hat = est.O_hat.topRows(m);
    const Matrix upper = est.O_hat.topRows(m * (K1 - 1));
    const Matrix lower = est.O_hat.bottomRows(m * (K1 - 1));
    est.A_hat = matkit::pinv(upper) * lower;

    // B-step: y_k = C_hat * F_k * vec(B) with F_{k+1} = A_hat F_k + (u_k^T kron I_n).
    Matrix phi(static_cast<Eigen::Index>(N) * K * m, n * p);
    Vector target(phi.rows());
    Eigen::Index row = 0;
    for (const auto& traj : data.trajectories) {
        Matrix F = Matrix::Zero(n, n * p);
        for (int k = 1; k <= K; ++k) {
            F = est.A_hat * F;
            const Vector u = traj.inputs.col(k - 1);
            for (int j = 0; j < p; ++j) {
                F.middleCols(j * n, n).diagonal().array() += u(j);
            }
            phi.middleRows(row, m) = est.C_hat * F;
            target.segment(row, m) = traj.outputs.col(k);
            row += m;
        }
    }
    Eigen::ColPivHouseholderQR<Matrix> qr(phi);
    const Vector vecB = qr.solve(target);
    est.B_hat = Eigen::Map<const Matrix>(vecB.data(), n, p);
    return est;
}

AlignmentReport align_realization(const RealizationEstimate& estimate, const lti::StateSpaceModel& reference) {
    const int n = estimate.n();
    if (reference.n() != n || reference.p() != estimate.B_hat.cols() || reference.m() != estimate.C_hat.rows()) {
        throw Error(ErrorKind::Shape, "estimate and reference differ in (n, p, m)");
    }
    const int m = reference.m();
    Matrix O_hat = estimate.O_hat;
    int K1 = estimate.K1;
    if (O_hat.size() == 0) {
        K1 = std::max(K1, (n + m - 1) / m + 1);
        O_hat = lti::build_obsv_ctrb(estimate.as_model(), K1, 1).O;
    }
    const Matrix O_ref = lti::build_obsv_ctrb(reference, K1, 1).O;

    AlignmentReport report;
    report.unitary = procrustes(O_hat, O_ref);
    const Matrix& U = report.unitary;
    report.err_A = (reference.A - U.transpose() * estimate.A_hat * U).norm();
    report.err_B = (reference.B - U.transpose() * estimate.B_hat).norm();
    report.err_C = (reference.C - estimate.C_hat * U).norm();
    report.spectrum_distance = lti::hausdorff(matkit::spectrum(estimate.A_hat), matkit::spectrum(reference.A));
    return report;
}

} // namespace mimoid::estimators
