#include "mimoid/lti.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mimoid/error.hpp"
#include "mimoid/parallel.hpp"
#include "mimoid/rng.hpp"

namespace mimoid::lti {

namespace {

std::string dims(const Matrix& M) {
    return std::to_string(M.rows()) + "x" + std::to_string(M.cols());
}

void require_shape(const Matrix& M, Eigen::Index rows, Eigen::Index cols, const char* name) {
    if (M.rows() != rows || M.cols() != cols) {
        throw Error(ErrorKind::Shape, std::string(name) + " is " + dims(M) + ", expected " + std::to_string(rows) +
                                          "x" + std::to_string(cols));
    }
}

void require_symmetric_psd(const Matrix& M, const char* name) {
    const double scale = std::max(1.0, M.cwiseAbs().maxCoeff());
    if ((M - M.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
        throw Error(ErrorKind::InvalidInput, std::string(name) + " is not symmetric");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(M, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-12) {
        throw Error(ErrorKind::InvalidInput, std::string(name) + " is not positive semi-definite");
    }
}

// Symmetric square root factor F with F F^T = cov (negative round-off clipped).
Matrix noise_factor(const Matrix& cov) {
    if (cov.size() == 0 || cov.isZero(0.0)) {
        return Matrix::Zero(cov.rows(), cov.cols());
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(cov);
    Vector root = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return es.eigenvectors() * root.asDiagonal() * es.eigenvectors().transpose();
}

Vector draw_standard_normal(std::uint64_t seed, std::uint64_t k, std::uint64_t stream, Eigen::Index dim) {
    CounterRng rng(seed, k, stream);
    Vector z(dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
        z(i) = rng.normal();
    }
    return z;
}

} // namespace

void StateSpaceModel::validate() const {
    const auto nn = A.rows();
    require_shape(A, nn, nn, "A");
    require_shape(B, nn, B.cols(), "B");
    require_shape(C, C.rows(), nn, "C");
    require_shape(process_cov, nn, nn, "process covariance");
    require_shape(meas_cov, C.rows(), C.rows(), "measurement covariance");
    for (const auto* M : {&A, &B, &C, &process_cov, &meas_cov}) {
        matkit::require_finite(*M, "model matrix");
    }
    require_symmetric_psd(process_cov, "process covariance");
    require_symmetric_psd(meas_cov, "measurement covariance");

    if (diagonal) {
        for (Eigen::Index i = 0; i < nn; ++i) {
            for (Eigen::Index j = 0; j < nn; ++j) {
                if (i != j && A(i, j) != 0.0) {
                    throw Error(ErrorKind::AssumptionViolation, "diagonal model has off-diagonal entries in A");
                }
            }
        }
        for (Eigen::Index i = 0; i < nn; ++i) {
            for (Eigen::Index j = i + 1; j < nn; ++j) {
                if (std::abs(A(i, i) - A(j, j)) <= 1e-12) {
                    throw Error(ErrorKind::AssumptionViolation,
                                "diagonal model poles " + std::to_string(i) + " and " + std::to_string(j) +
                                    " are not distinct");
                }
            }
        }
    }
}

double StateSpaceModel::delta_bar() const {
    const double b = B.size() ? B.cwiseAbs().maxCoeff() : 0.0;
    const double c = C.size() ? C.cwiseAbs().maxCoeff() : 0.0;
    return b * c;
}

StateSpaceModel make_model(Matrix A, Matrix B, Matrix C) {
    const auto nn = A.rows();
    const auto mm = C.rows();
    StateSpaceModel model{std::move(A), std::move(B), std::move(C), Matrix::Zero(nn, nn),
                          Matrix::Identity(mm, mm), false};
    model.validate();
    return model;
}

StateSpaceModel make_diagonal_model(const Vector& poles, Matrix B, Matrix C) {
    auto model = make_model(poles.asDiagonal(), std::move(B), std::move(C));
    model.diagonal = true;
    model.validate();
    return model;
}

StateSpaceModel noiseless(StateSpaceModel model) {
    model.process_cov.setZero();
    model.meas_cov.setZero();
    return model;
}

void Trajectory::validate() const {
    if (outputs.cols() != inputs.cols() + 1) {
        throw Error(ErrorKind::Shape, "trajectory with " + std::to_string(inputs.cols()) + " inputs has " +
                                          std::to_string(outputs.cols()) + " outputs, expected K+1");
    }
    if (!std::isfinite(energy)) {
        throw Error(ErrorKind::InvalidInput, "trajectory input energy is not finite");
    }
    if (energy_constrained && energy > 1.0 + 1e-12) {
        throw Error(ErrorKind::AssumptionViolation, "input energy " + std::to_string(energy) + " exceeds 1");
    }
}

int Dataset::length() const {
    return trajectories.empty() ? 0 : trajectories.front().length();
}

void Dataset::validate() const {
    if (trajectories.empty()) {
        throw Error(ErrorKind::InvalidInput, "dataset holds no trajectories");
    }
    const auto& first = trajectories.front();
    for (const auto& t : trajectories) {
        t.validate();
        if (t.length() != first.length() || t.inputs.rows() != first.inputs.rows() ||
            t.outputs.rows() != first.outputs.rows()) {
            throw Error(ErrorKind::Shape, "dataset trajectories differ in length or dimension");
        }
    }
}

MarkovSequence markov_sequence(const StateSpaceModel& model, int T) {
    if (T < 1) {
        throw Error(ErrorKind::Length, "Markov sequence length must be at least 1");
    }
    MarkovSequence out;
    out.blocks.reserve(static_cast<std::size_t>(T));
    Matrix AkB = model.B;
    for (int k = 0; k < T; ++k) {
        out.blocks.push_back(model.C * AkB);
        AkB = model.A * AkB;
    }
    return out;
}

Trajectory simulate(const StateSpaceModel& model, const Matrix& inputs, std::uint64_t noise_seed,
                    const std::optional<Vector>& x0) {
    const int n = model.n();
    const int m = model.m();
    if (inputs.rows() != model.p()) {
        throw Error(ErrorKind::Shape, "inputs have " + std::to_string(inputs.rows()) + " rows, model has p = " +
                                          std::to_string(model.p()));
    }
    if (x0 && x0->size() != n) {
        throw Error(ErrorKind::Shape, "initial state has wrong dimension");
    }
    const int K = static_cast<int>(inputs.cols());
    const Matrix Fw = noise_factor(model.process_cov);
    const Matrix Fv = noise_factor(model.meas_cov);
    const bool process_noise = !Fw.isZero(0.0);
    const bool meas_noise = !Fv.isZero(0.0);

    Trajectory traj;
    traj.inputs = inputs;
    traj.outputs.resize(m, K + 1);
    traj.seed = noise_seed;
    traj.energy = inputs.squaredNorm();

    Vector x = x0.value_or(Vector::Zero(n));
    for (int k = 0; k <= K; ++k) {
        Vector y = model.C * x;
        if (meas_noise) {
            y += Fv * draw_standard_normal(noise_seed, static_cast<std::uint64_t>(k), streams::kMeasurementNoise, m);
        }
        traj.outputs.col(k) = y;
        if (k == K) {
            break;
        }
        Vector next = model.A * x + model.B * inputs.col(k);
        if (process_noise) {
            next += Fw * draw_standard_normal(noise_seed, static_cast<std::uint64_t>(k), streams::kProcessNoise, n);
        }
        x = std::move(next);
    }
    return traj;
}

Matrix gen_inputs(InputKind kind, int p, int K, std::uint64_t seed) {
    if (K < 1 || p < 1) {
        throw Error(ErrorKind::Length, "input sequence needs p >= 1 and K >= 1");
    }
    Matrix U = Matrix::Zero(p, K);
    if (kind == InputKind::Impulse) {
        U(0, 0) = 1.0;
        return U;
    }
    for (int k = 0; k < K; ++k) {
        CounterRng rng(seed, static_cast<std::uint64_t>(k), streams::kInputs);
        for (int i = 0; i < p; ++i) {
            U(i, k) = rng.normal();
        }
    }
    if (kind == InputKind::GaussianEnergyNormalized) {
        U /= std::sqrt(U.squaredNorm());
    }
    return U;
}

Dataset make_dataset(const StateSpaceModel& model, int N, int K, InputKind kind, std::uint64_t master_seed,
                     unsigned workers) {
    if (N < 1) {
        throw Error(ErrorKind::InvalidInput, "dataset needs at least one trajectory");
    }
    Dataset data;
    data.master_seed = master_seed;
    data.trajectories.resize(static_cast<std::size_t>(N));
    parallel_for(static_cast<std::size_t>(N), workers, [&](std::size_t l) {
        const auto seed = derive_seed(master_seed, l);
        auto traj = simulate(model, gen_inputs(kind, model.p(), K, seed), seed);
        traj.energy_constrained = kind == InputKind::GaussianEnergyNormalized;
        data.trajectories[l] = std::move(traj);
    });
    return data;
}

HankelSet build_hankel(const MarkovSequence& markov, int K1, int K2) {
    if (K1 < 1 || K2 < 1) {
        throw Error(ErrorKind::Window, "Hankel window sizes must be at least 1");
    }
    if (markov.size() < K1 + K2 - 1) {
        throw Error(ErrorKind::Length, "Hankel window " + std::to_string(K1) + "x" + std::to_string(K2) + " needs " +
                                           std::to_string(K1 + K2 - 1) + " Markov blocks, got " +
                                           std::to_string(markov.size()));
    }
    const int m = markov.m();
    const int p = markov.p();
    HankelSet out;
    out.K1 = K1;
    out.K2 = K2;
    out.H.resize(m * K1, p * K2);
    for (int i = 0; i < K1; ++i) {
        for (int j = 0; j < K2; ++j) {
            out.H.block(i * m, j * p, m, p) = markov.blocks[static_cast<std::size_t>(i + j)];
        }
    }
    out.H_plus = out.H.rightCols(p * (K2 - 1));
    out.H_minus = out.H.leftCols(p * (K2 - 1));
    return out;
}

ObsvCtrb build_obsv_ctrb(const StateSpaceModel& model, int K1, int K2) {
    if (K1 < 1 || K2 < 1) {
        throw Error(ErrorKind::Window, "observability/controllability windows must be at least 1");
    }
    const int n = model.n();
    const int m = model.m();
    const int p = model.p();
    ObsvCtrb out;
    out.O.resize(m * K1, n);
    out.Q.resize(n, p * K2);
    Matrix CAk = model.C;
    for (int k = 0; k < K1; ++k) {
        out.O.middleRows(k * m, m) = CAk;
        CAk = CAk * model.A;
    }
    Matrix AkB = model.B;
    for (int k = 0; k < K2; ++k) {
        out.Q.middleCols(k * p, p) = AkB;
        AkB = model.A * AkB;
    }
    out.cond_O = matkit::cond(out.O);
    out.cond_Q = matkit::cond(out.Q);
    out.O_full_rank = matkit::numerical_rank(out.O) == n;
    out.Q_full_rank = matkit::numerical_rank(out.Q) == n;
    return out;
}

namespace {

// Number of singular values above tol * sigma_max.
int rank_above(const Vector& s, double tol) {
    if (s.size() == 0 || s(0) == 0.0) {
        return 0;
    }
    int r = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i) {
        r += s(i) > tol * s(0) ? 1 : 0;
    }
    return r;
}

} // namespace

StateSpaceModel minimal_realization(const StateSpaceModel& model, double tol) {
    if (tol < 0.0) {
        throw Error(ErrorKind::InvalidInput, "minimal realization tolerance must be non-negative");
    }
    const int n = model.n();

    // Reachable subspace: column space of [B, AB, ..., A^{n-1}B]. It is
    // A-invariant, so T^T A T is the exact restriction.
    const auto ctrb = build_obsv_ctrb(model, 1, n).Q;
    const auto sc = matkit::svd(ctrb);
    const int rc = rank_above(sc.singular_values, tol);
    const Matrix Tc = sc.left_vectors.leftCols(rc);
    const Matrix A1 = Tc.transpose() * model.A * Tc;
    const Matrix B1 = Tc.transpose() * model.B;
    const Matrix C1 = model.C * Tc;

    // Observable part: the unobservable kernel is A1-invariant, so projecting
    // onto its orthogonal complement (the observability row space) gives the
    // quotient dynamics that drive the output.
    StateSpaceModel reduced{A1, B1, C1, Matrix::Zero(rc, rc), model.meas_cov, false};
    const auto obsv = build_obsv_ctrb(reduced, std::max(rc, 1), 1).O;
    const auto so = matkit::svd(obsv);
    const int ro = rc == 0 ? 0 : rank_above(so.singular_values, tol);
    const Matrix To = so.right_vectors.leftCols(ro);

    StateSpaceModel out;
    out.A = To.transpose() * A1 * To;
    out.B = To.transpose() * B1;
    out.C = C1 * To;
    const Matrix Tfull = Tc * To;
    out.process_cov = Tfull.transpose() * model.process_cov * Tfull;
    out.process_cov = 0.5 * (out.process_cov + out.process_cov.transpose()).eval();
    out.meas_cov = model.meas_cov;
    out.diagonal = false;
    return out;
}

double hausdorff(const std::vector<Complex>& a, const std::vector<Complex>& b) {
    if (a.empty() || b.empty()) {
        throw Error(ErrorKind::InvalidInput, "Hausdorff distance needs two non-empty spectra");
    }
    auto directed = [](const std::vector<Complex>& from, const std::vector<Complex>& to) {
        double worst = 0.0;
        for (const auto& x : from) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& y : to) {
                best = std::min(best, std::abs(x - y));
            }
            worst = std::max(worst, best);
        }
        return worst;
    };
    return std::max(directed(a, b), directed(b, a));
}

double spectral_radius(const Matrix& A) {
    double r = 0.0;
    for (const auto& z : matkit::spectrum(A)) {
        r = std::max(r, std::abs(z));
    }
    return r;
}

} // namespace mimoid::lti
