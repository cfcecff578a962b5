#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mimoid/lti.hpp"

namespace mimoid::estimators {

enum class Method { HoKalman, Moesp };
enum class OlsMode { ToeplitzLs, LastStepLs };

std::string_view to_string(Method method);

struct RealizationEstimate {
    Matrix A_hat;
    Matrix B_hat;
    Matrix C_hat;
    Method method = Method::HoKalman;
    Vector singular_values_used; // Ho-Kalman: sigma_1..sigma_{n+1} of H^-; MOESP: of L22
    int K1 = 0;
    int K2 = 0;

    Matrix O_hat; // estimated extended observability matrix, mK1 x n
    Matrix Q_hat; // Ho-Kalman only: n x p(K2-1)
    std::optional<lti::HankelSet> hankel; // Ho-Kalman only: the estimated Hankel set
    std::vector<std::string> warnings;

    [[nodiscard]] int n() const { return static_cast<int>(A_hat.rows()); }
    [[nodiscard]] bool ill_conditioned() const { return !warnings.empty(); }
    [[nodiscard]] lti::StateSpaceModel as_model() const;
};

struct AlignmentReport {
    Matrix unitary;
    double err_A = 0.0;
    double err_B = 0.0;
    double err_C = 0.0;
    double spectrum_distance = 0.0;
};

// Least-squares Markov parameter estimate from x0 = 0 trajectories.
//
// ToeplitzLs regresses every y_k (1 <= k <= T) of every trajectory on the
// reversed, zero-padded input window (u_{k-1}, ..., u_0), which enforces the
// block-Toeplitz structure of the input-output map. LastStepLs uses only y_T
// of each trajectory. Throws Error(Excitation) naming the first
// unidentifiable block when the regressor is rank deficient.
lti::MarkovSequence estimate_markov_ols(const lti::Dataset& data, int T, OlsMode mode = OlsMode::ToeplitzLs);

// Ho-Kalman realization of order n from Hankel windows K1 x K2. Needs at
// least K1 + K2 - 1 Markov blocks. A numerically rank deficient H^- produces
// a warning on the estimate, not an error.
RealizationEstimate ho_kalman(const lti::MarkovSequence& markov, int n, int K1, int K2);

struct BoundCheck {
    double achieved = 0.0;
    double bound = 0.0;
    bool satisfied = false;
};

struct PerturbationReport {
    bool precondition_holds = false;
    double sigma_n = 0.0;      // sigma_n(H^-)
    double perturbation = 0.0; // ||L - L_hat||
    Matrix unitary;
    BoundCheck C; // ||C_bar - C_hat U||_F
    BoundCheck O; // ||O_bar - O_hat U||_F
    BoundCheck B; // ||B_bar - U^T B_hat||_F
    BoundCheck Q; // ||Q_bar - U^T Q_hat||_F
    BoundCheck A; // ||A_bar - U^T A_hat U||_F

    [[nodiscard]] bool all_satisfied() const {
        return C.satisfied && O.satisfied && B.satisfied && Q.satisfied && A.satisfied;
    }
};

// Evaluates the Oymak-Ozay perturbation bounds for a Ho-Kalman estimate.
// `reference` is the realization Ho-Kalman returns on the exact Markov
// parameters (its observability matrix over K1 rows and controllability
// matrix over K2 - 1 columns equal the balanced factors of L). L and L_hat are
// the rank-n truncations of the true and estimated H^-; `estimate` must carry
// its Hankel set. When the precondition fails the report says so and the
// bound fields stay unevaluated.
PerturbationReport hokalman_perturbation_check(const lti::HankelSet& H_true, const Matrix& L, const Matrix& L_hat,
                                       const RealizationEstimate& estimate, const lti::StateSpaceModel& reference);

// MOESP with past input/output Hankel matrices of K1 block rows and K2
// columns per trajectory; trajectories are concatenated column-wise. B is
// estimated by least squares with A, C fixed and x0 = 0.
RealizationEstimate moesp(const lti::Dataset& data, int n, int K1, int K2);

// Orthogonal Procrustes alignment of the estimate's observability matrix onto
// the reference's, followed by Frobenius errors of the aligned (A, B, C).
AlignmentReport align_realization(const RealizationEstimate& estimate, const lti::StateSpaceModel& reference);

// U minimizing ||target - source U||_F over orthogonal U.
Matrix procrustes(const Matrix& source, const Matrix& target);

} // namespace mimoid::estimators
