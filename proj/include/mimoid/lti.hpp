#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "mimoid/matkit.hpp"

namespace mimoid::lti {

// x_{k+1} = A x_k + B u_k + w_k,  y_k = C x_k + v_k,
// w_k ~ N(0, process_cov), v_k ~ N(0, meas_cov).
struct StateSpaceModel {
    Matrix A;
    Matrix B;
    Matrix C;
    Matrix process_cov;
    Matrix meas_cov;
    bool diagonal = false;

    [[nodiscard]] int n() const { return static_cast<int>(A.rows()); }
    [[nodiscard]] int p() const { return static_cast<int>(B.cols()); }
    [[nodiscard]] int m() const { return static_cast<int>(C.rows()); }

    // Checks dimensions, covariance symmetry/definiteness and, when the
    // diagonal flag is set, that A is diagonal with pairwise distinct poles.
    // Throws Error(Shape | InvalidInput | AssumptionViolation).
    void validate() const;

    // Largest absolute entry of B times largest absolute entry of C.
    [[nodiscard]] double delta_bar() const;
};

// Deterministic model with zero process noise and identity measurement noise.
StateSpaceModel make_model(Matrix A, Matrix B, Matrix C);

// Diagonal-pole model A = diag(poles); covariances default to 0 and I_m.
StateSpaceModel make_diagonal_model(const Vector& poles, Matrix B, Matrix C);

// Copy of `model` with both noise covariances zeroed.
StateSpaceModel noiseless(StateSpaceModel model);

struct Trajectory {
    Matrix inputs;  // p x K   (u_0 .. u_{K-1})
    Matrix outputs; // m x K+1 (y_0 .. y_K)
    std::uint64_t seed = 0;
    double energy = 0.0;
    bool energy_constrained = false;

    [[nodiscard]] int length() const { return static_cast<int>(inputs.cols()); }
    void validate() const;
};

struct Dataset {
    std::vector<Trajectory> trajectories;
    std::uint64_t master_seed = 0;

    [[nodiscard]] int size() const { return static_cast<int>(trajectories.size()); }
    [[nodiscard]] int length() const;
    void validate() const;
};

struct MarkovSequence {
    std::vector<Matrix> blocks; // H_0 .. H_{T-1}, each m x p

    [[nodiscard]] int size() const { return static_cast<int>(blocks.size()); }
    [[nodiscard]] int m() const { return blocks.empty() ? 0 : static_cast<int>(blocks.front().rows()); }
    [[nodiscard]] int p() const { return blocks.empty() ? 0 : static_cast<int>(blocks.front().cols()); }
};

struct HankelSet {
    Matrix H;       // mK1 x pK2
    Matrix H_plus;  // H without its left-most block column
    Matrix H_minus; // H without its right-most block column
    int K1 = 0;
    int K2 = 0;
};

struct ObsvCtrb {
    Matrix O; // mK1 x n
    Matrix Q; // n x pK2
    double cond_O = 0.0;
    double cond_Q = 0.0;
    bool O_full_rank = false;
    bool Q_full_rank = false;
};

enum class InputKind { GaussianUnit, GaussianEnergyNormalized, Impulse };

// H_k = C A^k B for k < T, accumulating A^k B by repeated multiplication.
MarkovSequence markov_sequence(const StateSpaceModel& model, int T);

// Runs the recursion for K = inputs.cols() steps and records y_0..y_K.
// Noise for step k is drawn from CounterRng(noise_seed, k, stream).
Trajectory simulate(const StateSpaceModel& model, const Matrix& inputs, std::uint64_t noise_seed,
                    const std::optional<Vector>& x0 = std::nullopt);

Matrix gen_inputs(InputKind kind, int p, int K, std::uint64_t seed);

// N trajectories with per-trajectory seeds derived from master_seed.
Dataset make_dataset(const StateSpaceModel& model, int N, int K, InputKind kind, std::uint64_t master_seed,
                     unsigned workers = 1);

HankelSet build_hankel(const MarkovSequence& markov, int K1, int K2);

ObsvCtrb build_obsv_ctrb(const StateSpaceModel& model, int K1, int K2);

// Restriction to the controllable and observable subspace via two SVD
// projections (reachable column space first, then observable row space).
StateSpaceModel minimal_realization(const StateSpaceModel& model, double tol = 1e-9);

double hausdorff(const std::vector<Complex>& a, const std::vector<Complex>& b);

// Spectral radius of a square matrix.
double spectral_radius(const Matrix& A);

} // namespace mimoid::lti
