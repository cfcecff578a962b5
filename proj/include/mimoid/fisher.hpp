#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "mimoid/lti.hpp"

// Fisher information of the poles of a diagonal-A model with known B, C,
// x0 = 0 and standard Gaussian measurement noise, plus the Cramer-Rao floor
// and sample-complexity calculators built on its eigenvalue bound.
namespace mimoid::fisher {

struct FisherReport {
    std::vector<Matrix> S_list; // one mK x pmK matrix per trajectory
    Matrix V;                   // pmK x n
    Matrix I;                   // n x n
    double lambda_min = 0.0;
    double sigma_min_V = 0.0;
    // Present only when K >= ceil(n/(pm)) + 1.
    std::optional<double> lambda_min_bound;
    std::optional<double> sigma_min_V_bound;
};

// Block lower-triangular Toeplitz matrix with block (r, t) = I_m kron u_{r-t}^T.
// Columns inside a time block follow the Markov-entry order
// [H]_11, [H]_12, ..., [H]_1p, [H]_21, ... (output-major, input-minor).
Matrix build_S(const Matrix& inputs, int m);

// Row block k holds d[H_k]_ij / d lambda_q = k c_iq b_qj lambda_q^{k-1};
// the k = 0 block is zero. Row order matches build_S's column order.
Matrix build_V(const Vector& lambda, const Matrix& B, const Matrix& C, int K);

// I = sum_l V^T S_l^T S_l V. Requires the diagonal flag and R = I_m
// (Error(AssumptionViolation) otherwise) and equal K across input sets.
FisherReport fim(const lti::StateSpaceModel& model, const std::vector<Matrix>& input_sets, unsigned workers = 1);

// Finite-difference reference: central differences of the noiseless mean
// output (y_1..y_K) with respect to each pole, J^T J summed over
// trajectories. Shares no code with build_S/build_V.
Matrix fim_oracle(const lti::StateSpaceModel& model, const std::vector<Matrix>& input_sets, double step = 1e-6);

// sigma_n of the stacked [S_1 V; ...; S_N V], squared. Equals lambda_min(I)
// in exact arithmetic but keeps the precision of the singular value.
double min_eig_via_sv(const lti::StateSpaceModel& model, const std::vector<Matrix>& input_sets);

// Upper bound on sigma_min(V): square root of
// 16 n^2 pm delta_bar^2 K^3 rho^{-(floor(kappa)-3)/log(2K)}, kappa = n/(pm).
double sigma_min_V_bound(int n, int p, int m, int K, double delta_bar);

// lambda_min(I) <= 16 N n^2 (pm)^2 delta_bar^2 K^5 rho^{-(floor(kappa)-3)/log(2K)}.
double fim_min_eig_bound(int n, int p, int m, int N, int K, double delta_bar);

// Floor on lambda_max(Cov) of any unbiased pole estimator: 1 / fim_min_eig_bound.
double crb_floor(int n, int p, int m, int N, int K, double delta_bar);

enum class Regime { ManyShort, OneLong };

struct SampleComplexity {
    Regime regime = Regime::ManyShort;
    std::uint64_t count = 0; // N for ManyShort, K for OneLong
    int K = 0;               // trajectory length used
    std::uint64_t N = 0;     // number of trajectories used
    double asymptotic = 0.0; // closed-form growth expression, informational (NaN when undefined)
};

// Smallest N (ManyShort, K = ceil(n/m) + 1) or K (OneLong, N = 1) with
// crb_floor <= epsilon. The OneLong search stops at `cap` and throws
// Error(CapExceeded) beyond it.
SampleComplexity sample_complexity(int n, int p, int m, double delta_bar, double epsilon, Regime regime,
                                   std::uint64_t cap = 1'000'000);

} // namespace mimoid::fisher
