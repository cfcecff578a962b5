#pragma once

#include <string>
#include <vector>

#include "mimoid/matkit.hpp"

// Closed-form ill-conditioning bounds for Hankel, observability,
// controllability and Krylov matrices. All logarithms are natural; floor
// terms are evaluated in integer arithmetic.
namespace mimoid::bounds {

enum class Direction { Upper, Lower };

struct BoundReport {
    std::string name;
    double measured = 0.0;
    double bound = 0.0;
    Direction direction = Direction::Upper;
    bool satisfied = false;
    bool bound_below_machine_eps = false;
    std::vector<std::pair<std::string, double>> parameters;
};

// Relative slack applied to every bound comparison.
inline constexpr double kRelativeSlack = 1e-9;

BoundReport make_report(std::string name, double measured, double bound, Direction direction,
                        std::vector<std::pair<std::string, double>> parameters = {});

// rho = e^{pi^2/4}, about 11.79.
double rho();

struct CondLowerBounds {
    double O = 0.0;
    double Q = 0.0;
};

// Lower bounds on cond(O) and cond(Q) for O (mK1 x n) and Q (n x pK2) of
// full rank. Requires n <= mK1 and n <= pK2.
CondLowerBounds cond_lower_bounds(int n, int m, int p, int K1, int K2);

enum class HankelVariant { Full, Minus };

// Upper bound on sigma_n of H (Full) or of H^- (Minus) for a stable or
// marginally stable system whose |b_ij| |c_ij| maxima multiply to delta_bar.
double hankel_sigma_n_bound(int n, int m, int p, int K1, int K2, double delta_bar,
                            HankelVariant variant = HankelVariant::Full);

// Upper bound on sigma_min of X = [W, DW, ..., D^{m_blocks-1} W] with
// W n x p (p <= n) and D real-diagonalizable, relative to ||X||.
double krylov_sv_bound(int n, int m_blocks, int p, double X_norm);

// sigma_{j+2k}(H) <= 16 rho^{-(2k-2)/log(2n)} sigma_j(H) for every j >= 1,
// k >= 1 with j + 2k <= n. Throws Error(Structure) unless H is a symmetric
// positive semi-definite Hankel matrix.
std::vector<BoundReport> hankel_decay_check(const Matrix& H);

// ||O||_F^2 <= cbar^2 m n K1 and ||Q||_F^2 <= bbar^2 p n K2 when |lambda_i| <= 1.
double obsv_frobenius_sq_bound(double c_max, int m, int n, int K1);
double ctrb_frobenius_sq_bound(double b_max, int p, int n, int K2);

} // namespace mimoid::bounds
