#include "mimoid/fisher.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "mimoid/bounds.hpp"
#include "mimoid/error.hpp"
#include "mimoid/parallel.hpp"

namespace mimoid::fisher {

namespace {

int ceil_div(int a, int b) {
    return (a + b - 1) / b;
}

void require_window(int n, int p, int m, int K) {
    if (n < 1 || p < 1 || m < 1) {
        throw Error(ErrorKind::Window, "n, p, m must be positive");
    }
    const int min_K = ceil_div(n, p * m) + 1;
    if (K < min_K) {
        throw Error(ErrorKind::Window, "K = " + std::to_string(K) + " is below ceil(n/(pm)) + 1 = " +
                                           std::to_string(min_K));
    }
}

// rho^{-(floor(kappa) - 3) / log(2K)}
double kappa_decay(int n, int p, int m, int K) {
    const int floor_kappa = n / (p * m);
    return std::pow(bounds::rho(), -static_cast<double>(floor_kappa - 3) / std::log(2.0 * K));
}

void check_fim_inputs(const lti::StateSpaceModel& model, const std::vector<Matrix>& input_sets) {
    model.validate();
    if (!model.diagonal) {
        throw Error(ErrorKind::AssumptionViolation, "Fisher information needs a diagonal-A model");
    }
    const int m = model.m();
    if ((model.meas_cov - Matrix::Identity(m, m)).cwiseAbs().maxCoeff() > 1e-12) {
        throw Error(ErrorKind::AssumptionViolation, "measurement covariance must be the identity (pre-whiten first)");
    }
    if (input_sets.empty()) {
        throw Error(ErrorKind::InvalidInput, "at least one input sequence is required");
    }
    for (const auto& U : input_sets) {
        if (U.rows() != model.p()) {
            throw Error(ErrorKind::Shape, "input sequence has wrong input dimension");
        }
        if (U.cols() != input_sets.front().cols() || U.cols() < 1) {
            throw Error(ErrorKind::Shape, "all input sequences must share the same K >= 1");
        }
    }
}

} // namespace

Matrix build_S(const Matrix& inputs, int m) {
    const int p = static_cast<int>(inputs.rows());
    const int K = static_cast<int>(inputs.cols());
    Matrix S = Matrix::Zero(static_cast<Eigen::Index>(m) * K, static_cast<Eigen::Index>(p) * m * K);
    for (int r = 0; r < K; ++r) {
        for (int t = 0; t <= r; ++t) {
            const auto u = inputs.col(r - t);
            for (int i = 0; i < m; ++i) {
                S.block(r * m + i, t * p * m + i * p, 1, p) = u.transpose();
            }
        }
    }
    return S;
}

Matrix build_V(const Vector& lambda, const Matrix& B, const Matrix& C, int K) {
    const auto n = lambda.size();
    const auto p = B.cols();
    const auto m = C.rows();
    if (B.rows() != n || C.cols() != n) {
        throw Error(ErrorKind::Shape, "B and C must match the number of poles");
    }
    if (K < 1) {
        throw Error(ErrorKind::Length, "K must be at least 1");
    }
    Matrix V = Matrix::Zero(p * m * K, n);
    for (int k = 1; k < K; ++k) {
        for (Eigen::Index q = 0; q < n; ++q) {
            const double d = k * std::pow(lambda(q), k - 1);
            for (Eigen::Index i = 0; i < m; ++i) {
                for (Eigen::Index j = 0; j < p; ++j) {
                    V(k * p * m + i * p + j, q) = d * C(i, q) * B(q, j);
                }
            }
        }
    }
    return V;
}

FisherReport fim(const lti::StateSpaceModel& model, const std::vector<Matrix>& input_sets, unsigned workers) {
    check_fim_inputs(model, input_sets);
    const int n = model.n();
    const int p = model.p();
    const int m = model.m();
    const int K = static_cast<int>(input_sets.front().cols());
    const int N = static_cast<int>(input_sets.size());

    FisherReport report;
    report.V = build_V(model.A.diagonal(), model.B, model.C, K);
    report.S_list.resize(input_sets.size());
    std::vector<Matrix> terms(input_sets.size());
    parallel_for(input_sets.size(), workers, [&](std::size_t l) {
        report.S_list[l] = build_S(input_sets[l], m);
        const Matrix SV = report.S_list[l] * report.V;
        terms[l] = SV.transpose() * SV;
    });
    report.I = Matrix::Zero(n, n);
    for (const auto& term : terms) {
        report.I += term;
    }
    report.I = 0.5 * (report.I + report.I.transpose()).eval();

    Eigen::SelfAdjointEigenSolver<Matrix> es(report.I, Eigen::EigenvaluesOnly);
    report.lambda_min = es.eigenvalues()(0);
    const Vector sv = matkit::singular_values(report.V);
    report.sigma_min_V = sv.size() >= n ? sv(n - 1) : 0.0;

    if (K >= ceil_div(n, p * m) + 1) {
        const double db = model.delta_bar();
        report.sigma_min_V_bound = sigma_min_V_bound(n, p, m, K, db);
        report.lambda_min_bound = fim_min_eig_bound(n, p, m, N, K, db);
    }
    return report;
}

Matrix fim_oracle(const lti::StateSpaceModel& model, const std::vector<Matrix>& input_sets, double step) {
    check_fim_inputs(model, input_sets);
    if (!(step > 0.0)) {
        throw Error(ErrorKind::InvalidInput, "finite-difference step must be positive");
    }
    const int n = model.n();
    const int m = model.m();
    const Vector poles = model.A.diagonal();

    auto mean_output = [&](const Vector& lambda, const Matrix& U) {
        const auto K = U.cols();
        Vector mu(m * K);
        Vector x = Vector::Zero(n);
        for (Eigen::Index k = 0; k < K; ++k) {
            x = lambda.cwiseProduct(x) + model.B * U.col(k);
            mu.segment(k * m, m) = model.C * x;
        }
        return mu;
    };

    Matrix I = Matrix::Zero(n, n);
    for (const auto& U : input_sets) {
        Matrix J(m * U.cols(), n);
        for (int q = 0; q < n; ++q) {
            Vector up = poles;
            Vector down = poles;
            up(q) += step;
            down(q) -= step;
            J.col(q) = (mean_output(up, U) - mean_output(down, U)) / (2.0 * step);
        }
        I += J.transpose() * J;
    }
    return I;
}

double min_eig_via_sv(const lti::StateSpaceModel& model, const std::vector<Matrix>& input_sets) {
    check_fim_inputs(model, input_sets);
    const int n = model.n();
    const int m = model.m();
    const int K = static_cast<int>(input_sets.front().cols());
    const Matrix V = build_V(model.A.diagonal(), model.B, model.C, K);
    Matrix stacked(static_cast<Eigen::Index>(m) * K * static_cast<Eigen::Index>(input_sets.size()), n);
    for (std::size_t l = 0; l < input_sets.size(); ++l) {
        stacked.middleRows(static_cast<Eigen::Index>(l) * m * K, m * K) = build_S(input_sets[l], m) * V;
    }
    const Vector s = matkit::singular_values(stacked);
    if (s.size() < n) {
        return 0.0;
    }
    return s(n - 1) * s(n - 1);
}

double sigma_min_V_bound(int n, int p, int m, int K, double delta_bar) {
    require_window(n, p, m, K);
    const double pm = static_cast<double>(p) * m;
    const double sq = 16.0 * n * n * pm * delta_bar * delta_bar * std::pow(K, 3) * kappa_decay(n, p, m, K);
    return std::sqrt(sq);
}

double fim_min_eig_bound(int n, int p, int m, int N, int K, double delta_bar) {
    require_window(n, p, m, K);
    if (N < 1) {
        throw Error(ErrorKind::InvalidInput, "N must be at least 1");
    }
    const double pm = static_cast<double>(p) * m;
    return 16.0 * N * n * n * pm * pm * delta_bar * delta_bar * std::pow(K, 5) * kappa_decay(n, p, m, K);
}

double crb_floor(int n, int p, int m, int N, int K, double delta_bar) {
    return 1.0 / fim_min_eig_bound(n, p, m, N, K, delta_bar);
}

namespace {

double asymptotic_many_short(int n, int p, int m, double delta_bar, double epsilon) {
    const double kappa = static_cast<double>(n) / (p * m);
    const double log_ratio = std::log(static_cast<double>(n) / m);
    if (!(log_ratio > 0.0)) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    const double pi2 = std::numbers::pi * std::numbers::pi;
    const double e = pi2 * kappa / (4.0 * log_ratio) - 7.0 * std::log(n) - 2.0 * std::log(p * m) + 5.0 * std::log(m);
    return std::exp(e) / (epsilon * delta_bar * delta_bar);
}

double asymptotic_one_long(int n, int p, int m, double delta_bar, double epsilon) {
    const double kappa = static_cast<double>(n) / (p * m);
    const double pm = static_cast<double>(p) * m;
    const double pi2 = std::numbers::pi * std::numbers::pi;
    const double l = std::log(16.0 * epsilon * delta_bar * delta_bar * n * n * pm * pm);
    const double numerator = std::exp(std::sqrt(5.0 * pi2 * kappa + l * l) / 10.0);
    return numerator / (std::pow(epsilon, 0.1) * std::pow(delta_bar, 0.2) * std::pow(n, 0.2) * std::pow(pm, 0.2));
}

} // namespace

SampleComplexity sample_complexity(int n, int p, int m, double delta_bar, double epsilon, Regime regime,
                                   std::uint64_t cap) {
    if (!(epsilon > 0.0)) {
        throw Error(ErrorKind::InvalidInput, "epsilon must be positive");
    }
    if (!(delta_bar > 0.0)) {
        throw Error(ErrorKind::InvalidInput, "delta_bar must be positive");
    }
    SampleComplexity out;
    out.regime = regime;

    if (regime == Regime::ManyShort) {
        const int K = ceil_div(n, m) + 1;
        out.K = K;
        // crb_floor(N) = crb_floor(1) / N, so N = ceil(crb_floor(1) / epsilon),
        // then nudged so the same predicate the floor uses is satisfied exactly.
        const double single = crb_floor(n, p, m, 1, K, delta_bar);
        const double estimate = std::ceil(single / epsilon);
        if (!(estimate < 9.0e18)) {
            throw Error(ErrorKind::CapExceeded, "required N exceeds 9e18 (single-trajectory floor " +
                                                    std::to_string(single) + ")");
        }
        auto floor_at = [&](std::uint64_t N) { return single / static_cast<double>(N); };
        std::uint64_t N = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(estimate));
        while (N > 1 && floor_at(N - 1) <= epsilon) {
            --N;
        }
        while (floor_at(N) > epsilon) {
            ++N;
        }
        out.N = N;
        out.count = N;
        out.asymptotic = asymptotic_many_short(n, p, m, delta_bar, epsilon);
        return out;
    }

    // The floor is strictly decreasing in K for K >= 2, which covers every
    // admissible K = ceil(kappa) + 1, ..., so gallop then bisect.
    const std::uint64_t K0 = static_cast<std::uint64_t>(ceil_div(n, p * m) + 1);
    if (cap < K0) {
        throw Error(ErrorKind::CapExceeded, "search cap " + std::to_string(cap) + " is below the minimum K");
    }
    auto ok = [&](std::uint64_t K) { return crb_floor(n, p, m, 1, static_cast<int>(K), delta_bar) <= epsilon; };
    std::uint64_t hi = K0;
    std::uint64_t lo = K0 - 1; // ok(lo) is false or lo is below the window
    while (!ok(hi)) {
        if (hi >= cap) {
            throw Error(ErrorKind::CapExceeded, "no K <= cap = " + std::to_string(cap) + " reaches epsilon");
        }
        lo = hi;
        hi = std::min(cap, hi * 2);
    }
    while (hi - lo > 1) {
        const std::uint64_t mid = lo + (hi - lo) / 2;
        if (ok(mid)) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    out.K = static_cast<int>(hi);
    out.N = 1;
    out.count = hi;
    out.asymptotic = asymptotic_one_long(n, p, m, delta_bar, epsilon);
    return out;
}

} // namespace mimoid::fisher
