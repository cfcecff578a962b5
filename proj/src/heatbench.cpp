#include "mimoid/heatbench.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mimoid/error.hpp"
#include "mimoid/parallel.hpp"
#include "mimoid/rng.hpp"

namespace mimoid::heatbench {

namespace {

constexpr int kGrid = HeatConfig::kGrid;

int node(int i, int j) {
    return i * kGrid + j;
}

// All node indices at minimal distance from (x, y), ascending.
std::vector<int> nearest_nodes(double x, double y, double h) {
    std::vector<int> best;
    double best_d2 = 0.0;
    for (int i = 0; i < kGrid; ++i) {
        for (int j = 0; j < kGrid; ++j) {
            const double dx = i * h - x;
            const double dy = j * h - y;
            const double d2 = dx * dx + dy * dy;
            if (best.empty() || d2 < best_d2 - 1e-12) {
                best = {node(i, j)};
                best_d2 = d2;
            } else if (std::abs(d2 - best_d2) <= 1e-12) {
                best.push_back(node(i, j));
            }
        }
    }
    return best;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

void HeatConfig::validate() const {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
        throw Error(ErrorKind::InvalidInput, "alpha must be positive");
    }
    if (!(side_length > 0.0) || !(sample_rate > 0.0)) {
        throw Error(ErrorKind::InvalidInput, "side_length and sample_rate must be positive");
    }
    if (actuators.empty()) {
        throw Error(ErrorKind::InvalidInput, "at least one actuator is required");
    }
    if (process_noise_var < 0.0 || meas_noise_var < 0.0) {
        throw Error(ErrorKind::InvalidInput, "noise variances must be non-negative");
    }
}

lti::StateSpaceModel build_heat_model(const HeatConfig& cfg) {
    cfg.validate();
    const int n = kGrid * kGrid;
    const double h = cfg.side_length / (kGrid - 1);
    const double dt = 1.0 / cfg.sample_rate;

    Matrix L = Matrix::Zero(n, n);
    for (int i = 0; i < kGrid; ++i) {
        for (int j = 0; j < kGrid; ++j) {
            const int r = node(i, j);
            for (auto [di, dj] : {std::pair{1, 0}, {-1, 0}, {0, 1}, {0, -1}}) {
                const int a = i + di;
                const int b = j + dj;
                if (a < 0 || a >= kGrid || b < 0 || b >= kGrid) {
                    continue;
                }
                L(r, node(a, b)) += 1.0;
                L(r, r) -= 1.0;
            }
        }
    }
    L /= h * h;
    Matrix A = Matrix::Identity(n, n) + dt * cfg.alpha * L;

    const int p = static_cast<int>(cfg.actuators.size());
    Matrix B = Matrix::Zero(n, p);
    for (int c = 0; c < p; ++c) {
        B(nearest_nodes(cfg.actuators[c].first, cfg.actuators[c].second, h).front(), c) = 1.0;
    }
    Matrix C = Matrix::Zero(1, n);
    const auto sensed = nearest_nodes(cfg.sensor.first, cfg.sensor.second, h);
    for (int k : sensed) {
        C(0, k) = 1.0 / static_cast<double>(sensed.size());
    }

    const double radius = lti::spectral_radius(A);
    if (radius > 1.0 + 1e-9) {
        throw Error(ErrorKind::Stability, "explicit Euler step is unstable: spectral radius " + fmt(radius));
    }

    lti::StateSpaceModel model = lti::make_model(std::move(A), std::move(B), std::move(C));
    model.process_cov = cfg.process_noise_var * Matrix::Identity(n, n);
    model.meas_cov = cfg.meas_noise_var * Matrix::Identity(1, 1);
    model.validate();
    return model;
}

bool HeatMetadata::meets_targets(double radius_tol) const {
    return minimal_order == target_order && std::abs(minimal_spectral_radius - target_spectral_radius) <= radius_tol;
}

HeatMetadata heat_metadata(const HeatConfig& cfg) {
    const auto model = build_heat_model(cfg);
    const auto minimal = lti::minimal_realization(model);
    HeatMetadata meta;
    meta.full_order = model.n();
    meta.minimal_order = minimal.n();
    meta.minimal_spectral_radius = lti::spectral_radius(minimal.A);
    for (const auto& z : matkit::spectrum(minimal.A)) {
        meta.minimal_poles.push_back(z.real());
    }
    std::sort(meta.minimal_poles.begin(), meta.minimal_poles.end());
    meta.discretization = "5-point Laplacian, zero-flux edges (missing neighbours omitted), explicit Euler";
    return meta;
}

Window hokalman_window(int K) {
    const int K1 = (K + 1) / 2;
    return {K, K1, K + 1 - K1};
}

Window moesp_window(int K, int n, int m) {
    const int K1 = (n + m - 1) / m + 2;
    return {0, K1, K - K1 + 1};
}

namespace {

estimators::RealizationEstimate identify(const lti::Dataset& data, estimators::Method algo, int order) {
    const int K = data.length();
    if (algo == estimators::Method::HoKalman) {
        const auto w = hokalman_window(K);
        const auto markov = estimators::estimate_markov_ols(data, w.T);
        return estimators::ho_kalman(markov, order, w.K1, w.K2);
    }
    const auto w = moesp_window(K, order, data.trajectories.front().outputs.rows());
    return estimators::moesp(data, order, w.K1, w.K2);
}

struct Diagnostics {
    double sigma_min_H = 0.0;
    double cond_O = 0.0;
    double cond_Q = 0.0;
};

Diagnostics diagnostics(const lti::StateSpaceModel& minimal, estimators::Method algo, int K) {
    const int n = minimal.n();
    const auto w = algo == estimators::Method::HoKalman ? hokalman_window(K) : moesp_window(K, n, minimal.m());
    const int q2 = algo == estimators::Method::HoKalman ? w.K2 - 1 : w.K2;
    Diagnostics d;
    const auto hankel = lti::build_hankel(lti::markov_sequence(minimal, w.K1 + w.K2 - 1), w.K1, w.K2);
    const Vector s = matkit::singular_values(algo == estimators::Method::HoKalman ? hankel.H_minus : hankel.H);
    d.sigma_min_H = s.size() >= n ? s(n - 1) : 0.0;
    const auto oc = lti::build_obsv_ctrb(minimal, w.K1, q2);
    d.cond_O = oc.cond_O;
    d.cond_Q = oc.cond_Q;
    return d;
}

} // namespace

HeatResult run_heat_experiment(const HeatConfig& cfg, const std::vector<int>& N_list, const std::vector<int>& K_list,
                               const std::vector<estimators::Method>& algorithms, std::uint64_t seed,
                               unsigned workers) {
    const auto model = build_heat_model(cfg);
    const auto minimal = lti::minimal_realization(model);
    const auto true_poles = matkit::spectrum(minimal.A);

    HeatResult result;
    result.metadata = heat_metadata(cfg);

    struct Cell {
        int N;
        int K;
    };
    std::vector<Cell> cells;
    for (int N : N_list) {
        for (int K : K_list) {
            if (N < 1 || K < 1) {
                throw Error(ErrorKind::InvalidInput, "N and K must be positive");
            }
            cells.push_back({N, K});
        }
    }

    struct CellOutput {
        std::vector<HeatRow> rows;
        std::vector<PoleRow> poles;
    };
    std::vector<CellOutput> outputs(cells.size());
    parallel_for(cells.size(), workers, [&](std::size_t c) {
        const auto [N, K] = cells[c];
        const auto data_seed = derive_seed(seed, static_cast<std::uint64_t>(N), static_cast<std::uint64_t>(K));
        const auto data = lti::make_dataset(model, N, K, lti::InputKind::GaussianUnit, data_seed);
        for (auto algo : algorithms) {
            const auto est = identify(data, algo, minimal.n());
            const auto est_poles = matkit::spectrum(est.A_hat);
            const auto d = diagnostics(minimal, algo, K);
            outputs[c].rows.push_back({algo, N, K, seed, lti::hausdorff(true_poles, est_poles), d.sigma_min_H,
                                       d.cond_O, d.cond_Q});
            for (const auto& z : true_poles) {
                outputs[c].poles.push_back({algo, N, K, seed, "true", z.real(), z.imag()});
            }
            for (const auto& z : est_poles) {
                outputs[c].poles.push_back({algo, N, K, seed, "estimate", z.real(), z.imag()});
            }
        }
    });
    for (auto& out : outputs) {
        result.rows.insert(result.rows.end(), out.rows.begin(), out.rows.end());
        result.poles.insert(result.poles.end(), out.poles.begin(), out.poles.end());
    }
    return result;
}

double noiseless_control(const HeatConfig& cfg, estimators::Method algo, std::uint64_t seed) {
    auto quiet = cfg;
    quiet.process_noise_var = 0.0;
    quiet.meas_noise_var = 0.0;
    const auto model = build_heat_model(quiet);
    const auto minimal = lti::minimal_realization(model);
    const bool hk = algo == estimators::Method::HoKalman;
    const auto data = lti::make_dataset(model, hk ? 10 : 1, hk ? 18 : 200, lti::InputKind::GaussianUnit, seed);
    const auto est = identify(data, algo, minimal.n());
    return lti::hausdorff(matkit::spectrum(minimal.A), matkit::spectrum(est.A_hat));
}

std::string rows_csv(const std::vector<HeatRow>& rows) {
    std::ostringstream os;
    os << "algo,N,K,seed,hausdorff,sigma_min_H,cond_O,cond_Q\n";
    for (const auto& r : rows) {
        os << estimators::to_string(r.algo) << ',' << r.N << ',' << r.K << ',' << r.seed << ',' << fmt(r.hausdorff)
           << ',' << fmt(r.sigma_min_H) << ',' << fmt(r.cond_O) << ',' << fmt(r.cond_Q) << '\n';
    }
    return os.str();
}

std::string poles_csv(const std::vector<PoleRow>& poles) {
    std::ostringstream os;
    os << "algo,N,K,seed,kind,re,im\n";
    for (const auto& r : poles) {
        os << estimators::to_string(r.algo) << ',' << r.N << ',' << r.K << ',' << r.seed << ',' << r.kind << ','
           << fmt(r.re) << ',' << fmt(r.im) << '\n';
    }
    return os.str();
}

} // namespace mimoid::heatbench
