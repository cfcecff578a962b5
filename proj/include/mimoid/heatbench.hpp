#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "mimoid/estimators.hpp"
#include "mimoid/lti.hpp"

// Heat-conduction benchmark: a 4 x 4 finite-difference plate with insulated
// edges, four point heaters and one temperature sensor.
namespace mimoid::heatbench {

struct HeatConfig {
    double alpha = 0.2;       // thermal diffusivity
    double side_length = 3.0; // l
    double sample_rate = 1.0; // Hz, so dt = 1 / sample_rate
    std::vector<std::pair<double, double>> actuators = {{0.75, 0.75}, {0.75, 2.25}, {2.25, 0.75}, {2.25, 2.25}};
    std::pair<double, double> sensor = {1.5, 1.5};
    double process_noise_var = 1.0; // process_cov = var * I_16
    double meas_noise_var = 1.0;

    static constexpr int kGrid = 4;

    void validate() const;
};

// Node (i, j) sits at (i h, j h) with h = l / (grid - 1) and has state index
// i * grid + j. The Laplacian couples each node to its existing grid
// neighbours only (zero flux across the edge), which keeps A symmetric with
// unit row sums. B puts unit heat on the node nearest each actuator (lowest
// index on ties); C averages all nodes nearest the sensor.
lti::StateSpaceModel build_heat_model(const HeatConfig& cfg);

struct HeatMetadata {
    int full_order = 0;
    int minimal_order = 0;
    double minimal_spectral_radius = 0.0;
    std::vector<double> minimal_poles; // ascending
    int target_order = 3;
    double target_spectral_radius = 0.85;
    std::string discretization;

    [[nodiscard]] bool meets_targets(double radius_tol = 0.05) const;
};

HeatMetadata heat_metadata(const HeatConfig& cfg);

struct HeatRow {
    estimators::Method algo = estimators::Method::HoKalman;
    int N = 0;
    int K = 0;
    std::uint64_t seed = 0;
    double hausdorff = 0.0;
    double sigma_min_H = 0.0; // sigma_n of the true H^- at the algorithm's window
    double cond_O = 0.0;      // of the true minimal realization at that window
    double cond_Q = 0.0;
};

struct PoleRow {
    estimators::Method algo = estimators::Method::HoKalman;
    int N = 0;
    int K = 0;
    std::uint64_t seed = 0;
    std::string kind; // "true" or "estimate"
    double re = 0.0;
    double im = 0.0;
};

struct HeatResult {
    std::vector<HeatRow> rows;
    std::vector<PoleRow> poles;
    HeatMetadata metadata;
};

struct Window {
    int T = 0; // Markov blocks estimated (Ho-Kalman only)
    int K1 = 0;
    int K2 = 0;
};

// Hankel windows used for trajectory length K and order n with m outputs.
Window hokalman_window(int K);
Window moesp_window(int K, int n, int m);

// One cell per (N, K, algorithm), in that nesting order. Every algorithm in a
// (N, K) cell sees the same dataset. Cells run on up to `workers` threads.
HeatResult run_heat_experiment(const HeatConfig& cfg, const std::vector<int>& N_list, const std::vector<int>& K_list,
                               const std::vector<estimators::Method>& algorithms, std::uint64_t seed,
                               unsigned workers = 1);

// Hausdorff error of one algorithm on the noise-free benchmark. Ho-Kalman
// uses N = 10 trajectories of length 18; MOESP a single trajectory of 200.
double noiseless_control(const HeatConfig& cfg, estimators::Method algo, std::uint64_t seed);

// CSV writers (header + one line per row, 17 significant digits).
std::string rows_csv(const std::vector<HeatRow>& rows);
std::string poles_csv(const std::vector<PoleRow>& poles);

} // namespace mimoid::heatbench
