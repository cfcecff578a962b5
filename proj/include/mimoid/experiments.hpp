#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "mimoid/lti.hpp"
#include "mimoid/rng.hpp"

// Randomized sweeps of the ill-conditioning bounds over sampled
// marginally stable diagonal systems.
namespace mimoid::experiments {

enum class SweepKind { HankelSv, CondO, CondQ, FimMinEig };

std::string_view to_string(SweepKind kind);
// Accepts "hankel-sv", "cond-O", "cond-Q", "fim-min-eig".
SweepKind parse_sweep_kind(std::string_view name);

struct SweepConfig {
    std::vector<int> n_values;
    int trials = 200;
    int p = 1;
    int m = 1;
    std::uint64_t seed = 0;
    SweepKind which = SweepKind::HankelSv;
    unsigned workers = 1;

    void validate() const;
};

struct SweepRow {
    SweepKind which = SweepKind::HankelSv;
    int n = 0;
    int trial = 0;
    double measured = 0.0;
    double bound = 0.0;
    bool below_machine_eps = false;
};

// Diagonal A with i.i.d. Uniform[-1, 1] poles, B and C entries likewise.
// Redraws when two poles are closer than 1e-9; gives up with
// Error(Sampling) after 100 attempts.
lti::StateSpaceModel sample_system(int n, int p, int m, CounterRng& rng);

// One trial: system from the (seed, n, trial) stream, measured quantity and
// its bound. Pure function of its arguments.
SweepRow sweep_trial(const SweepConfig& config, int n, int trial);

// |n_values| * trials rows ordered by (n, trial), independent of workers.
std::vector<SweepRow> sweep(const SweepConfig& config);

// True when the row respects its bound with relative slack 1e-9 (measured
// <= bound for upper bounds, measured >= bound for the cond-O/cond-Q lower bounds).
bool row_satisfied(const SweepRow& row);

std::string sweep_csv(const std::vector<SweepRow>& rows);

} // namespace mimoid::experiments
