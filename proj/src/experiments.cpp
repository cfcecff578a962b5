#include "mimoid/experiments.hpp"

#include <cmath>
#include <sstream>

#include "mimoid/bounds.hpp"
#include "mimoid/error.hpp"
#include "mimoid/fisher.hpp"
#include "mimoid/parallel.hpp"

namespace mimoid::experiments {

std::string_view to_string(SweepKind kind) {
    switch (kind) {
    case SweepKind::HankelSv: return "hankel-sv";
    case SweepKind::CondO: return "cond-O";
    case SweepKind::CondQ: return "cond-Q";
    case SweepKind::FimMinEig: return "fim-min-eig";
    }
    return "unknown";
}

SweepKind parse_sweep_kind(std::string_view name) {
    for (auto kind : {SweepKind::HankelSv, SweepKind::CondO, SweepKind::CondQ, SweepKind::FimMinEig}) {
        if (name == to_string(kind)) {
            return kind;
        }
    }
    throw Error(ErrorKind::InvalidInput, "unknown sweep kind '" + std::string(name) +
                                             "' (expected hankel-sv, cond-O, cond-Q or fim-min-eig)");
}

void SweepConfig::validate() const {
    if (n_values.empty()) {
        throw Error(ErrorKind::InvalidInput, "n_values must not be empty");
    }
    for (int n : n_values) {
        if (n < 1) {
            throw Error(ErrorKind::InvalidInput, "every n must be at least 1");
        }
    }
    if (trials < 1) {
        throw Error(ErrorKind::InvalidInput, "trials must be at least 1");
    }
    if (p < 1 || m < 1) {
        throw Error(ErrorKind::InvalidInput, "p and m must be at least 1");
    }
}

lti::StateSpaceModel sample_system(int n, int p, int m, CounterRng& rng) {
    if (n < 1 || p < 1 || m < 1) {
        throw Error(ErrorKind::InvalidInput, "n, p, m must be at least 1");
    }
    for (int attempt = 0; attempt < 100; ++attempt) {
        Vector poles(n);
        for (int i = 0; i < n; ++i) {
            poles(i) = rng.uniform(-1.0, 1.0);
        }
        Matrix B(n, p);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < p; ++j) {
                B(i, j) = rng.uniform(-1.0, 1.0);
            }
        }
        Matrix C(m, n);
        for (int i = 0; i < m; ++i) {
            for (int j = 0; j < n; ++j) {
                C(i, j) = rng.uniform(-1.0, 1.0);
            }
        }
        bool distinct = true;
        for (int i = 0; i < n && distinct; ++i) {
            for (int j = i + 1; j < n; ++j) {
                if (std::abs(poles(i) - poles(j)) < 1e-9) {
                    distinct = false;
                    break;
                }
            }
        }
        if (distinct) {
            return lti::make_diagonal_model(poles, std::move(B), std::move(C));
        }
    }
    throw Error(ErrorKind::Sampling, "could not draw distinct poles in 100 attempts");
}

SweepRow sweep_trial(const SweepConfig& config, int n, int trial) {
    const auto trial_seed = derive_seed(config.seed, static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(trial));
    CounterRng rng(trial_seed, 0, streams::kSystem);
    const auto model = sample_system(n, config.p, config.m, rng);
    const int p = config.p;
    const int m = config.m;
    const int K1 = (n + m - 1) / m;
    const int K2 = (n + p - 1) / p;

    SweepRow row;
    row.which = config.which;
    row.n = n;
    row.trial = trial;
    switch (config.which) {
    case SweepKind::HankelSv: {
        const auto H = lti::build_hankel(lti::markov_sequence(model, K1 + K2 - 1), K1, K2).H;
        row.measured = matkit::singular_values(H)(n - 1);
        row.bound = bounds::hankel_sigma_n_bound(n, m, p, K1, K2, model.delta_bar());
        row.below_machine_eps = row.measured < kMachineEps;
        break;
    }
    case SweepKind::CondO:
    case SweepKind::CondQ: {
        const auto oc = lti::build_obsv_ctrb(model, K1, K2);
        const auto lb = bounds::cond_lower_bounds(n, m, p, K1, K2);
        const bool obsv = config.which == SweepKind::CondO;
        row.measured = obsv ? oc.cond_O : oc.cond_Q;
        row.bound = obsv ? lb.O : lb.Q;
        row.below_machine_eps = 1.0 / row.measured < kMachineEps;
        break;
    }
    case SweepKind::FimMinEig: {
        const int K = n + 1;
        const Matrix U = lti::gen_inputs(lti::InputKind::GaussianEnergyNormalized, p, K, derive_seed(trial_seed, 1));
        row.measured = fisher::min_eig_via_sv(model, {U});
        row.bound = fisher::fim_min_eig_bound(n, p, m, 1, K, model.delta_bar());
        row.below_machine_eps = row.measured < kMachineEps * kMachineEps;
        break;
    }
    }
    return row;
}

std::vector<SweepRow> sweep(const SweepConfig& config) {
    config.validate();
    const auto trials = static_cast<std::size_t>(config.trials);
    std::vector<SweepRow> rows(config.n_values.size() * trials);
    parallel_for(rows.size(), config.workers, [&](std::size_t i) {
        rows[i] = sweep_trial(config, config.n_values[i / trials], static_cast<int>(i % trials));
    });
    return rows;
}

bool row_satisfied(const SweepRow& row) {
    const auto direction = (row.which == SweepKind::CondO || row.which == SweepKind::CondQ) ? bounds::Direction::Lower
                                                                                            : bounds::Direction::Upper;
    return bounds::make_report(std::string(to_string(row.which)), row.measured, row.bound, direction).satisfied;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::ostringstream os;
    os << "which,n,trial,measured,bound,below_machine_eps\n";
    char buf[64];
    for (const auto& r : rows) {
        os << to_string(r.which) << ',' << r.n << ',' << r.trial << ',';
        std::snprintf(buf, sizeof buf, "%.17g,%.17g", r.measured, r.bound);
        os << buf << ',' << (r.below_machine_eps ? 1 : 0) << '\n';
    }
    return os.str();
}

} // namespace mimoid::experiments
