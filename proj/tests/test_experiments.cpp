#include "doctest.h"
#include "mimoid/error.hpp"
#include "mimoid/experiments.hpp"

#include <cmath>

using namespace mimoid;
using experiments::SweepKind;

TEST_CASE("sample_system") {
    CounterRng rng(1, 0, streams::kSystem);
    double sum = 0.0;
    int count = 0;
    for (int t = 0; t < 2500; ++t) {
        const auto model = experiments::sample_system(4, 2, 2, rng);
        CHECK(model.diagonal);
        CHECK(model.A.cwiseAbs().maxCoeff() <= 1.0);
        CHECK(model.delta_bar() <= 1.0);
        sum += model.A.diagonal().sum();
        count += 4;
    }
    CHECK(std::abs(sum / count) <= 0.05);
    CHECK_THROWS_AS(experiments::sample_system(0, 1, 1, rng), Error);
}

TEST_CASE("sweep") {
    experiments::SweepConfig cfg;
    cfg.n_values = {2, 3, 4, 5, 6, 7, 8};
    cfg.trials = 50;
    cfg.seed = 7;

    SUBCASE("row accounting and zero violations for every kind") {
        for (auto kind : {SweepKind::HankelSv, SweepKind::CondO, SweepKind::CondQ, SweepKind::FimMinEig}) {
            cfg.which = kind;
            const auto rows = experiments::sweep(cfg);
            CHECK(rows.size() == cfg.n_values.size() * 50);
            for (const auto& r : rows) {
                CHECK(experiments::row_satisfied(r));
            }
        }
    }

    SUBCASE("identical output for any worker count and on re-run") {
        cfg.which = SweepKind::FimMinEig;
        const auto a = experiments::sweep_csv(experiments::sweep(cfg));
        cfg.workers = 3;
        const auto b = experiments::sweep_csv(experiments::sweep(cfg));
        const auto c = experiments::sweep_csv(experiments::sweep(cfg));
        CHECK(a == b);
        CHECK(b == c);
    }

    SUBCASE("csv format") {
        cfg.n_values = {3};
        cfg.trials = 2;
        const auto csv = experiments::sweep_csv(experiments::sweep(cfg));
        CHECK(csv.rfind("which,n,trial,measured,bound,below_machine_eps\n", 0) == 0);
        CHECK(csv.find("hankel-sv,3,1,") != std::string::npos);
    }

    SUBCASE("machine epsilon flags") {
        cfg.which = SweepKind::HankelSv;
        cfg.n_values = {12};
        cfg.trials = 100;
        int flagged = 0;
        for (const auto& r : experiments::sweep(cfg)) {
            CHECK(r.below_machine_eps == (r.measured < kMachineEps));
            flagged += r.below_machine_eps ? 1 : 0;
        }
        CHECK(flagged > 0); // n = 12 Hankel matrices are numerically singular
    }

    SUBCASE("kind names") {
        CHECK(experiments::parse_sweep_kind("cond-O") == SweepKind::CondO);
        CHECK(experiments::to_string(SweepKind::FimMinEig) == "fim-min-eig");
        CHECK_THROWS_AS(experiments::parse_sweep_kind("cond-X"), Error);
        cfg.trials = 0;
        CHECK_THROWS_AS(experiments::sweep(cfg), Error);
    }
}
