#include "doctest.h"
#include "helpers.hpp"
#include "mimoid/bounds.hpp"
#include "mimoid/error.hpp"

#include <cmath>
#include <numbers>

using namespace mimoid;
using bounds::HankelVariant;

// Reference values below were evaluated independently at 50-digit precision.

TEST_CASE("rho") {
    CHECK(bounds::rho() == doctest::Approx(11.7917613892348).epsilon(1e-13));
    CHECK(std::abs(std::log(bounds::rho()) - std::numbers::pi * std::numbers::pi / 4.0) <= 1e-14);
    CHECK(bounds::rho() > 11.0);
    CHECK(bounds::rho() < 12.0);
}

TEST_CASE("cond_lower_bounds") {
    SUBCASE("zero exponent") {
        const auto lb = bounds::cond_lower_bounds(1, 1, 1, 1, 1);
        CHECK(lb.O == doctest::Approx(0.25));
        CHECK(lb.Q == doctest::Approx(0.25));
    }

    SUBCASE("reference values") {
        CHECK(bounds::cond_lower_bounds(5, 1, 1, 5, 5).O == doctest::Approx(2.1315789663706692).epsilon(1e-12));
        CHECK(bounds::cond_lower_bounds(12, 1, 1, 12, 12).Q == doctest::Approx(12.129528779403674).epsilon(1e-12));
    }

    SUBCASE("window precondition") {
        try {
            bounds::cond_lower_bounds(5, 1, 1, 4, 5);
            FAIL("expected a window error");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::Window);
        }
    }

    SUBCASE("measured condition numbers respect the bound") {
        for (std::uint64_t seed = 0; seed < 200; ++seed) {
            CounterRng rng(seed, 0, streams::kSystem);
            const int n = 2 + static_cast<int>(seed % 11);
            const auto model = [&] {
                Vector poles(n);
                for (int i = 0; i < n; ++i) {
                    poles(i) = rng.uniform(-1, 1);
                }
                return lti::make_diagonal_model(poles, test::random_matrix(n, 1, seed + 1000),
                                                test::random_matrix(1, n, seed + 2000));
            }();
            const auto oc = lti::build_obsv_ctrb(model, n, n);
            const auto lb = bounds::cond_lower_bounds(n, 1, 1, n, n);
            CHECK(oc.cond_O >= lb.O * (1 - bounds::kRelativeSlack));
            CHECK(oc.cond_Q >= lb.Q * (1 - bounds::kRelativeSlack));
        }
    }
}

TEST_CASE("hankel_sigma_n_bound") {
    SUBCASE("scalar window") {
        CHECK(bounds::hankel_sigma_n_bound(1, 1, 1, 1, 1, 1.0) == doctest::Approx(4.0));
        // |CB| <= delta_bar, so sigma_1([H_0]) <= 1 <= 4.
    }

    SUBCASE("reference values, non-increasing in n") {
        const double b4 = bounds::hankel_sigma_n_bound(4, 1, 1, 4, 4, 1.0);
        const double b8 = bounds::hankel_sigma_n_bound(8, 1, 1, 8, 8, 1.0);
        const double b12 = bounds::hankel_sigma_n_bound(12, 1, 1, 12, 12, 1.0);
        CHECK(b4 == doctest::Approx(19.537075595335316).epsilon(1e-12));
        CHECK(b8 == doctest::Approx(17.732461555100378).epsilon(1e-12));
        CHECK(b12 == doctest::Approx(11.871854432178485).epsilon(1e-12));
        CHECK(b8 <= b4);
        CHECK(b12 <= b8);
    }

    SUBCASE("MIMO reference values") {
        CHECK(bounds::hankel_sigma_n_bound(6, 2, 3, 4, 5, 0.7) == doctest::Approx(76.05138155833251).epsilon(1e-12));
        CHECK(bounds::hankel_sigma_n_bound(6, 2, 3, 4, 5, 0.7, HankelVariant::Minus) ==
              doctest::Approx(60.98315835484389).epsilon(1e-12));
    }

    SUBCASE("H^- variant needs K1 >= 2") {
        try {
            bounds::hankel_sigma_n_bound(2, 1, 1, 1, 3, 1.0, HankelVariant::Minus);
            FAIL("expected an undefined-log error");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::UndefinedLog);
        }
    }

    SUBCASE("sampled systems, full and minus variants") {
        for (int n = 2; n <= 12; ++n) {
            for (std::uint64_t trial = 0; trial < 200; ++trial) {
                CounterRng rng(derive_seed(99, n, trial), 0, streams::kSystem);
                Vector poles(n);
                for (int i = 0; i < n; ++i) {
                    poles(i) = rng.uniform(-1, 1);
                }
                Matrix B(n, 1);
                Matrix C(1, n);
                for (int i = 0; i < n; ++i) {
                    B(i, 0) = rng.uniform(-1, 1);
                    C(0, i) = rng.uniform(-1, 1);
                }
                const auto model = lti::make_model(poles.asDiagonal(), B, C);
                const auto H = lti::build_hankel(lti::markov_sequence(model, 2 * n + 1), n + 1, n + 1);
                const double db = model.delta_bar();
                // Full H with K1 = K2 = n + 1 and H^- (n + 1 by n).
                CHECK(matkit::singular_values(H.H)(n - 1) <=
                      bounds::hankel_sigma_n_bound(n, 1, 1, n + 1, n + 1, db) * (1 + bounds::kRelativeSlack));
                CHECK(matkit::singular_values(H.H_minus)(n - 1) <=
                      bounds::hankel_sigma_n_bound(n, 1, 1, n + 1, n + 1, db, HankelVariant::Minus) *
                          (1 + bounds::kRelativeSlack));
            }
        }
    }
}

TEST_CASE("krylov_sv_bound") {
    SUBCASE("parity correction") {
        // p = 1 and even p use no correction; odd p > 1 drops one column per block.
        CHECK(bounds::krylov_sv_bound(10, 6, 3, 2.5) == doctest::Approx(5.023082082583671).epsilon(1e-12));
        CHECK(bounds::krylov_sv_bound(9, 9, 1, 1.0) == doctest::Approx(0.13155182213111633).epsilon(1e-12));
    }

    SUBCASE("random Krylov matrices") {
        for (std::uint64_t seed = 0; seed < 50; ++seed) {
            CounterRng rng(seed, 0, streams::kSystem);
            const int p = 1 + static_cast<int>(rng.uniform() * 3);
            const int n = p + static_cast<int>(rng.uniform() * 9);
            const int blocks = (n + p - 1) / p + static_cast<int>(rng.uniform() * 3);
            Vector d(n);
            for (int i = 0; i < n; ++i) {
                d(i) = rng.uniform(-1, 1);
            }
            const Matrix W = test::random_matrix(n, p, seed + 77);
            Matrix X(n, blocks * p);
            Matrix block = W;
            for (int b = 0; b < blocks; ++b) {
                X.middleCols(b * p, p) = block;
                block = d.asDiagonal() * block;
            }
            const Vector s = matkit::singular_values(X);
            const double measured = s(s.size() - 1);
            CHECK(measured <= bounds::krylov_sv_bound(n, blocks, p, s(0)) * (1 + bounds::kRelativeSlack));
        }
    }
}

TEST_CASE("hankel_decay_check") {
    SUBCASE("Hilbert-type matrix") {
        Matrix H(3, 3);
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) {
                H(i, j) = 1.0 / (i + j + 1);
            }
        }
        const auto reports = bounds::hankel_decay_check(H);
        REQUIRE(reports.size() == 1); // j = 1, k = 1 only
        const double s1 = matkit::singular_values(H)(0);
        CHECK(reports[0].bound == doctest::Approx(16.0 * s1));
        CHECK(reports[0].satisfied);
    }

    SUBCASE("squared Vandermonde moment matrices") {
        for (std::uint64_t seed = 0; seed < 50; ++seed) {
            CounterRng rng(seed, 0, streams::kSystem);
            const int n = 8;
            Matrix H = Matrix::Zero(n, n);
            for (int node = 0; node < 12; ++node) {
                const double x = rng.uniform(-1, 1);
                const double w = rng.uniform(0.1, 1.0);
                for (int i = 0; i < n; ++i) {
                    for (int j = 0; j < n; ++j) {
                        H(i, j) += w * std::pow(x, i + j);
                    }
                }
            }
            for (const auto& r : bounds::hankel_decay_check(H)) {
                CHECK(r.satisfied);
            }
        }
    }

    SUBCASE("structure errors") {
        Matrix not_hankel(2, 2);
        not_hankel << 1, 2, 3, 4;
        CHECK_THROWS_AS(bounds::hankel_decay_check(not_hankel), Error);
        Matrix indefinite(2, 2);
        indefinite << 1, 2, 2, 1;
        try {
            bounds::hankel_decay_check(indefinite);
            FAIL("expected a structure error");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::Structure);
        }
    }
}

TEST_CASE("report flags") {
    const auto r = bounds::make_report("tiny", 1e-20, 1e-18, bounds::Direction::Upper);
    CHECK(r.satisfied);
    CHECK(r.bound_below_machine_eps);
    const auto lower = bounds::make_report("cond", 0.9, 1.0, bounds::Direction::Lower);
    CHECK_FALSE(lower.satisfied);
}
