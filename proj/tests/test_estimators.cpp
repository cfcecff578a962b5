#include "doctest.h"
#include "helpers.hpp"
#include "mimoid/error.hpp"
#include "mimoid/estimators.hpp"

#include <algorithm>
#include <cmath>

using namespace mimoid;
using test::random_matrix;

namespace {

double spectrum_gap(const Matrix& A_hat, const Matrix& A) {
    return lti::hausdorff(matkit::spectrum(A_hat), matkit::spectrum(A));
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const auto mid = v.size() / 2;
    return v.size() % 2 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

} // namespace

TEST_CASE("estimate_markov_ols") {
    SUBCASE("noiseless data, N >= pT trajectories") {
        const auto model = lti::noiseless(test::well_conditioned_diag_model(3, 2, 2, 1));
        const int T = 6;
        const auto data = lti::make_dataset(model, 2 * T, T, lti::InputKind::GaussianUnit, 5);
        const auto est = estimators::estimate_markov_ols(data, T);
        const auto truth = lti::markov_sequence(model, T);
        for (int k = 0; k < T; ++k) {
            CHECK((est.blocks[k] - truth.blocks[k]).cwiseAbs().maxCoeff() <= 1e-8);
        }
        const auto last = estimators::estimate_markov_ols(lti::make_dataset(model, 4 * T, T, lti::InputKind::GaussianUnit, 6),
                                                          T, estimators::OlsMode::LastStepLs);
        for (int k = 0; k < T; ++k) {
            CHECK((last.blocks[k] - truth.blocks[k]).cwiseAbs().maxCoeff() <= 1e-8);
        }
    }

    SUBCASE("noiseless regression leaves no residual") {
        const auto model = lti::noiseless(test::well_conditioned_diag_model(2, 1, 2, 4));
        const auto data = lti::make_dataset(model, 3, 8, lti::InputKind::GaussianUnit, 2);
        const auto est = estimators::estimate_markov_ols(data, 8);
        double resid = 0.0;
        double scale = 0.0;
        for (const auto& traj : data.trajectories) {
            for (int k = 1; k <= 8; ++k) {
                Vector y = Vector::Zero(2);
                for (int j = 0; j < k; ++j) {
                    y += est.blocks[j] * traj.inputs.col(k - 1 - j);
                }
                resid += (y - traj.outputs.col(k)).squaredNorm();
                scale += traj.outputs.col(k).squaredNorm();
            }
        }
        CHECK(std::sqrt(resid) <= 1e-9 * std::sqrt(scale));
    }

    SUBCASE("impulse response from one trajectory") {
        const auto model = lti::noiseless(test::well_conditioned_diag_model(3, 1, 2, 9));
        const auto data = lti::make_dataset(model, 1, 5, lti::InputKind::Impulse, 0);
        const auto est = estimators::estimate_markov_ols(data, 5);
        for (int k = 0; k < 5; ++k) {
            CHECK((est.blocks[k] - data.trajectories[0].outputs.col(k + 1)).norm() <= 1e-14);
        }
    }

    SUBCASE("an unexcited input channel names the first missing block") {
        const auto model = lti::noiseless(test::well_conditioned_diag_model(2, 2, 1, 9));
        const auto data = lti::make_dataset(model, 1, 4, lti::InputKind::Impulse, 0);
        try {
            estimators::estimate_markov_ols(data, 4);
            FAIL("expected an excitation error");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::Excitation);
            CHECK(std::string(e.what()).find("H_0") != std::string::npos);
        }
    }

    SUBCASE("more trajectories reduce the error under measurement noise") {
        const auto model = test::well_conditioned_diag_model(2, 1, 1, 12);
        const auto truth = lti::markov_sequence(model, 4);
        std::vector<double> small;
        std::vector<double> large;
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            for (int N : {50, 100}) {
                const auto data = lti::make_dataset(model, N, 4, lti::InputKind::GaussianUnit, 1000 * seed + N);
                const auto est = estimators::estimate_markov_ols(data, 4);
                double err = 0.0;
                for (int k = 0; k < 4; ++k) {
                    err = std::max(err, (est.blocks[k] - truth.blocks[k]).cwiseAbs().maxCoeff());
                }
                (N == 50 ? small : large).push_back(err);
            }
        }
        CHECK(median(large) < median(small));
    }
}

TEST_CASE("ho_kalman") {
    SUBCASE("exact Markov parameters of a two-pole system") {
        const auto model = test::well_conditioned_diag_model(2, 1, 1, 3);
        const auto est = estimators::ho_kalman(lti::markov_sequence(model, 5), 2, 3, 3);
        CHECK(spectrum_gap(est.A_hat, model.A) <= 1e-8);
        CHECK(est.warnings.empty());
    }

    SUBCASE("balanced factors") {
        const auto model = test::well_conditioned_diag_model(3, 2, 2, 5);
        const auto est = estimators::ho_kalman(lti::markov_sequence(model, 7), 3, 3, 5);
        const Matrix gram_O = est.O_hat.transpose() * est.O_hat;
        const Matrix gram_Q = est.Q_hat * est.Q_hat.transpose();
        const Matrix sigma = est.singular_values_used.head(3).asDiagonal();
        CHECK((gram_O - sigma).norm() <= 1e-8);
        CHECK((gram_Q - sigma).norm() <= 1e-8);
    }

    SUBCASE("scalar hand case") {
        lti::MarkovSequence seq;
        for (double v : {1.0, 0.5, 0.25, 0.125}) {
            seq.blocks.push_back(Matrix::Constant(1, 1, v));
        }
        const auto est = estimators::ho_kalman(seq, 1, 2, 2);
        CHECK(est.A_hat(0, 0) == doctest::Approx(0.5).epsilon(1e-12));
        CHECK((est.C_hat * est.B_hat)(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
    }

    SUBCASE("exact recovery for n <= 4") {
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            const int n = 1 + static_cast<int>(seed % 4);
            const auto model = test::well_conditioned_diag_model(n, 2, 2, 300 + seed);
            const int K1 = n + 1;
            const int K2 = n + 1;
            const auto est = estimators::ho_kalman(lti::markov_sequence(model, K1 + K2 - 1), n, K1, K2);
            CHECK(spectrum_gap(est.A_hat, model.A) <= 1e-7);
        }
    }

    SUBCASE("over-estimated order warns instead of failing") {
        const auto model = test::well_conditioned_diag_model(1, 1, 1, 2);
        const auto est = estimators::ho_kalman(lti::markov_sequence(model, 5), 2, 3, 3);
        CHECK_FALSE(est.warnings.empty());
        CHECK(est.ill_conditioned());
    }

    SUBCASE("window checks") {
        const auto seq = lti::markov_sequence(test::well_conditioned_diag_model(2, 1, 1, 2), 6);
        CHECK_THROWS_AS(estimators::ho_kalman(seq, 2, 3, 1), Error);
        CHECK_THROWS_AS(estimators::ho_kalman(seq, 3, 2, 3), Error);
        CHECK_THROWS_AS(estimators::ho_kalman(seq, 2, 4, 4), Error);
    }
}

TEST_CASE("perturbation bound check") {
    const auto model = test::well_conditioned_diag_model(2, 1, 1, 17);
    const auto exact = lti::markov_sequence(model, 5);
    const auto est = estimators::ho_kalman(exact, 2, 3, 3);
    const auto reference = est.as_model();
    const auto H = lti::build_hankel(exact, 3, 3);
    const Matrix L = matkit::truncated_svd(H.H_minus, 2).reconstruct();
    const double sigma_n = matkit::singular_values(H.H_minus)(1);

    SUBCASE("zero perturbation") {
        const auto r = estimators::hokalman_perturbation_check(H, L, L, est, reference);
        CHECK(r.precondition_holds);
        CHECK(r.perturbation == 0.0);
        CHECK(r.O.bound == 0.0);
        CHECK(r.Q.bound == 0.0);
        CHECK(r.O.achieved <= 1e-12);
        CHECK(r.Q.achieved <= 1e-12);
        CHECK(r.A.bound == 0.0);
        CHECK(r.all_satisfied());
    }

    SUBCASE("precondition boundary is inclusive") {
        const Matrix zero = Matrix::Zero(L.rows(), L.cols());
        Matrix edge = zero;
        edge(0, 0) = sigma_n / 2.0;
        CHECK(estimators::hokalman_perturbation_check(H, zero, edge, est, reference).precondition_holds);
        edge(0, 0) = std::nextafter(sigma_n / 2.0, 1.0);
        CHECK_FALSE(estimators::hokalman_perturbation_check(H, zero, edge, est, reference).precondition_holds);
    }

    SUBCASE("random perturbations satisfy every bound") {
        for (std::uint64_t seed = 0; seed < 100; ++seed) {
            const auto inst = test::perturbation_instance(seed);
            CHECK(inst.report.precondition_holds);
            CHECK(inst.report.all_satisfied());
        }
    }
}

TEST_CASE("moesp") {
    SUBCASE("noiseless two-pole system") {
        const auto model = lti::noiseless(test::well_conditioned_diag_model(2, 1, 1, 21));
        const auto data = lti::make_dataset(model, 1, 43, lti::InputKind::GaussianUnit, 3);
        const auto est = estimators::moesp(data, 2, 4, 40);
        CHECK(spectrum_gap(est.A_hat, model.A) <= 1e-6);
        CHECK(est.C_hat == est.O_hat.topRows(1));
        // The B-step reproduces the Markov parameters.
        const auto a = lti::markov_sequence(est.as_model(), 6);
        const auto b = lti::markov_sequence(model, 6);
        for (int k = 0; k < 6; ++k) {
            CHECK((a.blocks[k] - b.blocks[k]).norm() <= 1e-6);
        }
    }

    SUBCASE("shift identity of the true observability matrix") {
        const auto model = test::well_conditioned_diag_model(3, 2, 2, 4);
        const Matrix O = lti::build_obsv_ctrb(model, 4, 1).O;
        CHECK((O.topRows(6) * model.A - O.bottomRows(6)).norm() <= 1e-10);
    }

    SUBCASE("agrees with Ho-Kalman on noiseless well-conditioned systems") {
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            const int n = 1 + static_cast<int>(seed % 3);
            const auto model = lti::noiseless(test::well_conditioned_diag_model(n, 2, 2, 700 + seed));
            const auto hk = estimators::ho_kalman(lti::markov_sequence(model, 2 * n + 1), n, n + 1, n + 1);
            REQUIRE(hk.singular_values_used(n - 1) >= 1e-3);
            const auto data = lti::make_dataset(model, 4, 30, lti::InputKind::GaussianUnit, seed);
            const auto mo = estimators::moesp(data, n, n + 2, 25);
            CHECK(lti::hausdorff(matkit::spectrum(hk.A_hat), matkit::spectrum(mo.A_hat)) <= 1e-5);
        }
    }

    SUBCASE("too high an order is an order deficiency") {
        const auto model = lti::noiseless(test::well_conditioned_diag_model(1, 1, 1, 6));
        const auto data = lti::make_dataset(model, 1, 40, lti::InputKind::GaussianUnit, 1);
        try {
            estimators::moesp(data, 2, 4, 30);
            FAIL("expected an order-deficiency error");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::OrderDeficiency);
        }
    }

    SUBCASE("window preconditions") {
        const auto model = lti::noiseless(test::well_conditioned_diag_model(2, 1, 1, 6));
        const auto data = lti::make_dataset(model, 1, 20, lti::InputKind::GaussianUnit, 1);
        CHECK_THROWS_AS(estimators::moesp(data, 2, 2, 10), Error);  // K1 < ceil(n/m) + 1
        CHECK_THROWS_AS(estimators::moesp(data, 2, 4, 18), Error);  // K1 + K2 - 1 > K
        CHECK_THROWS_AS(estimators::moesp(data, 2, 10, 3), Error);  // too few columns
    }
}

TEST_CASE("align_realization") {
    const auto model = test::well_conditioned_diag_model(3, 2, 2, 31);
    auto as_estimate = [](const lti::StateSpaceModel& m, int K1) {
        estimators::RealizationEstimate est;
        est.A_hat = m.A;
        est.B_hat = m.B;
        est.C_hat = m.C;
        est.K1 = K1;
        return est;
    };

    SUBCASE("identity") {
        const auto r = estimators::align_realization(as_estimate(model, 3), model);
        CHECK((r.unitary - Matrix::Identity(3, 3)).norm() <= 1e-10);
        CHECK(r.err_A <= 1e-12);
        CHECK(r.err_B <= 1e-12);
        CHECK(r.err_C <= 1e-12);
        CHECK(r.spectrum_distance <= 1e-12);
    }

    SUBCASE("orthogonal similarity is undone") {
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            const Matrix T = test::random_orthogonal(3, 50 + seed);
            const auto r = estimators::align_realization(as_estimate(test::transformed(model, T), 3), model);
            CHECK(r.err_A <= 1e-9);
            CHECK(r.err_B <= 1e-9);
            CHECK(r.err_C <= 1e-9);
        }
    }

    SUBCASE("spectrum distance ignores any similarity") {
        const Matrix T = random_matrix(3, 3, 8) + 3.0 * Matrix::Identity(3, 3);
        const auto r = estimators::align_realization(as_estimate(test::transformed(model, T), 3), model);
        CHECK(r.spectrum_distance <= 1e-10);
    }
}
