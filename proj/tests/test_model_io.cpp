#include "doctest.h"
#include "helpers.hpp"
#include "mimoid/error.hpp"
#include "mimoid/model_io.hpp"

#include <filesystem>
#include <fstream>

using namespace mimoid;

TEST_CASE("model json round trip") {
    auto model = test::well_conditioned_diag_model(3, 2, 2, 4);
    model.process_cov = 0.3 * Matrix::Identity(3, 3);
    const auto back = io::model_from_json(io::model_to_json(model));
    CHECK(back.A == model.A);
    CHECK(back.B == model.B);
    CHECK(back.C == model.C);
    CHECK(back.process_cov == model.process_cov);
    CHECK(back.meas_cov == model.meas_cov);
    CHECK(back.diagonal);
}

TEST_CASE("model json defaults and rejection") {
    const auto j = nlohmann::json::parse(R"({"A": [[0.5]], "B": [[1]], "C": [[2]]})");
    const auto model = io::model_from_json(j);
    CHECK(model.process_cov(0, 0) == 0.0);
    CHECK(model.meas_cov(0, 0) == 1.0);
    CHECK_FALSE(model.diagonal);

    auto bad = j;
    bad["D"] = nlohmann::json::array({nlohmann::json::array({0.0})});
    CHECK_THROWS_AS(io::model_from_json(bad), Error);

    auto ragged = nlohmann::json::parse(R"({"A": [[0.5, 1], [1]], "B": [[1], [1]], "C": [[2, 1]]})");
    CHECK_THROWS_AS(io::model_from_json(ragged), Error);
}

TEST_CASE("dataset json round trip") {
    const auto model = test::well_conditioned_diag_model(2, 1, 1, 8);
    const auto data = lti::make_dataset(model, 3, 5, lti::InputKind::GaussianUnit, 42);
    const auto back = io::dataset_from_json(io::dataset_to_json(data));
    REQUIRE(back.size() == 3);
    CHECK(back.master_seed == 42);
    for (int l = 0; l < 3; ++l) {
        CHECK(back.trajectories[l].inputs == data.trajectories[l].inputs);
        CHECK(back.trajectories[l].outputs == data.trajectories[l].outputs);
        CHECK(back.trajectories[l].seed == data.trajectories[l].seed);
    }
}

TEST_CASE("malformed json file reports line and column") {
    const auto path = std::filesystem::temp_directory_path() / "mimoid_bad.json";
    {
        std::ofstream f(path);
        f << "{\n  \"A\": [[1]],\n  oops\n}\n";
    }
    try {
        io::read_json_file(path.string());
        FAIL("expected a config error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Config);
        CHECK(std::string(e.what()).find(":3:") != std::string::npos);
    }
    std::filesystem::remove(path);
}
