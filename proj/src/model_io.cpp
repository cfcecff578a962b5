#include "mimoid/model_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "mimoid/error.hpp"

namespace mimoid::io {

using nlohmann::json;

json matrix_to_json(const Matrix& M) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < M.cols(); ++j) {
            row.push_back(M(i, j));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

Matrix matrix_from_json(const json& j, const char* name) {
    if (!j.is_array()) {
        throw Error(ErrorKind::Config, std::string(name) + " must be an array of rows");
    }
    const auto rows = static_cast<Eigen::Index>(j.size());
    const auto cols = rows == 0 ? 0 : static_cast<Eigen::Index>(j.front().size());
    Matrix M(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        const auto& row = j[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
            throw Error(ErrorKind::Config, std::string(name) + " has ragged rows");
        }
        for (Eigen::Index c = 0; c < cols; ++c) {
            const auto& v = row[static_cast<std::size_t>(c)];
            if (!v.is_number()) {
                throw Error(ErrorKind::Config, std::string(name) + " has a non-numeric entry");
            }
            M(i, c) = v.get<double>();
        }
    }
    return M;
}

namespace {

void reject_unknown(const json& j, const std::set<std::string>& allowed, const char* what) {
    if (!j.is_object()) {
        throw Error(ErrorKind::Config, std::string(what) + " must be a JSON object");
    }
    for (const auto& [key, _] : j.items()) {
        if (!allowed.count(key)) {
            throw Error(ErrorKind::Config, std::string("unknown key '") + key + "' in " + what);
        }
    }
}

} // namespace

json model_to_json(const lti::StateSpaceModel& model) {
    return json{{"A", matrix_to_json(model.A)},           {"B", matrix_to_json(model.B)},
                {"C", matrix_to_json(model.C)},           {"Q", matrix_to_json(model.process_cov)},
                {"R", matrix_to_json(model.meas_cov)},    {"diagonal", model.diagonal}};
}

lti::StateSpaceModel model_from_json(const json& j) {
    reject_unknown(j, {"A", "B", "C", "Q", "R", "diagonal"}, "model");
    for (const char* key : {"A", "B", "C"}) {
        if (!j.contains(key)) {
            throw Error(ErrorKind::Config, std::string("model is missing '") + key + "'");
        }
    }
    lti::StateSpaceModel model;
    model.A = matrix_from_json(j.at("A"), "A");
    model.B = matrix_from_json(j.at("B"), "B");
    model.C = matrix_from_json(j.at("C"), "C");
    model.process_cov = j.contains("Q") ? matrix_from_json(j.at("Q"), "Q") : Matrix::Zero(model.A.rows(), model.A.rows());
    model.meas_cov = j.contains("R") ? matrix_from_json(j.at("R"), "R") : Matrix::Identity(model.C.rows(), model.C.rows());
    model.diagonal = j.value("diagonal", false);
    model.validate();
    return model;
}

json dataset_to_json(const lti::Dataset& data) {
    json trajs = json::array();
    for (const auto& t : data.trajectories) {
        trajs.push_back(json{{"seed", t.seed},
                             {"energy_constrained", t.energy_constrained},
                             {"inputs", matrix_to_json(t.inputs)},
                             {"outputs", matrix_to_json(t.outputs)}});
    }
    return json{{"master_seed", data.master_seed}, {"trajectories", std::move(trajs)}};
}

lti::Dataset dataset_from_json(const json& j) {
    reject_unknown(j, {"master_seed", "trajectories"}, "dataset");
    lti::Dataset data;
    data.master_seed = j.value("master_seed", std::uint64_t{0});
    for (const auto& t : j.at("trajectories")) {
        reject_unknown(t, {"seed", "energy_constrained", "inputs", "outputs"}, "trajectory");
        lti::Trajectory traj;
        traj.seed = t.value("seed", std::uint64_t{0});
        traj.energy_constrained = t.value("energy_constrained", false);
        traj.inputs = matrix_from_json(t.at("inputs"), "inputs");
        traj.outputs = matrix_from_json(t.at("outputs"), "outputs");
        traj.energy = traj.inputs.squaredNorm();
        data.trajectories.push_back(std::move(traj));
    }
    data.validate();
    return data;
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorKind::Config, "cannot open '" + path + "'");
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string text = buffer.str();
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        // Translate the byte offset into a line/column pair.
        std::size_t line = 1;
        std::size_t column = 1;
        const std::size_t stop = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
        for (std::size_t i = 0; i < stop; ++i) {
            if (text[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        throw Error(ErrorKind::Config, path + ":" + std::to_string(line) + ":" + std::to_string(column) +
                                           ": malformed JSON");
    }
}

void write_json_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) {
        throw Error(ErrorKind::Config, "cannot write '" + path + "'");
    }
    out << j.dump(2) << '\n';
}

} // namespace mimoid::io
