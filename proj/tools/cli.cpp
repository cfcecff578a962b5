#include "cli.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "mimoid/bounds.hpp"
#include "mimoid/error.hpp"
#include "mimoid/estimators.hpp"
#include "mimoid/experiments.hpp"
#include "mimoid/fisher.hpp"
#include "mimoid/heatbench.hpp"
#include "mimoid/model_io.hpp"

namespace mimoid::cli {

namespace fs = std::filesystem;
using nlohmann::json;

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> values;
    std::stringstream ss(text);
    std::string item;
    auto to_int = [&](const std::string& s) {
        std::size_t used = 0;
        int v = 0;
        try {
            v = std::stoi(s, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != s.size()) {
            throw Error(ErrorKind::Config, "bad integer '" + s + "' in list '" + text + "'");
        }
        return v;
    };
    while (std::getline(ss, item, ',')) {
        if (item.empty()) {
            continue;
        }
        const auto dots = item.find("..");
        if (dots == std::string::npos) {
            values.push_back(to_int(item));
            continue;
        }
        const int lo = to_int(item.substr(0, dots));
        const int hi = to_int(item.substr(dots + 2));
        if (hi < lo) {
            throw Error(ErrorKind::Config, "empty range '" + item + "'");
        }
        for (int v = lo; v <= hi; ++v) {
            values.push_back(v);
        }
    }
    if (values.empty()) {
        throw Error(ErrorKind::Config, "empty list '" + text + "'");
    }
    return values;
}

namespace {

struct Options {
    // shared
    std::string config;
    std::string out = "out";
    std::uint64_t seed = kDefaultSeed;
    unsigned workers = 1;
    // model and data
    std::string model;
    std::string data;
    std::string reference;
    int N = 10;
    int K = 20;
    std::string inputs = "gaussian-unit";
    // identify
    std::string algo = "ho-kalman";
    int order = 0;
    int T = 0;
    int K1 = 0;
    int K2 = 0;
    std::string ols = "toeplitz-ls";
    // fim and bounds: K = 0 means n + 1
    int window_K = 0;
    int window_N = 1;
    bool oracle = false;
    std::string fim_inputs = "gaussian-energy";
    // bounds, complexity
    int n = 0;
    int p = 1;
    int m = 1;
    double delta_bar = 1.0;
    double epsilon = 1.0;
    std::string regime = "many-short";
    std::uint64_t cap = 1'000'000;
    // sweep
    std::string which = "hankel-sv";
    std::string n_values = "2..12";
    int trials = 200;
    // heatbench
    std::string N_list = "100,1000";
    std::string K_list = "18";
    std::string algos = "ho-kalman,moesp";
    double alpha = 0.2;
    double side_length = 3.0;
    double process_var = 1.0;
    double meas_var = 1.0;
};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string json_to_arg(const std::string& key, const json& v) {
    switch (v.type()) {
    case json::value_t::string: return v.get<std::string>();
    case json::value_t::boolean: return v.get<bool>() ? "true" : "false";
    case json::value_t::number_integer: return std::to_string(v.get<long long>());
    case json::value_t::number_unsigned: return std::to_string(v.get<unsigned long long>());
    case json::value_t::number_float: return fmt(v.get<double>());
    case json::value_t::array: {
        std::string joined;
        for (const auto& e : v) {
            if (e.is_array() || e.is_object()) {
                throw Error(ErrorKind::Config, "config key '" + key + "' must be a flat list");
            }
            joined += (joined.empty() ? "" : ",") + json_to_arg(key, e);
        }
        return joined;
    }
    default: throw Error(ErrorKind::Config, "config key '" + key + "' has an unsupported value type");
    }
}

json arg_to_json(const std::string& s) {
    if (s.empty()) {
        return s;
    }
    char* end = nullptr;
    const long long i = std::strtoll(s.c_str(), &end, 10);
    if (*end == '\0' && s.find_first_not_of("-0123456789") == std::string::npos) {
        if (s[0] != '-' && std::to_string(i) != s) {
            return std::stoull(s);
        }
        return i;
    }
    const double d = std::strtod(s.c_str(), &end);
    if (*end == '\0' && std::isfinite(d)) {
        return d;
    }
    if (s == "true" || s == "false") {
        return s == "true";
    }
    return s;
}

// Fill options the command line left unset from a JSON config. A run-meta.json
// is accepted as well: its "config" object is used.
void apply_config(CLI::App& sub, const std::string& path) {
    json j = io::read_json_file(path);
    if (!j.is_object()) {
        throw Error(ErrorKind::Config, path + ": config must be a JSON object");
    }
    if (j.contains("command") && j.contains("config")) {
        for (const auto& [key, _] : j.items()) {
            static const std::vector<std::string> meta = {"command", "config",     "seed",
                                                          "version", "started_at", "duration_ms"};
            if (std::find(meta.begin(), meta.end(), key) == meta.end()) {
                throw Error(ErrorKind::Config, path + ": unknown run-meta key '" + key + "'");
            }
        }
        if (j["command"] != sub.get_name()) {
            throw Error(ErrorKind::Config, path + ": recorded command '" + json_to_arg("command", j["command"]) +
                                               "' does not match '" + sub.get_name() + "'");
        }
        j = j["config"];
        if (!j.is_object()) {
            throw Error(ErrorKind::Config, path + ": 'config' must be an object");
        }
    }
    for (const auto& [key, value] : j.items()) {
        CLI::Option* opt = key == "config" ? nullptr : sub.get_option_no_throw("--" + key);
        if (opt == nullptr) {
            throw Error(ErrorKind::Config, path + ": unknown key '" + key + "' for command '" + sub.get_name() + "'");
        }
        if (opt->count() > 0) {
            continue; // command-line flags win
        }
        opt->add_result(json_to_arg(key, value));
        try {
            opt->run_callback();
        } catch (const CLI::ParseError& e) {
            throw Error(ErrorKind::Config, path + ": key '" + key + "': " + e.what());
        }
    }
}

json resolved_config(const CLI::App& sub) {
    json config = json::object();
    for (const CLI::Option* opt : sub.get_options()) {
        if (opt->get_lnames().empty()) {
            continue;
        }
        const std::string key = opt->get_lnames().front();
        if (key == "help" || key == "config") {
            continue;
        }
        const std::string value = opt->count() > 0 ? opt->results().back() : opt->get_default_str();
        config[key] = arg_to_json(value);
    }
    return config;
}

std::string utc_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw Error(ErrorKind::Config, "cannot write " + path.string());
    }
    f << text;
}

lti::InputKind parse_input_kind(const std::string& s) {
    if (s == "gaussian-unit") {
        return lti::InputKind::GaussianUnit;
    }
    if (s == "gaussian-energy") {
        return lti::InputKind::GaussianEnergyNormalized;
    }
    if (s == "impulse") {
        return lti::InputKind::Impulse;
    }
    throw Error(ErrorKind::Config, "unknown input kind '" + s + "' (gaussian-unit, gaussian-energy, impulse)");
}

estimators::Method parse_method(const std::string& s) {
    if (s == "ho-kalman") {
        return estimators::Method::HoKalman;
    }
    if (s == "moesp") {
        return estimators::Method::Moesp;
    }
    throw Error(ErrorKind::Config, "unknown algorithm '" + s + "' (ho-kalman, moesp)");
}

void require(bool ok, const std::string& what) {
    if (!ok) {
        throw Error(ErrorKind::Config, what);
    }
}

json cmd_simulate(const Options& o, const fs::path& out, std::ostream& log) {
    require(!o.model.empty(), "simulate needs --model");
    const auto model = io::model_from_json(io::read_json_file(o.model));
    const auto data = lti::make_dataset(model, o.N, o.K, parse_input_kind(o.inputs), o.seed, o.workers);
    io::write_json_file((out / "dataset.json").string(), io::dataset_to_json(data));
    log << "wrote " << data.size() << " trajectories of length " << data.length() << " to "
        << (out / "dataset.json").string() << '\n';
    return {};
}

json cmd_identify(const Options& o, const fs::path& out, std::ostream& log) {
    require(!o.data.empty(), "identify needs --data");
    require(o.order >= 1, "identify needs --order >= 1");
    const auto data = io::dataset_from_json(io::read_json_file(o.data));
    const auto method = parse_method(o.algo);
    estimators::RealizationEstimate est;
    if (method == estimators::Method::HoKalman) {
        auto w = heatbench::hokalman_window(o.T > 0 ? o.T : data.length());
        w.K1 = o.K1 > 0 ? o.K1 : w.K1;
        w.K2 = o.K2 > 0 ? o.K2 : w.K2;
        const auto mode = o.ols == "last-step-ls" ? estimators::OlsMode::LastStepLs : estimators::OlsMode::ToeplitzLs;
        require(o.ols == "toeplitz-ls" || o.ols == "last-step-ls", "unknown --ols '" + o.ols + "'");
        est = estimators::ho_kalman(estimators::estimate_markov_ols(data, w.T, mode), o.order, w.K1, w.K2);
    } else {
        const int m = static_cast<int>(data.trajectories.front().outputs.rows());
        auto w = heatbench::moesp_window(data.length(), o.order, m);
        w.K1 = o.K1 > 0 ? o.K1 : w.K1;
        w.K2 = o.K2 > 0 ? o.K2 : data.length() - w.K1 + 1;
        est = estimators::moesp(data, o.order, w.K1, w.K2);
    }
    json j;
    j["method"] = std::string(estimators::to_string(est.method));
    j["K1"] = est.K1;
    j["K2"] = est.K2;
    j["A"] = io::matrix_to_json(est.A_hat);
    j["B"] = io::matrix_to_json(est.B_hat);
    j["C"] = io::matrix_to_json(est.C_hat);
    j["singular_values"] = std::vector<double>(est.singular_values_used.begin(), est.singular_values_used.end());
    j["warnings"] = est.warnings;
    json poles = json::array();
    for (const auto& z : matkit::spectrum(est.A_hat)) {
        poles.push_back({z.real(), z.imag()});
    }
    j["poles"] = poles;
    if (!o.reference.empty()) {
        const auto ref = io::model_from_json(io::read_json_file(o.reference));
        const auto a = estimators::align_realization(est, ref);
        j["alignment"] = {{"err_A", a.err_A}, {"err_B", a.err_B}, {"err_C", a.err_C}, {"hausdorff", a.spectrum_distance}};
        log << "hausdorff distance to reference spectrum: " << fmt(a.spectrum_distance) << '\n';
    }
    for (const auto& w : est.warnings) {
        log << "warning: " << w << '\n';
    }
    io::write_json_file((out / "estimate.json").string(), j);
    log << "wrote " << (out / "estimate.json").string() << '\n';
    return {};
}

json cmd_fim(const Options& o, const fs::path& out, std::ostream& log) {
    require(!o.model.empty(), "fim needs --model");
    const auto model = io::model_from_json(io::read_json_file(o.model));
    const int K = o.window_K > 0 ? o.window_K : model.n() + 1;
    std::vector<Matrix> inputs;
    for (int l = 0; l < o.window_N; ++l) {
        inputs.push_back(lti::gen_inputs(parse_input_kind(o.fim_inputs), model.p(), K, derive_seed(o.seed, l)));
    }
    const auto report = fisher::fim(model, inputs, o.workers);
    json j;
    j["I"] = io::matrix_to_json(report.I);
    j["lambda_min"] = report.lambda_min;
    j["sigma_min_V"] = report.sigma_min_V;
    j["lambda_min_via_sv"] = fisher::min_eig_via_sv(model, inputs);
    j["lambda_min_bound"] = report.lambda_min_bound ? json(*report.lambda_min_bound) : json(nullptr);
    j["sigma_min_V_bound"] = report.sigma_min_V_bound ? json(*report.sigma_min_V_bound) : json(nullptr);
    if (o.oracle) {
        const Matrix I_fd = fisher::fim_oracle(model, inputs);
        j["oracle_relative_error"] = (report.I - I_fd).norm() / std::max(I_fd.norm(), kMachineEps);
    }
    io::write_json_file((out / "fim.json").string(), j);
    log << "lambda_min(I) = " << fmt(report.lambda_min);
    if (report.lambda_min_bound) {
        log << "  bound = " << fmt(*report.lambda_min_bound);
    }
    log << '\n';
    return {};
}

json cmd_bounds(const Options& o, const fs::path& out, std::ostream& log) {
    require(o.n >= 1, "bounds needs --n >= 1");
    const int K1 = o.K1 > 0 ? o.K1 : (o.n + o.m - 1) / o.m;
    const int K2 = o.K2 > 0 ? o.K2 : (o.n + o.p - 1) / o.p;
    const int K = o.window_K > 0 ? o.window_K : o.n + 1;
    json j;
    const auto cond = bounds::cond_lower_bounds(o.n, o.m, o.p, K1, K2);
    j["cond_O_lower"] = cond.O;
    j["cond_Q_lower"] = cond.Q;
    j["hankel_sigma_n_upper"] = bounds::hankel_sigma_n_bound(o.n, o.m, o.p, K1, K2, o.delta_bar);
    if (K1 > 1) {
        j["hankel_minus_sigma_n_upper"] =
            bounds::hankel_sigma_n_bound(o.n, o.m, o.p, K1, K2, o.delta_bar, bounds::HankelVariant::Minus);
    }
    j["sigma_min_V_upper"] = fisher::sigma_min_V_bound(o.n, o.p, o.m, K, o.delta_bar);
    j["fim_min_eig_upper"] = fisher::fim_min_eig_bound(o.n, o.p, o.m, o.window_N, K, o.delta_bar);
    j["crb_floor"] = fisher::crb_floor(o.n, o.p, o.m, o.window_N, K, o.delta_bar);
    j["windows"] = {{"K1", K1}, {"K2", K2}, {"K", K}, {"N", o.window_N}};
    io::write_json_file((out / "bounds.json").string(), j);
    for (const auto& [key, value] : j.items()) {
        if (value.is_number()) {
            log << key << " = " << fmt(value.get<double>()) << '\n';
        }
    }
    return {};
}

json cmd_sweep(const Options& o, const fs::path& out, std::ostream& log) {
    experiments::SweepConfig cfg;
    cfg.n_values = parse_int_list(o.n_values);
    cfg.trials = o.trials;
    cfg.p = o.p;
    cfg.m = o.m;
    cfg.seed = o.seed;
    cfg.which = experiments::parse_sweep_kind(o.which);
    cfg.workers = o.workers;
    const auto rows = experiments::sweep(cfg);
    std::size_t violations = 0;
    for (const auto& r : rows) {
        violations += experiments::row_satisfied(r) ? 0 : 1;
    }
    const auto path = out / ("sweep-" + o.which + ".csv");
    write_text(path, experiments::sweep_csv(rows));
    log << "wrote " << rows.size() << " rows to " << path.string() << " (" << violations << " bound violations)\n";
    return {{"rows", rows.size()}, {"violations", violations}};
}

json cmd_heatbench(const Options& o, const fs::path& out, std::ostream& log) {
    heatbench::HeatConfig cfg;
    cfg.alpha = o.alpha;
    cfg.side_length = o.side_length;
    cfg.process_noise_var = o.process_var;
    cfg.meas_noise_var = o.meas_var;
    std::vector<estimators::Method> algos;
    std::stringstream ss(o.algos);
    for (std::string a; std::getline(ss, a, ',');) {
        algos.push_back(parse_method(a));
    }
    require(!algos.empty(), "heatbench needs at least one --algo");
    const auto result =
        heatbench::run_heat_experiment(cfg, parse_int_list(o.N_list), parse_int_list(o.K_list), algos, o.seed, o.workers);
    write_text(out / "heat-results.csv", heatbench::rows_csv(result.rows));
    write_text(out / "heat-poles.csv", heatbench::poles_csv(result.poles));
    const auto& md = result.metadata;
    json meta = {{"full_order", md.full_order},
                 {"minimal_order", md.minimal_order},
                 {"minimal_spectral_radius", md.minimal_spectral_radius},
                 {"minimal_poles", md.minimal_poles},
                 {"target_order", md.target_order},
                 {"target_spectral_radius", md.target_spectral_radius},
                 {"meets_targets", md.meets_targets()},
                 {"discretization", md.discretization}};
    io::write_json_file((out / "heat-meta.json").string(), meta);
    log << "minimal order " << md.minimal_order << " (target " << md.target_order << "), spectral radius "
        << fmt(md.minimal_spectral_radius) << " (target " << md.target_spectral_radius << ")\n";
    for (const auto& r : result.rows) {
        log << estimators::to_string(r.algo) << " N=" << r.N << " K=" << r.K << " hausdorff=" << fmt(r.hausdorff)
            << '\n';
    }
    return meta;
}

json cmd_complexity(const Options& o, const fs::path& out, std::ostream& log) {
    require(o.n >= 1, "complexity needs --n >= 1");
    fisher::Regime regime;
    if (o.regime == "many-short") {
        regime = fisher::Regime::ManyShort;
    } else if (o.regime == "one-long") {
        regime = fisher::Regime::OneLong;
    } else {
        throw Error(ErrorKind::Config, "unknown regime '" + o.regime + "' (many-short, one-long)");
    }
    const auto sc = fisher::sample_complexity(o.n, o.p, o.m, o.delta_bar, o.epsilon, regime, o.cap);
    json j = {{"regime", o.regime}, {"N", sc.N}, {"K", sc.K}, {"count", sc.count},
              {"asymptotic", std::isnan(sc.asymptotic) ? json(nullptr) : json(sc.asymptotic)}};
    io::write_json_file((out / "complexity.json").string(), j);
    log << (regime == fisher::Regime::ManyShort ? "N" : "K") << " = " << sc.count << "    asymptotic form = "
        << (std::isnan(sc.asymptotic) ? std::string("undefined (n <= m)") : fmt(sc.asymptotic)) << '\n';
    return {};
}

void add_common(CLI::App* sub, Options& o) {
    sub->add_option("--config", o.config, "JSON file with option values (flags win)");
    sub->add_option("--out", o.out, "output directory")->capture_default_str();
    sub->add_option("--seed", o.seed, "top-level random seed")->capture_default_str();
    sub->add_option("--workers", o.workers, "worker threads")->capture_default_str();
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"MIMO system identification and ill-conditioning bounds"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    auto* simulate = app.add_subcommand("simulate", "simulate trajectories of a model");
    add_common(simulate, o);
    simulate->add_option("--model", o.model, "model JSON");
    simulate->add_option("--N", o.N, "number of trajectories")->capture_default_str();
    simulate->add_option("--K", o.K, "trajectory length")->capture_default_str();
    simulate->add_option("--inputs", o.inputs, "gaussian-unit | gaussian-energy | impulse")->capture_default_str();

    auto* identify = app.add_subcommand("identify", "identify a realization from a dataset");
    add_common(identify, o);
    identify->add_option("--data", o.data, "dataset JSON");
    identify->add_option("--algo", o.algo, "ho-kalman | moesp")->capture_default_str();
    identify->add_option("--order", o.order, "model order n")->capture_default_str();
    identify->add_option("--T", o.T, "Markov blocks to estimate (0: trajectory length)")->capture_default_str();
    identify->add_option("--K1", o.K1, "Hankel block rows (0: automatic)")->capture_default_str();
    identify->add_option("--K2", o.K2, "Hankel block columns (0: automatic)")->capture_default_str();
    identify->add_option("--ols", o.ols, "toeplitz-ls | last-step-ls")->capture_default_str();
    identify->add_option("--reference", o.reference, "true model JSON for error reporting");

    auto* fim = app.add_subcommand("fim", "Fisher information of the poles");
    add_common(fim, o);
    fim->add_option("--model", o.model, "diagonal model JSON");
    fim->add_option("--N", o.window_N, "number of trajectories")->capture_default_str();
    fim->add_option("--K", o.window_K, "trajectory length (0: n + 1)")->capture_default_str();
    fim->add_option("--inputs", o.fim_inputs, "gaussian-unit | gaussian-energy | impulse")->capture_default_str();
    fim->add_option("--oracle", o.oracle, "also compare with finite differences")->capture_default_str();

    auto* bnds = app.add_subcommand("bounds", "evaluate the closed-form bounds");
    add_common(bnds, o);
    bnds->add_option("--n", o.n, "state dimension")->capture_default_str();
    bnds->add_option("--m", o.m, "outputs")->capture_default_str();
    bnds->add_option("--p", o.p, "inputs")->capture_default_str();
    bnds->add_option("--K1", o.K1, "block rows (0: ceil(n/m))")->capture_default_str();
    bnds->add_option("--K2", o.K2, "block columns (0: ceil(n/p))")->capture_default_str();
    bnds->add_option("--K", o.window_K, "trajectory length (0: n + 1)")->capture_default_str();
    bnds->add_option("--N", o.window_N, "number of trajectories")->capture_default_str();
    bnds->add_option("--delta-bar", o.delta_bar, "max|B| * max|C|")->capture_default_str();

    auto* sweep = app.add_subcommand("sweep", "randomized bound-validity sweep");
    add_common(sweep, o);
    sweep->add_option("--which", o.which, "hankel-sv | cond-O | cond-Q | fim-min-eig")->capture_default_str();
    sweep->add_option("--n", o.n_values, "state dimensions, e.g. 2..12")->capture_default_str();
    sweep->add_option("--trials", o.trials, "trials per n")->capture_default_str();
    sweep->add_option("--p", o.p, "inputs")->capture_default_str();
    sweep->add_option("--m", o.m, "outputs")->capture_default_str();

    auto* heat = app.add_subcommand("heatbench", "heat-conduction identification benchmark");
    add_common(heat, o);
    heat->add_option("--N", o.N_list, "trajectory counts, e.g. 100,1000")->capture_default_str();
    heat->add_option("--K", o.K_list, "trajectory lengths, e.g. 10..20")->capture_default_str();
    heat->add_option("--algo", o.algos, "ho-kalman,moesp")->capture_default_str();
    heat->add_option("--alpha", o.alpha, "thermal diffusivity")->capture_default_str();
    heat->add_option("--side-length", o.side_length, "plate side length")->capture_default_str();
    heat->add_option("--process-var", o.process_var, "process noise variance")->capture_default_str();
    heat->add_option("--meas-var", o.meas_var, "measurement noise variance")->capture_default_str();

    auto* complexity = app.add_subcommand("complexity", "samples needed to push the CRB floor below epsilon");
    add_common(complexity, o);
    complexity->add_option("--n", o.n, "state dimension")->capture_default_str();
    complexity->add_option("--p", o.p, "inputs")->capture_default_str();
    complexity->add_option("--m", o.m, "outputs")->capture_default_str();
    complexity->add_option("--delta-bar", o.delta_bar, "max|B| * max|C|")->capture_default_str();
    complexity->add_option("--epsilon", o.epsilon, "target floor")->capture_default_str();
    complexity->add_option("--regime", o.regime, "many-short | one-long")->capture_default_str();
    complexity->add_option("--cap", o.cap, "search cap on K for one-long")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 1;
    }

    CLI::App* sub = app.get_subcommands().front();
    const auto started = std::chrono::steady_clock::now();
    const std::string started_at = utc_now();
    try {
        if (!o.config.empty()) {
            apply_config(*sub, o.config);
        }
        const fs::path out_dir = o.out;
        fs::create_directories(out_dir);

        const std::string name = sub->get_name();
        json summary;
        if (name == "simulate") {
            summary = cmd_simulate(o, out_dir, out);
        } else if (name == "identify") {
            summary = cmd_identify(o, out_dir, out);
        } else if (name == "fim") {
            summary = cmd_fim(o, out_dir, out);
        } else if (name == "bounds") {
            summary = cmd_bounds(o, out_dir, out);
        } else if (name == "sweep") {
            summary = cmd_sweep(o, out_dir, out);
        } else if (name == "heatbench") {
            summary = cmd_heatbench(o, out_dir, out);
        } else {
            summary = cmd_complexity(o, out_dir, out);
        }

        const auto elapsed =
            std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - started);
        json meta = {{"command", name},       {"config", resolved_config(*sub)},  {"seed", o.seed},
                     {"version", kVersion},   {"started_at", started_at},         {"duration_ms", elapsed.count()}};
        io::write_json_file((out_dir / "run-meta.json").string(), meta);
        return 0;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const json::exception& e) {
        err << "error: bad JSON content: " << e.what() << '\n';
        return 1;
    } catch (const fs::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return 2;
    }
}

} // namespace mimoid::cli
