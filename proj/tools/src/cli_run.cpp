#include "cli_run.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <vector>

#include "confham/catalog.hpp"
#include "confham/dynamics.hpp"
#include "confham/hamiltonian.hpp"
#include "confham/jsonl.hpp"
#include "confham/observables.hpp"
#include "confham/probes.hpp"
#include "confham/quantum.hpp"
#include "confham/rng.hpp"
#include "confham/svg.hpp"

namespace confham {
namespace cli {

namespace {

double opt_num(const RunConfig& cfg, const std::string& key, double fallback) {
    if (!cfg.options.contains(key)) return fallback;
    if (!cfg.options[key].is_number())
        throw ConfigError("config: option \"" + key + "\" must be a number");
    return cfg.options[key].get<double>();
}

long opt_int(const RunConfig& cfg, const std::string& key, long fallback) {
    if (!cfg.options.contains(key)) return fallback;
    if (!cfg.options[key].is_number_integer())
        throw ConfigError("config: option \"" + key + "\" must be an integer");
    return cfg.options[key].get<long>();
}

std::string opt_str(const RunConfig& cfg, const std::string& key, const std::string& fallback) {
    if (!cfg.options.contains(key)) return fallback;
    if (!cfg.options[key].is_string())
        throw ConfigError("config: option \"" + key + "\" must be a string");
    return cfg.options[key].get<std::string>();
}

PhaseState parse_state(const nlohmann::json& obj, int n) {
    if (!obj.is_object() || !obj.contains("x") || !obj.contains("p"))
        throw ConfigError("config: option \"state\" must be {\"x\":[...],\"p\":[...]}");
    PhaseState st;
    for (const char* key : {"x", "p"}) {
        const auto& arr = obj[key];
        if (!arr.is_array() || static_cast<int>(arr.size()) != n)
            throw ConfigError("config: state field \"" + std::string(key) +
                              "\" must be an array of length n");
        for (const auto& v : arr) {
            if (!v.is_number())
                throw ConfigError("config: state field \"" + std::string(key) +
                                  "\" must hold numbers");
            (key[0] == 'x' ? st.x : st.p).push_back(v.get<double>());
        }
    }
    return st;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
}

// Seeded admissible initial state; attractive members are filtered to E < 0.
PhaseState pick_initial(const ModelParams& params, Rng& rng) {
    for (int attempt = 0; attempt < 200; ++attempt) {
        PhaseState st = probes::sample_initial_condition(params, rng);
        if (!state_admissible(params, st)) continue;
        if (params.central_sign == -1 && eval_hamiltonian(params, st) >= 0.0) continue;
        return st;
    }
    throw std::domain_error("no admissible bound initial condition found after 200 draws");
}

std::vector<PhaseState> sample_points(const ModelParams& params, int count, Rng& rng) {
    std::vector<PhaseState> pts;
    while (static_cast<int>(pts.size()) < count) {
        PhaseState st = probes::sample_initial_condition(params, rng);
        for (auto& x : st.x) x = 0.5 + (x - 0.6) * 1.5;  // widen into [0.5, 2]
        if (state_admissible(params, st)) pts.push_back(std::move(st));
    }
    return pts;
}

int task_eval(const RunConfig& cfg, std::ostream& out) {
    if (!cfg.options.contains("state"))
        throw ConfigError("config: task \"eval\" needs option \"state\"");
    PhaseState st = parse_state(cfg.options["state"], cfg.model.n);
    EnergyBreakdown b = eval_breakdown(cfg.model, st);
    out << "{\"conformal_factor\":" << io::fmt_double(b.conformal_factor)
        << ",\"kinetic\":" << io::fmt_double(b.kinetic)
        << ",\"central\":" << io::fmt_double(b.central)
        << ",\"rosochatius\":" << io::fmt_double(b.rosochatius)
        << ",\"total\":" << io::fmt_double(b.total) << "}\n";
    return 0;
}

int task_integrate(const RunConfig& cfg, std::ostream& out) {
    Rng rng(cfg.seed);
    PhaseState st = cfg.options.contains("state") ? parse_state(cfg.options["state"], cfg.model.n)
                                                  : pick_initial(cfg.model, rng);
    double t_max = opt_num(cfg, "t_max", 10.0);
    double step = opt_num(cfg, "step", 1e-3);
    std::string method = opt_str(cfg, "method", "midpoint");

    auto traj = dynamics::integrate(cfg.model, st, t_max, step, method);

    std::ofstream jsonl(cfg.output / "trajectory.jsonl", std::ios::binary);
    if (!jsonl) throw std::runtime_error("cannot write trajectory.jsonl");
    io::write_trajectory_jsonl(jsonl, traj);

    if (cfg.model.n >= 2) {
        std::vector<std::pair<double, double>> pts;
        pts.reserve(traj.samples.size());
        for (const auto& s : traj.samples) pts.emplace_back(s.state.x[0], s.state.x[1]);
        write_file(cfg.output / "orbit.svg",
                   svg::polyline_plot(pts, "x_1", "x_2", "orbit projection"));
    }

    double drift = std::abs(traj.samples.back().energy - traj.samples.front().energy) /
                   std::max(std::abs(traj.samples.front().energy), 1e-30);
    out << "{\"samples\":" << traj.samples.size()
        << ",\"t_final\":" << io::fmt_double(traj.samples.back().t)
        << ",\"relative_energy_change\":" << io::fmt_double(drift) << "}\n";
    return 0;
}

struct VerifyCheck {
    std::string record;
    bool pass = false;
};

int task_verify(const RunConfig& cfg, std::ostream& out) {
    int points = static_cast<int>(opt_int(cfg, "points", 100));
    std::vector<VerifyCheck> checks;

    auto add = [&](const std::string& name, const std::string& detail, double value,
                   double tolerance) {
        VerifyCheck c;
        c.pass = value <= tolerance;
        c.record = "{\"check\":\"" + name + "\"" + detail +
                   ",\"value\":" + io::fmt_double(value) +
                   ",\"tolerance\":" + io::fmt_double(tolerance) +
                   ",\"pass\":" + (c.pass ? "true" : "false") + "}";
        checks.push_back(c);
    };

    // Reduction identities across the whole catalog.
    const std::map<std::string, std::map<std::string, double>> suite = {
        {"ttw", {{"k", 2}, {"omega", 1}, {"alpha", 0.3}, {"beta", 0.4}}},
        {"gks", {{"k", 2}, {"lambda", 1.5}, {"alpha", 0.1}, {"beta", 0.2}}},
        {"nttw", {{"n", 3}, {"k", 1.5}, {"omega", 1.1}, {"alpha", 0.2}}},
        {"ngks", {{"n", 3}, {"k", 2}, {"lambda", 2}, {"alpha", 0.1}}},
        {"sw1", {{"omega", 1.3}, {"alpha", 0.7}, {"beta", 0.4}}},
        {"sw2", {{"omega", 1.2}, {"beta", 0.8}}},
        {"rosochatius", {{"n", 3}, {"omega", 1.4}, {"alpha", 0.3}}},
        {"kepler", {{"n", 2}, {"lambda", 1}}},
        {"harmonic", {{"n", 3}, {"omega", 1.0}}},
        {"behr_curved", {{"n", 3}, {"gamma", 1.0}, {"omega", 1.1}, {"alpha", 0.05}}},
        {"rw02", {{"n", 3}, {"lambda", 1.2}, {"alpha", 0.3}}},
    };
    for (const auto& [name, bindings] : suite) {
        auto entry = catalog::instantiate_reduction(name, bindings);
        Rng rng(Rng::mix(cfg.seed, std::hash<std::string>{}(name)));
        double worst = 0.0;
        for (const auto& st : sample_points(entry.params, points, rng)) {
            double h = eval_hamiltonian(entry.params, st);
            double ref = catalog::reference_energy(entry, st);
            worst = std::max(worst, std::abs(h - ref) / std::max(std::abs(h), 1e-30));
        }
        add("reduction_identity", ",\"entry\":\"" + name + "\"", worst, 1e-12);
    }

    // Bracket suite on the configured model.
    {
        Rng rng(Rng::mix(cfg.seed, 0xb7ac4e7));
        auto pts = sample_points(cfg.model, points, rng);
        auto h = observables::hamiltonian_observable(cfg.model);
        auto x1 = observables::coordinate_observable(0);
        auto p1 = observables::momentum_observable(0);
        double worst_pair = 0.0, worst_hh = 0.0;
        for (const auto& pt : pts) {
            worst_pair = std::max(worst_pair,
                                  std::abs(observables::poisson_bracket(*x1, *p1, pt) - 1.0));
            worst_hh = std::max(worst_hh, std::abs(observables::poisson_bracket(*h, *h, pt)));
        }
        add("bracket_canonical_pair", "", worst_pair, 1e-12);
        add("bracket_h_with_h", "", worst_hh, 1e-12);

        if (cfg.model.equal_omegas() && cfg.model.n >= 2) {
            std::ofstream reports(cfg.output / "bracket_reports.jsonl", std::ios::binary);
            for (int i = 0; i < cfg.model.n; ++i) {
                for (int j = i + 1; j < cfg.model.n; ++j) {
                    auto kij = observables::angular_rosochatius_observable(i, j, cfg.model);
                    auto rep = observables::make_bracket_report(*h, *kij, pts);
                    if (reports)
                        reports << "{\"pair\":[\"" << rep.pair.first << "\",\"" << rep.pair.second
                                << "\"],\"sample_points\":" << rep.sample_points
                                << ",\"max_abs_bracket\":" << io::fmt_double(rep.max_abs_bracket)
                                << ",\"scale\":" << io::fmt_double(rep.scale) << "}\n";
                    add("bracket_conservation", ",\"pair\":\"" + rep.pair.second + "\"",
                        rep.max_abs_bracket / rep.scale, 1e-10);
                }
            }
        }
    }

    // Energy conservation along a short seeded orbit.
    {
        Rng rng(Rng::mix(cfg.seed, 0xd41f7));
        try {
            PhaseState st = pick_initial(cfg.model, rng);
            auto traj = dynamics::integrate(cfg.model, st, 10.0, 1e-3, "midpoint");
            auto h = observables::hamiltonian_observable(cfg.model);
            add("conservation_drift", ",\"observable\":\"H\"",
                probes::conservation_drift(traj, *h), 1e-6);
        } catch (const std::exception& ex) {
            VerifyCheck c;
            c.pass = false;
            c.record = std::string("{\"check\":\"conservation_drift\",\"error\":\"") + ex.what() +
                       "\",\"pass\":false}";
            checks.push_back(c);
        }
    }

    std::ofstream jsonl(cfg.output / "verify.jsonl", std::ios::binary);
    if (!jsonl) throw std::runtime_error("cannot write verify.jsonl");
    bool all = true;
    for (const auto& c : checks) {
        jsonl << c.record << "\n";
        all = all && c.pass;
    }
    out << (all ? "PASS" : "FAIL") << " (" << checks.size() << " checks)\n";
    return all ? 0 : 1;
}

int task_closure(const RunConfig& cfg, std::ostream& out) {
    Rng rng(cfg.seed);
    PhaseState st = cfg.options.contains("state") ? parse_state(cfg.options["state"], cfg.model.n)
                                                  : pick_initial(cfg.model, rng);
    probes::ClosureOptions opts;
    opts.step = opt_num(cfg, "step", opts.step);
    opts.t_max = opt_num(cfg, "t_max", opts.t_max);
    opts.epsilon = opt_num(cfg, "epsilon", opts.epsilon);
    opts.rational_q_max = opt_int(cfg, "q_max", opts.rational_q_max);

    auto report = probes::closure_test(cfg.model, st, opts);
    std::string json = probes::closure_report_to_json(report);
    write_file(cfg.output / "closure.json", json + "\n");
    out << json << "\n";
    return report.verdict == "undetermined" && !report.diagnostic.empty() &&
                   report.diagnostic.find("abort") != std::string::npos
               ? 1
               : 0;
}

int task_scan(const RunConfig& cfg, std::ostream& out) {
    auto read_grid = [&](const char* key) {
        if (!cfg.options.contains(key) || !cfg.options[key].is_array() ||
            cfg.options[key].empty())
            throw ConfigError(std::string("config: task \"scan\" needs nonempty array option \"") +
                              key + "\"");
        std::vector<double> grid;
        for (const auto& v : cfg.options[key]) {
            if (!v.is_number())
                throw ConfigError(std::string("config: option \"") + key + "\" must hold numbers");
            grid.push_back(v.get<double>());
        }
        return grid;
    };
    auto k_grid = read_grid("k_grid");
    auto s_grid = read_grid("s_grid");
    int n_ic = static_cast<int>(opt_int(cfg, "n_ic", 10));

    probes::ClosureOptions opts;
    opts.step = opt_num(cfg, "step", 4e-3);
    opts.epsilon = opt_num(cfg, "epsilon", opts.epsilon);

    auto table = probes::parameter_scan(cfg.model, k_grid, s_grid, n_ic, cfg.seed, opts);
    write_file(cfg.output / "scan.csv", probes::scan_to_csv(table));

    // Heatmap rows indexed by s, columns by k.
    std::vector<double> values(k_grid.size() * s_grid.size());
    for (std::size_t ki = 0; ki < k_grid.size(); ++ki)
        for (std::size_t si = 0; si < s_grid.size(); ++si)
            values[si * k_grid.size() + ki] = table.cells[ki * s_grid.size() + si].closure_fraction;
    write_file(cfg.output / "scan.svg",
               svg::heatmap(values, k_grid, s_grid, "k", "s", "closure fraction"));

    out << "{\"cells\":" << table.cells.size() << ",\"n_ic\":" << n_ic
        << ",\"seed\":" << table.seed << "}\n";
    return 0;
}

int task_spectrum(const RunConfig& cfg, std::ostream& out) {
    quantum::GridSpec grid;
    grid.n = cfg.model.n;
    if (!cfg.options.contains("box") || !cfg.options["box"].is_array() ||
        static_cast<int>(cfg.options["box"].size()) != grid.n)
        throw ConfigError("config: task \"spectrum\" needs option \"box\" with one [a,b] per axis");
    for (const auto& interval : cfg.options["box"]) {
        if (!interval.is_array() || interval.size() != 2 || !interval[0].is_number() ||
            !interval[1].is_number())
            throw ConfigError("config: option \"box\" entries must be [a,b] number pairs");
        grid.box.emplace_back(interval[0].get<double>(), interval[1].get<double>());
    }
    if (!cfg.options.contains("points") || !cfg.options["points"].is_array() ||
        static_cast<int>(cfg.options["points"].size()) != grid.n)
        throw ConfigError("config: task \"spectrum\" needs option \"points\" with one count per axis");
    for (const auto& v : cfg.options["points"]) {
        if (!v.is_number_integer())
            throw ConfigError("config: option \"points\" must hold integers");
        grid.points.push_back(v.get<int>());
    }
    int count = static_cast<int>(opt_int(cfg, "count", 6));
    double cluster_tol = opt_num(cfg, "cluster_tol", 5e-2);

    try {
        grid.validate(cfg.model);
    } catch (const std::invalid_argument& err) {
        throw ConfigError(std::string("config: ") + err.what());
    }

    auto result = quantum::compute_spectrum(cfg.model, grid, count, cluster_tol);
    write_file(cfg.output / "spectrum.csv", quantum::spectrum_to_csv(result));
    write_file(cfg.output / "spectrum.json", quantum::spectrum_header_json(result) + "\n");

    std::vector<int> cluster_ids;
    {
        std::size_t cluster = 0;
        int used = 0;
        for (std::size_t i = 0; i < result.eigenvalues.size(); ++i) {
            while (cluster < result.clusters.size() && used >= result.clusters[cluster].second) {
                ++cluster;
                used = 0;
            }
            cluster_ids.push_back(static_cast<int>(cluster));
            ++used;
        }
    }
    write_file(cfg.output / "levels.svg",
               svg::level_diagram(result.eigenvalues, cluster_ids, "low spectrum"));

    out << quantum::spectrum_header_json(result) << "\n";
    return 0;
}

}  // namespace

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        std::filesystem::create_directories(cfg.output);
        if (cfg.task == "eval") return task_eval(cfg, out);
        if (cfg.task == "integrate") return task_integrate(cfg, out);
        if (cfg.task == "verify") return task_verify(cfg, out);
        if (cfg.task == "closure") return task_closure(cfg, out);
        if (cfg.task == "scan") return task_scan(cfg, out);
        if (cfg.task == "spectrum") return task_spectrum(cfg, out);
        throw ConfigError("config: unknown task \"" + cfg.task + "\"");
    } catch (const ConfigError&) {
        throw;
    } catch (const dynamics::IntegrationAbort& ex) {
        err << "error: " << ex.what() << "\n";
        return 1;
    } catch (const std::exception& ex) {
        err << "error: " << ex.what() << "\n";
        return 1;
    }
}

}  // namespace cli
}  // namespace confham
