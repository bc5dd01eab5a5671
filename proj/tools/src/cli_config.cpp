#include "cli_config.hpp"

#include <fstream>
#include <map>
#include <set>

#include "confham/catalog.hpp"

namespace confham {
namespace cli {

namespace {

double require_number(const nlohmann::json& obj, const std::string& key) {
    if (!obj.contains(key)) throw ConfigError("config: missing field \"" + key + "\"");
    if (!obj[key].is_number()) throw ConfigError("config: field \"" + key + "\" must be a number");
    return obj[key].get<double>();
}

ModelParams parse_inline_model(const nlohmann::json& m) {
    ModelParams params;
    double n_raw = require_number(m, "n");
    params.n = static_cast<int>(n_raw);
    if (params.n != n_raw) throw ConfigError("config: model field \"n\" must be an integer");
    params.k = require_number(m, "k");
    params.s = require_number(m, "s");
    params.gamma = m.contains("gamma") ? require_number(m, "gamma") : 0.0;
    params.central_sign =
        m.contains("central_sign") ? static_cast<int>(require_number(m, "central_sign")) : 1;
    auto read_array = [&](const std::string& key, double fallback) {
        std::vector<double> out(params.n, fallback);
        if (m.contains(key)) {
            if (!m[key].is_array() || static_cast<int>(m[key].size()) != params.n)
                throw ConfigError("config: model field \"" + key + "\" must be an array of length n");
            for (int i = 0; i < params.n; ++i) {
                if (!m[key][i].is_number())
                    throw ConfigError("config: model field \"" + key + "\" must hold numbers");
                out[i] = m[key][i].get<double>();
            }
        }
        return out;
    };
    params.omegas = read_array("omegas", 1.0);
    params.alphas = read_array("alphas", 0.0);
    try {
        params.validate();
    } catch (const std::invalid_argument& err) {
        throw ConfigError(std::string("config: ") + err.what());
    }
    return params;
}

}  // namespace

RunConfig parse_run_config(const nlohmann::json& doc) {
    if (!doc.is_object()) throw ConfigError("config: document must be a JSON object");
    RunConfig cfg;

    if (!doc.contains("model") || !doc["model"].is_object())
        throw ConfigError("config: missing object field \"model\"");
    const auto& model = doc["model"];
    if (model.contains("name")) {
        if (!model["name"].is_string())
            throw ConfigError("config: model field \"name\" must be a string");
        std::string name = model["name"].get<std::string>();
        std::map<std::string, double> bindings;
        for (auto it = model.begin(); it != model.end(); ++it) {
            if (it.key() == "name") continue;
            if (it.key() == "bindings") {
                if (!it.value().is_object())
                    throw ConfigError("config: model field \"bindings\" must be an object");
                for (auto b = it.value().begin(); b != it.value().end(); ++b) {
                    if (!b.value().is_number())
                        throw ConfigError("config: binding \"" + b.key() + "\" must be a number");
                    bindings[b.key()] = b.value().get<double>();
                }
                continue;
            }
            if (!it.value().is_number())
                throw ConfigError("config: binding \"" + it.key() + "\" must be a number");
            bindings[it.key()] = it.value().get<double>();
        }
        try {
            auto entry = catalog::instantiate_reduction(name, bindings);
            cfg.model = entry.params;
            cfg.reduction_name = name;
        } catch (const std::invalid_argument& err) {
            throw ConfigError(std::string("config: ") + err.what());
        }
    } else {
        cfg.model = parse_inline_model(model);
    }

    if (!doc.contains("task") || !doc["task"].is_string())
        throw ConfigError("config: missing string field \"task\"");
    cfg.task = doc["task"].get<std::string>();
    static const std::set<std::string> tasks = {"eval",    "integrate", "verify",
                                                "closure", "scan",      "spectrum"};
    if (!tasks.count(cfg.task)) throw ConfigError("config: unknown task \"" + cfg.task + "\"");

    if (doc.contains("output")) {
        if (!doc["output"].is_string()) throw ConfigError("config: field \"output\" must be a string");
        cfg.output = doc["output"].get<std::string>();
    }
    if (doc.contains("seed")) {
        if (!doc["seed"].is_number_integer() || doc["seed"].get<long long>() < 0)
            throw ConfigError("config: field \"seed\" must be a nonnegative integer");
        cfg.seed = doc["seed"].get<std::uint64_t>();
    }
    cfg.options = doc.contains("options") ? doc["options"] : nlohmann::json::object();
    if (!cfg.options.is_object()) throw ConfigError("config: field \"options\" must be an object");

    // Task knobs may also sit at the top level.
    static const std::set<std::string> reserved = {"model", "task", "output", "seed", "options"};
    for (auto it = doc.begin(); it != doc.end(); ++it) {
        if (!reserved.count(it.key()) && !cfg.options.contains(it.key()))
            cfg.options[it.key()] = it.value();
    }

    for (const char* key : {"step", "t_max", "tau_max", "epsilon", "cluster_tol"}) {
        if (cfg.options.contains(key)) {
            if (!cfg.options[key].is_number() || !(cfg.options[key].get<double>() > 0.0))
                throw ConfigError("config: option \"" + std::string(key) +
                                  "\" must be a positive number");
        }
    }
    for (const char* key : {"n_ic", "count", "points_per_axis"}) {
        if (cfg.options.contains(key)) {
            if (!cfg.options[key].is_number_integer() || cfg.options[key].get<long long>() < 1)
                throw ConfigError("config: option \"" + std::string(key) +
                                  "\" must be a positive integer");
        }
    }
    return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open \"" + path.string() + "\"");
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::parse_error& err) {
        throw ConfigError(std::string("config: parse error: ") + err.what());
    }
    return parse_run_config(doc);
}

}  // namespace cli
}  // namespace confham
