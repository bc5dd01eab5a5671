#include "confham/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "confham/transforms.hpp"

namespace confham {
namespace catalog {

namespace {

class Bindings {
public:
    explicit Bindings(const std::map<std::string, double>& m) : map_(m) {}

    double get(const std::string& key, double fallback) {
        used_.insert(key);
        auto it = map_.find(key);
        return it == map_.end() ? fallback : it->second;
    }

    double require(const std::string& key, const std::string& entry) {
        used_.insert(key);
        auto it = map_.find(key);
        if (it == map_.end())
            throw std::invalid_argument("instantiate_reduction(" + entry + "): missing binding \"" +
                                        key + "\"");
        return it->second;
    }

    void allow_indexed(const std::string& prefix, int n) {
        for (int i = 1; i <= n; ++i) used_.insert(prefix + std::to_string(i));
    }

    void reject_unknown(const std::string& entry) const {
        for (const auto& [key, _] : map_) {
            if (!used_.count(key))
                throw std::invalid_argument("instantiate_reduction(" + entry +
                                            "): unknown binding \"" + key + "\"");
        }
    }

    std::vector<double> indexed(const std::string& prefix, int n, double common) {
        std::vector<double> out(n, common);
        for (int i = 1; i <= n; ++i) {
            auto it = map_.find(prefix + std::to_string(i));
            if (it != map_.end()) out[i - 1] = it->second;
        }
        return out;
    }

private:
    const std::map<std::string, double>& map_;
    std::set<std::string> used_;
};

std::vector<std::string> pair_ids(const std::string& prefix, int n) {
    std::vector<std::string> out;
    for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j)
            out.push_back(prefix + "_" + std::to_string(i) + std::to_string(j));
    return out;
}

int bind_n(Bindings& b, const std::string& entry, int fallback = -1) {
    double n_raw = fallback < 0 ? b.require("n", entry) : b.get("n", fallback);
    int n = static_cast<int>(std::lround(n_raw));
    if (n < 2 || n != n_raw)
        throw std::invalid_argument("instantiate_reduction(" + entry + "): n must be an integer >= 2");
    return n;
}

// Frequency reproducing an attractive central term -lambda (sum x^2)^q,
// i.e. omega^(2q) = 2 k^2 lambda. Falls back to 1 when q = 0 (the coupling
// then degenerates to the constant 1/(2k^2)).
double omega_for_coupling(double lambda, double k, double q, const std::string& entry) {
    if (q == 0.0) return 1.0;
    if (!(lambda > 0.0))
        throw std::invalid_argument("instantiate_reduction(" + entry + "): lambda must be positive");
    return std::pow(2.0 * k * k * lambda, 1.0 / (2.0 * q));
}

double sum_sq(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return s;
}

}  // namespace

const std::vector<std::string>& entry_names() {
    static const std::vector<std::string> names = {
        "ttw",  "gks",       "nttw",   "ngks",        "sw1",  "sw2",
        "rosochatius", "kepler", "harmonic", "behr_curved", "rw02"};
    return names;
}

ReductionEntry instantiate_reduction(const std::string& name,
                                     const std::map<std::string, double>& bindings) {
    Bindings b(bindings);
    ReductionEntry e;
    e.name = name;
    ModelParams& m = e.params;
    e.coordinate_frame = "cartesian";

    if (name == "ttw") {
        m.n = 2;
        m.k = b.get("k", 2.0);
        m.s = 1.0;
        m.gamma = 0.0;
        m.central_sign = +1;
        double omega = b.get("omega", 1.0);
        m.omegas = {omega, omega};
        m.alphas = {b.get("alpha", 0.0), b.get("beta", 0.0)};
        e.coordinate_frame = "uv";
        e.known_integrals = {"H", "K_12", "X_ttw"};
        e.notes = "deformed oscillator; family coordinates are the (u,v) frame of the planar chain";
        if (m.alphas[0] == 0.0 && m.alphas[1] == 0.0) {
            // Winding orbits: angular advance per radial period is k * pi.
            double rot = m.k / 2.0;
            double den = 1.0;
            for (long q = 1; q <= 16; ++q) {
                if (std::abs(rot * q - std::nearbyint(rot * q)) < 1e-12) {
                    den = static_cast<double>(q);
                    break;
                }
            }
            if (std::abs(rot * den - std::nearbyint(rot * den)) < 1e-12)
                e.expected_closure = {{static_cast<long>(std::nearbyint(rot * den)),
                                       static_cast<long>(den)}};
        }
    } else if (name == "gks" || name == "ngks") {
        m.n = name == "gks" ? 2 : bind_n(b, name);
        m.k = b.get("k", 2.0);
        m.s = -0.5;
        m.gamma = 0.0;
        m.central_sign = -1;
        double q = m.central_exponent();
        double omega = omega_for_coupling(b.get("lambda", 1.0), m.k, q, name);
        m.omegas.assign(m.n, omega);
        if (name == "gks") {
            m.alphas = {b.get("alpha", 0.0), b.get("beta", 0.0)};
        } else {
            b.allow_indexed("alpha", m.n);
            m.alphas = b.indexed("alpha", m.n, b.get("alpha", 0.0));
        }
        e.known_integrals = {"H"};
        for (const auto& id : pair_ids("K", m.n)) e.known_integrals.push_back(id);
        e.notes = "generalized Kepler member; lambda binds the effective central coupling";
    } else if (name == "nttw") {
        m.n = bind_n(b, name);
        m.k = b.get("k", 2.0);
        m.s = 1.0;
        m.gamma = 0.0;
        m.central_sign = +1;
        double omega = b.get("omega", 1.0);
        m.omegas.assign(m.n, omega);
        b.allow_indexed("alpha", m.n);
        m.alphas = b.indexed("alpha", m.n, b.get("alpha", 0.0));
        e.known_integrals = {"H"};
        for (const auto& id : pair_ids("K", m.n)) e.known_integrals.push_back(id);
        e.notes = "n-dimensional deformed oscillator";
    } else if (name == "sw1") {
        m.n = 2;
        m.k = 1.0;
        m.s = 1.0;
        m.gamma = 0.0;
        m.central_sign = +1;
        double omega = b.get("omega", 1.0);
        m.omegas = {omega, omega};
        m.alphas = {b.get("alpha", 1.0), b.get("beta", 1.0)};
        e.known_integrals = {"H", "K_12"};
        e.expected_closure = {{1, 2}};
        e.notes = "planar oscillator with two centrifugal barriers";
    } else if (name == "sw2") {
        m.n = 2;
        m.k = 1.0;
        m.s = 1.0;
        m.gamma = 0.0;
        m.central_sign = +1;
        double omega = b.get("omega", 1.0);
        m.omegas = {2.0 * omega, omega};
        m.alphas = {0.0, b.get("beta", 1.0)};
        e.known_integrals = {"H"};
        e.expected_closure = {{1, 2}};
        e.notes = "2:1 anisotropic oscillator with one barrier";
    } else if (name == "rosochatius") {
        m.n = bind_n(b, name);
        m.k = 1.0;
        m.s = 1.0;
        m.gamma = 0.0;
        m.central_sign = +1;
        double omega = b.get("omega", 1.0);
        m.omegas.assign(m.n, omega);
        b.allow_indexed("alpha", m.n);
        m.alphas = b.indexed("alpha", m.n, b.get("alpha", 0.1));
        e.known_integrals = {"H"};
        for (const auto& id : pair_ids("K", m.n)) e.known_integrals.push_back(id);
        e.expected_closure = {{1, 2}};
        e.notes = "isotropic oscillator with inverse-square barriers";
    } else if (name == "kepler") {
        m.n = bind_n(b, name);
        m.k = 1.0;
        m.s = -0.5;
        m.gamma = 0.0;
        m.central_sign = -1;
        double lambda = b.get("lambda", 1.0);
        double omega = omega_for_coupling(lambda, m.k, m.central_exponent(), name);
        m.omegas.assign(m.n, omega);
        m.alphas.assign(m.n, 0.0);
        e.known_integrals = {"H"};
        for (const auto& id : pair_ids("L", m.n)) e.known_integrals.push_back(id);
        e.expected_closure = {{1, 1}};
        e.notes = "attractive -lambda/r potential; lambda = 1/(2 omega)";
    } else if (name == "harmonic") {
        m.n = bind_n(b, name);
        m.k = 1.0;
        m.s = 1.0;
        m.gamma = 0.0;
        m.central_sign = +1;
        b.allow_indexed("omega", m.n);
        m.omegas = b.indexed("omega", m.n, b.get("omega", 1.0));
        m.alphas.assign(m.n, 0.0);
        e.known_integrals = {"H"};
        if (m.equal_omegas()) {
            for (const auto& id : pair_ids("L", m.n)) e.known_integrals.push_back(id);
            for (const auto& id : pair_ids("K", m.n)) e.known_integrals.push_back(id);
            e.expected_closure = {{1, 2}};
        }
        e.notes = "plain (an)isotropic oscillator";
    } else if (name == "behr_curved") {
        m.n = bind_n(b, name);
        m.k = 0.5;
        m.s = 0.0;
        m.gamma = b.get("gamma", 1.0);
        if (!(m.gamma > 0.0))
            throw std::invalid_argument("instantiate_reduction(behr_curved): gamma must be > 0");
        m.central_sign = +1;
        double omega = b.get("omega", 1.0);
        m.omegas.assign(m.n, omega);
        b.allow_indexed("alpha", m.n);
        m.alphas = b.indexed("alpha", m.n, b.get("alpha", 0.0));
        e.known_integrals = {"H"};
        for (const auto& id : pair_ids("K", m.n)) e.known_integrals.push_back(id);
        e.notes = "oscillator on a nonconstant-curvature background";
    } else if (name == "rw02") {
        m.n = bind_n(b, name);
        m.k = 1.0;
        m.s = -0.5;
        m.gamma = 0.0;
        m.central_sign = -1;
        double lambda = b.get("lambda", 1.0);
        double omega = omega_for_coupling(lambda, m.k, m.central_exponent(), name);
        m.omegas.assign(m.n, omega);
        b.allow_indexed("alpha", m.n);
        m.alphas = b.indexed("alpha", m.n, b.get("alpha", 0.1));
        m.alphas[m.n - 1] = 0.0;
        e.known_integrals = {"H"};
        for (const auto& id : pair_ids("K", m.n)) e.known_integrals.push_back(id);
        e.notes = "Kepler term with barriers on the first n-1 axes";
    } else {
        std::string valid;
        for (const auto& v : entry_names()) valid += (valid.empty() ? "" : ", ") + v;
        throw std::invalid_argument("instantiate_reduction: unknown entry \"" + name +
                                    "\" (valid: " + valid + ")");
    }

    b.reject_unknown(name);
    m.validate();
    return e;
}

double reference_energy(const ReductionEntry& entry, const PhaseState& state) {
    const ModelParams& m = entry.params;
    if (state.dim() != m.n)
        throw std::domain_error("reference_energy: state dimension mismatch");
    double kin = 0.0;
    for (double p : state.p) kin += 0.5 * p * p;
    double r2 = sum_sq(state.x);

    if (entry.name == "harmonic") {
        double pot = 0.0;
        for (int i = 0; i < m.n; ++i)
            pot += 0.5 * m.omegas[i] * m.omegas[i] * state.x[i] * state.x[i];
        return kin + pot;
    }
    if (entry.name == "sw1" || entry.name == "rosochatius") {
        double pot = 0.5 * m.omegas[0] * m.omegas[0] * r2;
        for (int i = 0; i < m.n; ++i) pot += m.alphas[i] / (state.x[i] * state.x[i]);
        return kin + pot;
    }
    if (entry.name == "sw2") {
        double w = m.omegas[1];
        return kin + 0.5 * w * w * (4.0 * state.x[0] * state.x[0] + state.x[1] * state.x[1]) +
               m.alphas[1] / (state.x[1] * state.x[1]);
    }
    if (entry.name == "kepler" || entry.name == "rw02") {
        double lambda = 1.0 / (2.0 * m.omegas[0]);
        double pot = -lambda / std::sqrt(r2);
        for (int i = 0; i < m.n; ++i)
            if (m.alphas[i] != 0.0) pot += m.alphas[i] / (state.x[i] * state.x[i]);
        return kin + pot;
    }
    if (entry.name == "ttw") {
        // Route through the planar chain: (u,v) -> (x,y) -> polar, then the
        // polar form, rescaled by 1/k^2 and with couplings matched:
        // alpha_polar = 2 alpha_family, omega_polar = omega_family^((2-k)/k).
        double q = m.central_exponent();
        double omega_polar = std::pow(m.omegas[0], q);
        PhaseState cart = transforms::uv_to_cartesian(m.k, {state.x[0], state.x[1],
                                                            state.p[0], state.p[1]});
        transforms::PolarState pol = transforms::cartesian_to_polar(cart);
        double h_polar = transforms::eval_ttw_polar(omega_polar, 2.0 * m.alphas[0],
                                                    2.0 * m.alphas[1], m.k, pol);
        return h_polar / (m.k * m.k);
    }
    if (entry.name == "gks" || entry.name == "ngks") {
        double q = m.central_exponent();  // (1-2k)/(2k)
        double coupling = q == 0.0 ? 1.0 / (2.0 * m.k * m.k)
                                   : std::pow(m.omegas[0], 2.0 * q) / (2.0 * m.k * m.k);
        double inner = kin - coupling * std::pow(r2, q);
        for (int i = 0; i < m.n; ++i)
            if (m.alphas[i] != 0.0) inner += m.alphas[i] / (state.x[i] * state.x[i]);
        return std::pow(r2, (m.k - 1.0) / m.k) * inner;
    }
    if (entry.name == "nttw") {
        double q = m.central_exponent();  // (2-k)/k
        double coupling = q == 0.0 ? 1.0 / (2.0 * m.k * m.k)
                                   : std::pow(m.omegas[0], 2.0 * q) / (2.0 * m.k * m.k);
        double inner = kin + coupling * std::pow(r2, q);
        for (int i = 0; i < m.n; ++i)
            if (m.alphas[i] != 0.0) inner += m.alphas[i] / (state.x[i] * state.x[i]);
        return std::pow(r2, (m.k - 1.0) / m.k) * inner;
    }
    if (entry.name == "behr_curved") {
        double w = m.omegas[0];
        double inner = kin + 2.0 * w * w * r2;
        for (int i = 0; i < m.n; ++i)
            if (m.alphas[i] != 0.0) inner += m.alphas[i] / (state.x[i] * state.x[i]);
        return inner / (r2 + m.gamma);
    }
    throw std::invalid_argument("reference_energy: no reference form for entry \"" + entry.name +
                                "\"");
}

}  // namespace catalog
}  // namespace confham
