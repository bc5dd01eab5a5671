#pragma once

#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "confham/dual.hpp"
#include "confham/hamiltonian.hpp"
#include "confham/model.hpp"
#include "confham/transforms.hpp"

namespace confham {
namespace observables {

/// A smooth phase-space function evaluable on plain doubles and on first- and
/// second-order dual numbers, so brackets (and brackets of brackets) can be
/// taken without finite differences.
class Observable {
public:
    explicit Observable(std::string id) : id_(std::move(id)) {}
    virtual ~Observable() = default;

    const std::string& id() const { return id_; }

    virtual double eval(std::span<const double> x, std::span<const double> p) const = 0;
    virtual Dual1 eval(std::span<const Dual1> x, std::span<const Dual1> p) const = 0;
    virtual Dual2 eval(std::span<const Dual2> x, std::span<const Dual2> p) const = 0;

private:
    std::string id_;
};

using ObservablePtr = std::shared_ptr<const Observable>;

namespace detail {

template <typename F>
class GenericObservable final : public Observable {
public:
    GenericObservable(std::string id, F f) : Observable(std::move(id)), f_(std::move(f)) {}

    double eval(std::span<const double> x, std::span<const double> p) const override {
        return f_(x, p);
    }
    Dual1 eval(std::span<const Dual1> x, std::span<const Dual1> p) const override {
        return f_(x, p);
    }
    Dual2 eval(std::span<const Dual2> x, std::span<const Dual2> p) const override {
        return f_(x, p);
    }

private:
    F f_;
};

}  // namespace detail

/// Wraps a scalar-generic callable (span<const T>, span<const T>) -> T.
template <typename F>
ObservablePtr make_observable(std::string id, F f) {
    return std::make_shared<detail::GenericObservable<F>>(std::move(id), std::move(f));
}

double eval(const Observable& obs, const PhaseState& state);

/// Phase-space gradient (d/dx_1..d/dx_n, d/dp_1..d/dp_n) via dual seeding.
std::vector<double> phase_gradient(const Observable& obs, const PhaseState& state);

/// Canonical bracket {f, g} = sum_i (df/dx_i dg/dp_i - df/dp_i dg/dx_i),
/// computed with dual numbers.
double poisson_bracket(const Observable& f, const Observable& g, const PhaseState& state);

/// One relative-bracket summary over a set of sample points.
struct BracketReport {
    std::pair<std::string, std::string> pair;
    int sample_points = 0;
    double max_abs_bracket = 0.0;  // max |{f,g}|
    double scale = 1.0;            // max ||grad f|| * ||grad g|| over the points
};

BracketReport make_bracket_report(const Observable& f, const Observable& g,
                                  const std::vector<PhaseState>& points);

// ---- stock observables ------------------------------------------------

ObservablePtr hamiltonian_observable(const ModelParams& params);
ObservablePtr coordinate_observable(int i);
ObservablePtr momentum_observable(int i);
/// L_ij = x_i p_j - x_j p_i (zero-based indices, id uses 1-based labels).
ObservablePtr angular_momentum_observable(int i, int j);
/// K_ij = L_ij^2 + 2 a_i x_j^2/x_i^2 + 2 a_j x_i^2/x_j^2; defined for equal
/// frequencies, where it is conserved for every member of the family.
ObservablePtr angular_rosochatius_observable(int i, int j, const ModelParams& params);
/// Polar deformed-oscillator Hamiltonian as an observable on (r, phi; p_r, p_phi).
ObservablePtr ttw_polar_hamiltonian_observable(double omega, double alpha, double beta, double k);
/// Its separation constant X = p_phi^2 + a k^2/cos^2 k phi + b k^2/sin^2 k phi.
ObservablePtr ttw_second_integral_observable(double k, double alpha, double beta);

ObservablePtr product_observable(const ObservablePtr& f, const ObservablePtr& g);
ObservablePtr scaled_observable(double c, const ObservablePtr& f);
/// {f, g} as an observable (one nesting level; bracket-of-bracket evaluates
/// on plain points and first-order duals only).
ObservablePtr bracket_observable(const ObservablePtr& f, const ObservablePtr& g);

// ---- direct-value operations -------------------------------------------

/// K_ij at a point. Preconditions: i < j, equal frequencies, x_i != 0 where
/// the matching coupling is nonzero.
double angular_rosochatius_integral(int i, int j, const ModelParams& params,
                                    const PhaseState& state);

/// X at a polar point.
double ttw_second_integral(double k, double alpha, double beta,
                           const transforms::PolarState& state);

/// Max over points of the numerical rank (singular values above
/// 1e-10 x largest) of the matrix of phase-space gradients.
int independence_rank(const std::vector<ObservablePtr>& obs, const ModelParams& params,
                      const std::vector<PhaseState>& points);

}  // namespace observables
}  // namespace confham
