#pragma once

#include <functional>
#include <span>
#include <vector>

#include "epinet/graph.hpp"

namespace epinet {

// A per-node state is either on the probability scale x in [0,1] or on the
// transformed scale y = -log(1 - x) in [0, +inf]. Nodes that are certainly
// infected carry x = 1, i.e. y = +inf; the infinity is an exact sentinel, not
// an overflow.
enum class StateKind { probability, transformed };

struct StateVector {
    std::vector<double> values;
    StateKind kind = StateKind::probability;
};

struct Trajectory {
    std::vector<double> times;                 // strictly increasing, times[0] >= 0
    std::vector<std::vector<double>> states;   // states[k] matches times[k]
    StateKind kind = StateKind::probability;
};

struct ModelParams {
    double beta = 1.0;   // per-edge infection rate
    double delta = 0.0;  // per-node curing rate (0 disables recovery)
};

struct Accuracy {
    double rel_tol = 1e-9;
    double abs_tol = 1e-12;
};

// y = -log(1 - x). Exact at the ends: 0 -> 0, 1 -> +inf. Domain [0,1].
double transform_g(double x);
// x = 1 - exp(-y), inverse of transform_g. Domain [0, +inf].
double transform_f(double y);
// b(x) = x + (1 - x) log(1 - x), with the 0*log(0) = 0 convention, so
// b(0) = 0 and b(1) = 1. Nonnegative on [0,1].
double transform_b(double x);

std::vector<double> transform_g(std::span<const double> x);
std::vector<double> transform_f(std::span<const double> y);
std::vector<double> transform_b(std::span<const double> x);

// Right-hand side f(t, y) -> dy/dt written into the last argument.
using OdeRhs = std::function<void(double, const std::vector<double>&, std::vector<double>&)>;

struct OdeCallbacks {
    // Runs after each accepted step and may adjust the state in place
    // (used to clamp roundoff excursions out of [0,1]).
    std::function<void(double, std::vector<double>&)> post_step;
    // Runs after post_step on each accepted step.
    std::function<void(double, const std::vector<double>&)> on_accept;
};

// Dense-output-free adaptive integration: steps an embedded Runge-Kutta pair
// with the given tolerances and lands exactly on every grid point. Returns
// the state at each grid time. grid must be strictly increasing with
// grid[0] >= 0; a leading 0 returns y0 itself.
std::vector<std::vector<double>> integrate_ode(const OdeRhs& rhs, std::vector<double> y0,
                                               std::span<const double> grid, const Accuracy& acc,
                                               const OdeCallbacks& callbacks = {});

// Mean-field susceptible-infected dynamics
//   dx_i/dt = beta (1 - x_i) sum_j a_ij x_j
// from x0 on the probability scale. Rejects the stationary initial
// conditions x0 == 0 and x0 == 1 (componentwise all-zero / all-one), where
// nothing spreads. States are clamped to [0,1] after each accepted step;
// clamping absorbs roundoff only, never model error.
Trajectory integrate_si(const Graph& g, const ModelParams& params, const StateVector& x0,
                        std::span<const double> grid, const Accuracy& acc = {});

// Mean-field susceptible-infected-susceptible dynamics
//   dx_i/dt = beta (1 - x_i) sum_j a_ij x_j - delta x_i.
// All-one initial states are meaningful here (pure decay), only all-zero is
// rejected.
Trajectory integrate_sis(const Graph& g, const ModelParams& params, const StateVector& x0,
                         std::span<const double> grid, const Accuracy& acc = {});

}  // namespace epinet
