#pragma once

#include <span>
#include <vector>

#include "epinet/dynamics.hpp"
#include "epinet/graph.hpp"

namespace epinet {

// Reliability reading of the mean-field SI flow: node i fails (is infected)
// at hazard rate h_i(t) = beta * sum_j a_ij x_j(t), so
//   P{T_i > t} = (1 - x_i(0)) exp(-H_i(t)),  H_i(t) = integral_0^t h_i.
// H is integrated as extra state alongside x with the same adaptive error
// control, so the identity checks below measure modeling consistency rather
// than quadrature noise.

// h = beta * A x for a probability-scale state.
std::vector<double> hazard_from_state(const Graph& g, double beta, const StateVector& x);

struct HazardCurve {
    std::vector<double> times;
    std::vector<std::vector<double>> hazard;      // [time][node]
    std::vector<std::vector<double>> cumulative;  // [time][node], cumulative[0] matches times[0]
};

HazardCurve hazard_curve(const Graph& g, double beta, const StateVector& x0,
                         std::span<const double> grid, const Accuracy& acc = {});

struct SurvivalCurves {
    std::vector<double> times;
    std::vector<std::vector<double>> survival;  // [time][node]
};

SurvivalCurves survival_curve(const Graph& g, double beta, const StateVector& x0,
                              std::span<const double> grid, const Accuracy& acc = {});

struct TransformedIdentityReport {
    // max over grid and nodes of |g(x_i(t)) - g(x_i(0)) - H_i(t)|
    double max_value_discrepancy = 0.0;
    // max over sampled interior times of |d/dt g(x_i(t)) - h_i(t)|,
    // with the derivative taken by centered difference of half-width fd_step
    double max_derivative_discrepancy = 0.0;
};

// Verifies that y = g(x) accumulates exactly the cumulative hazard, in value
// and in slope. Requires max x0 < 1 so y stays finite.
TransformedIdentityReport transformed_identity_check(const Graph& g, double beta,
                                                     const StateVector& x0,
                                                     std::span<const double> grid,
                                                     const Accuracy& acc = {},
                                                     double fd_step = 1e-4);

// P{T_i > age + u | T_i > age} = exp(-(H_i(age + u) - H_i(age))) for each
// lookahead u. lookahead must be nondecreasing and nonnegative; u = 0 gives
// exactly 1.
std::vector<std::vector<double>> residual_life_distribution(const Graph& g, double beta,
                                                            const StateVector& x0, double age,
                                                            std::span<const double> lookahead,
                                                            const Accuracy& acc = {});

}  // namespace epinet
