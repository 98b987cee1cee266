#pragma once

#include <span>
#include <vector>

#include "epinet/dynamics.hpp"
#include "epinet/graph.hpp"
#include "epinet/linalg.hpp"

namespace epinet {

enum class BoundMethod {
    linearization,              // x~(t) = exp(beta t A) x0, valid but loose
    transformation_general,     // series with the source/interior split handled
    transformation_interior,    // closed form requiring max x0 < 1
    transformation_binary,      // closed form requiring x0 in {0,1}^n
    transformation_asymptotic,  // dominant-eigenmode approximation of the above
};

// One bound evaluated on a grid. probability always holds the bound mapped to
// the x scale (the linearization may exceed 1 by construction; transformed
// bounds stay in [0,1]). transformed holds y-scale values for transformation
// methods and is empty for the linearization. Certainly-infected nodes carry
// y = +inf exactly. series_terms / series_cap_hit record the truncation
// behavior at each grid time (zeros for the linearization's x-scale series
// are still reported).
struct BoundResult {
    BoundMethod method = BoundMethod::linearization;
    Trajectory probability;
    Trajectory transformed;
    std::vector<int> series_terms;
    std::vector<char> series_cap_hit;
};

// x~(t) = exp(beta t A) x0: upper bound on the infection probabilities that
// grows without limit. Every grid point is evaluated as an independent series
// from t = 0, never by stepping from the previous point.
BoundResult linearization_bound(const Graph& g, double beta, const StateVector& x0,
                                std::span<const double> grid,
                                const ExpmActionParams& params = {});

// Dominant-mode approximation of the linearization at one time:
// (v.x0) exp(beta mu t) v with (mu, v) the top adjacency eigenpair.
std::vector<double> evc_asymptote(const Graph& g, double beta, const StateVector& x0, double t);

// Upper bound from the transformed linear system: y(t) solves
//   dy/dt = beta A diag(1-x0) y + beta A b(x0),  y(0) = g(x0),
// and x(t) <= f(y(t)) <= x~(t) componentwise. Dispatches to the binary or
// interior closed form when x0 qualifies, otherwise evaluates the general
// two-series form.
BoundResult transformation_bound(const Graph& g, double beta, const StateVector& x0,
                                 std::span<const double> grid,
                                 const ExpmActionParams& params = {});

// The general form regardless of x0 shape. Mixed initial states (some nodes
// certain, some fractional) land here.
BoundResult transformation_bound_general(const Graph& g, double beta, const StateVector& x0,
                                         std::span<const double> grid,
                                         const ExpmActionParams& params = {});

// Requires max x0 < 1:
//   y(t) = g(x0) + [exp(beta t A diag(1-x0)) - I] (x0 / (1-x0)).
BoundResult transformation_bound_interior(const Graph& g, double beta, const StateVector& x0,
                                          std::span<const double> grid,
                                          const ExpmActionParams& params = {});

// Requires x0 in {0,1}^n: y(t) = g(x0) + sum_k (beta t)^(k+1)/(k+1)! M^k A x0
// with M = A diag(1-x0); source nodes stay at +inf.
BoundResult transformation_bound_binary(const Graph& g, double beta, const StateVector& x0,
                                        std::span<const double> grid,
                                        const ExpmActionParams& params = {});

// Large-time single-mode approximation on the y scale, for max x0 < 1:
//   y(t) ~ xi exp(beta mu t) v - x0/(1-x0) + g(x0),
// where (mu, v, u) is the dominant eigenpair of A diag(1-x0) and
// xi = u . (x0/(1-x0)) under the normalization u.v = 1.
std::vector<double> transformation_asymptote(const Graph& g, double beta, const StateVector& x0,
                                             double t);

// The finite part of the transformed bound at a single time (source rows get
// their series value instead of +inf). This is the quantity whose time
// derivative equals exp(beta t A diag(1-x0)) beta A x0; reactive ranking and
// the derivative check below both consume it.
std::vector<double> transformation_yhat_finite(const Graph& g, double beta, const StateVector& x0,
                                               double t, const ExpmActionParams& params = {},
                                               int* terms_used = nullptr, bool* cap_hit = nullptr);

struct DerivativeCheckReport {
    double max_discrepancy = 0.0;       // max_i |finite difference - identity|
    std::vector<double> identity_value;  // exp(beta t M) beta A x0
    std::vector<double> fd_value;        // centered difference of the finite bound
};

// Cross-checks d/dt of the transformed bound against its closed-form
// derivative at time t using a centered difference with half-width h.
// Requires 0 < h < t.
DerivativeCheckReport bound_derivative_check(const Graph& g, double beta, const StateVector& x0,
                                             double t, double h,
                                             const ExpmActionParams& params = {});

}  // namespace epinet
