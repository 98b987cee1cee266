#pragma once

#include <span>
#include <utility>
#include <vector>

#include "epinet/graph.hpp"

namespace epinet {

// Controls for the truncated Taylor series behind expm_action and
// expm_action_integral. max_terms == 0 picks a cap from tau and the maximum
// degree; the cap exists to bound work, the tolerance normally stops first.
struct ExpmActionParams {
    double series_tol = 1e-12;
    int max_terms = 0;
};

struct ExpmActionResult {
    std::vector<double> values;
    int terms_used = 0;    // highest power of M accumulated
    bool cap_hit = false;  // stopped by max_terms instead of the tolerance
};

// exp(tau * M) * v with M = A * diag(scale), evaluated as
//   sum_k tau^k / k! * M^k v,
// stopping once a term's infinity norm drops below series_tol times the
// partial sum's infinity norm. Empty scale means M = A. Throws SeriesError if
// the accumulation leaves the finite range.
ExpmActionResult expm_action(const Graph& g, std::span<const double> scale, double tau,
                             std::span<const double> v, const ExpmActionParams& params = {});

// integral_0^tau exp(s * M) ds * w  =  sum_k tau^(k+1) / (k+1)! * M^k w,
// same stopping rule and error reporting as expm_action.
ExpmActionResult expm_action_integral(const Graph& g, std::span<const double> scale, double tau,
                                      std::span<const double> w,
                                      const ExpmActionParams& params = {});

struct EigenPair {
    double value = 0.0;
    std::vector<double> right;  // unit 2-norm, nonnegative
    std::vector<double> left;   // scaled so that dot(left, right) == 1; empty unless requested
};

// Dominant eigenpair of M = A * diag(scale) by shifted power iteration
// (iterating M + I keeps bipartite-like spectra from oscillating; the shift
// cancels out of the reported eigenvalue). The graph must be connected after
// scaling so the dominant pair is simple and positive. Converged when
// successive normalized iterates agree to tol in the infinity norm and the
// residual ||Mv - value*v||_inf is below 10*tol. Throws ConvergenceError
// otherwise.
EigenPair dominant_eigenpair(const Graph& g, std::span<const double> scale, bool want_left,
                             double tol = 1e-12, int max_iters = 100000);

// {max(mean degree, sqrt(max degree)), max degree}: a bracket for the
// adjacency spectral radius.
std::pair<double, double> spectral_radius_bounds(const Graph& g);

}  // namespace epinet
