#include "epinet/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

#include "epinet/errors.hpp"

namespace epinet {

namespace {

double inf_norm(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

bool all_finite(const std::vector<double>& v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

int auto_cap(const Graph& g, double tau) {
    double dmax = static_cast<double>(degree_summary(g).max_degree);
    double cap = 10.0 * (1.0 + std::ceil(tau * dmax));
    return cap > 1e9 ? 1000000000 : static_cast<int>(cap);
}

// Accumulates sum_k c_k M^k u where c_k = tau^k/k! (exp mode, u = v) or
// c_k = tau^(k+1)/(k+1)! (integral mode, u = w). The term recurrences differ
// only in the scalar factor. Terms can grow before the factorial wins, so the
// stop rule requires two consecutive terms below tolerance.
ExpmActionResult run_series(const Graph& g, std::span<const double> scale, double tau,
                            std::span<const double> u, const ExpmActionParams& params,
                            bool integral) {
    const std::size_t n = g.node_count();
    if (u.size() != n) throw std::invalid_argument("series input length mismatch");
    if (!scale.empty() && scale.size() != n)
        throw std::invalid_argument("series scale length mismatch");
    if (!(tau >= 0.0)) throw std::invalid_argument("tau must be nonnegative");
    if (params.series_tol <= 0.0) throw std::invalid_argument("series_tol must be positive");

    ExpmActionResult r;
    if (tau == 0.0) {
        r.values.assign(u.begin(), u.end());
        if (integral) std::fill(r.values.begin(), r.values.end(), 0.0);
        return r;
    }

    std::vector<double> term(u.begin(), u.end());
    if (integral)
        for (double& x : term) x *= tau;
    std::vector<double> sum = term;
    if (!all_finite(sum)) throw SeriesError("non-finite series input");

    const int cap = params.max_terms > 0 ? params.max_terms : auto_cap(g, tau);
    double prev_tnorm = std::numeric_limits<double>::infinity();
    for (int k = 0;; ++k) {
        double tnorm = inf_norm(term);
        double snorm = inf_norm(sum);
        if (!std::isfinite(snorm) || !std::isfinite(tnorm))
            throw SeriesError("series accumulation overflowed");
        if (tnorm == 0.0 ||
            (tnorm <= params.series_tol * snorm && prev_tnorm <= params.series_tol * snorm)) {
            r.terms_used = k;
            break;
        }
        if (k >= cap) {
            r.terms_used = k;
            r.cap_hit = true;
            break;
        }
        prev_tnorm = tnorm;
        std::vector<double> mt = matvec(g, term, scale);
        double factor = integral ? tau / static_cast<double>(k + 2)
                                 : tau / static_cast<double>(k + 1);
        for (std::size_t i = 0; i < n; ++i) {
            term[i] = factor * mt[i];
            sum[i] += term[i];
        }
    }
    r.values = std::move(sum);
    return r;
}

}  // namespace

ExpmActionResult expm_action(const Graph& g, std::span<const double> scale, double tau,
                             std::span<const double> v, const ExpmActionParams& params) {
    return run_series(g, scale, tau, v, params, false);
}

ExpmActionResult expm_action_integral(const Graph& g, std::span<const double> scale, double tau,
                                      std::span<const double> w, const ExpmActionParams& params) {
    return run_series(g, scale, tau, w, params, true);
}

namespace {

// Power iteration on M + I. The shift keeps iterates from oscillating on
// bipartite spectra and drops out of the Rayleigh quotient taken against M.
std::pair<double, std::vector<double>> power_iterate(
    std::size_t n, const std::function<std::vector<double>(const std::vector<double>&)>& apply,
    double tol, int max_iters) {
    std::vector<double> v(n, 1.0 / std::sqrt(static_cast<double>(n)));
    double resid = std::numeric_limits<double>::infinity();
    for (int it = 0; it < max_iters; ++it) {
        std::vector<double> mv = apply(v);
        std::vector<double> w(n);
        double nrm2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            w[i] = mv[i] + v[i];
            nrm2 += w[i] * w[i];
        }
        nrm2 = std::sqrt(nrm2);
        if (!(nrm2 > 0.0) || !std::isfinite(nrm2))
            throw ConvergenceError("power iteration broke down", v, resid);
        double diff = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            w[i] /= nrm2;
            diff = std::max(diff, std::abs(w[i] - v[i]));
        }
        v.swap(w);
        if (diff < tol) {
            std::vector<double> mv2 = apply(v);
            double mu = 0.0, vv = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                mu += v[i] * mv2[i];
                vv += v[i] * v[i];
            }
            mu /= vv;
            resid = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                resid = std::max(resid, std::abs(mv2[i] - mu * v[i]));
            if (resid < 10.0 * tol) return {mu, std::move(v)};
        }
    }
    throw ConvergenceError("power iteration did not converge", v, resid);
}

}  // namespace

EigenPair dominant_eigenpair(const Graph& g, std::span<const double> scale, bool want_left,
                             double tol, int max_iters) {
    const std::size_t n = g.node_count();
    if (!scale.empty() && scale.size() != n)
        throw std::invalid_argument("eigenpair scale length mismatch");

    auto apply_right = [&](const std::vector<double>& x) { return matvec(g, x, scale); };
    auto [mu, right] = power_iterate(n, apply_right, tol, max_iters);

    EigenPair pair;
    pair.value = mu;
    pair.right = std::move(right);
    if (want_left) {
        // M^T x = diag(scale) A x.
        auto apply_left = [&](const std::vector<double>& x) {
            std::vector<double> ax = matvec(g, x);
            if (!scale.empty())
                for (std::size_t i = 0; i < n; ++i) ax[i] *= scale[i];
            return ax;
        };
        auto [mu_left, left] = power_iterate(n, apply_left, tol, max_iters);
        (void)mu_left;
        double dot = 0.0;
        for (std::size_t i = 0; i < n; ++i) dot += left[i] * pair.right[i];
        if (!(std::abs(dot) > 0.0))
            throw ConvergenceError("left/right eigenvectors are orthogonal", left, 0.0);
        for (double& x : left) x /= dot;
        pair.left = std::move(left);
    }
    return pair;
}

std::pair<double, double> spectral_radius_bounds(const Graph& g) {
    DegreeSummary s = degree_summary(g);
    double lower = std::max(s.mean_degree, std::sqrt(static_cast<double>(s.max_degree)));
    return {lower, static_cast<double>(s.max_degree)};
}

}  // namespace epinet
