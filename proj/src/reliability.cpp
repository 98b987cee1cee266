#include "epinet/reliability.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace epinet {

namespace {

void validate_state(const Graph& g, const StateVector& x, bool reject_all_zero) {
    if (x.kind != StateKind::probability)
        throw std::invalid_argument("state must be on the probability scale");
    if (x.values.size() != g.node_count())
        throw std::invalid_argument("state length mismatch");
    bool any = false;
    for (double v : x.values) {
        if (!(v >= 0.0 && v <= 1.0))
            throw std::invalid_argument("probabilities must lie in [0,1]");
        any = any || v > 0.0;
    }
    if (reject_all_zero && !any) throw std::invalid_argument("state is identically zero");
}

// Integrates [x; H] jointly; H_i' = beta (A x)_i carries no feedback into x,
// so x follows the plain SI flow while H picks up the exact cumulative
// hazard under the same step-size control.
std::vector<std::vector<double>> integrate_with_hazard(const Graph& g, double beta,
                                                       const StateVector& x0,
                                                       std::span<const double> grid,
                                                       const Accuracy& acc) {
    const std::size_t n = g.node_count();
    OdeRhs rhs = [&g, beta, n](double, const std::vector<double>& y, std::vector<double>& dydt) {
        std::vector<double> x(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(n));
        std::vector<double> ax = matvec(g, x);
        dydt.resize(2 * n);
        for (std::size_t i = 0; i < n; ++i) {
            dydt[i] = beta * (1.0 - y[i]) * ax[i];
            dydt[n + i] = beta * ax[i];
        }
    };
    OdeCallbacks cb;
    cb.post_step = [n](double, std::vector<double>& y) {
        for (std::size_t i = 0; i < n; ++i) y[i] = std::clamp(y[i], 0.0, 1.0);
    };
    std::vector<double> y0(2 * n, 0.0);
    std::copy(x0.values.begin(), x0.values.end(), y0.begin());
    return integrate_ode(rhs, std::move(y0), grid, acc, cb);
}

}  // namespace

std::vector<double> hazard_from_state(const Graph& g, double beta, const StateVector& x) {
    validate_state(g, x, false);
    if (!(beta >= 0.0)) throw std::invalid_argument("beta must be nonnegative");
    std::vector<double> h = matvec(g, x.values);
    for (double& v : h) v *= beta;
    return h;
}

HazardCurve hazard_curve(const Graph& g, double beta, const StateVector& x0,
                         std::span<const double> grid, const Accuracy& acc) {
    validate_state(g, x0, true);
    const std::size_t n = g.node_count();
    auto joint = integrate_with_hazard(g, beta, x0, grid, acc);
    HazardCurve curve;
    curve.times.assign(grid.begin(), grid.end());
    curve.hazard.reserve(grid.size());
    curve.cumulative.reserve(grid.size());
    for (auto& y : joint) {
        std::vector<double> x(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(n));
        std::vector<double> h = matvec(g, x);
        for (double& v : h) v *= beta;
        curve.hazard.push_back(std::move(h));
        curve.cumulative.emplace_back(y.begin() + static_cast<std::ptrdiff_t>(n), y.end());
    }
    return curve;
}

SurvivalCurves survival_curve(const Graph& g, double beta, const StateVector& x0,
                              std::span<const double> grid, const Accuracy& acc) {
    HazardCurve hc = hazard_curve(g, beta, x0, grid, acc);
    SurvivalCurves out;
    out.times = std::move(hc.times);
    out.survival.reserve(hc.cumulative.size());
    const std::size_t n = g.node_count();
    for (auto& H : hc.cumulative) {
        std::vector<double> s(n);
        for (std::size_t i = 0; i < n; ++i)
            s[i] = (1.0 - x0.values[i]) * std::exp(-H[i]);
        out.survival.push_back(std::move(s));
    }
    return out;
}

TransformedIdentityReport transformed_identity_check(const Graph& g, double beta,
                                                     const StateVector& x0,
                                                     std::span<const double> grid,
                                                     const Accuracy& acc, double fd_step) {
    validate_state(g, x0, true);
    for (double v : x0.values)
        if (v >= 1.0)
            throw std::invalid_argument("identity check requires max x0 < 1");
    if (!(fd_step > 0.0)) throw std::invalid_argument("fd_step must be positive");

    const std::size_t n = g.node_count();
    TransformedIdentityReport report;

    auto joint = integrate_with_hazard(g, beta, x0, grid, acc);
    for (std::size_t k = 0; k < grid.size(); ++k) {
        for (std::size_t i = 0; i < n; ++i) {
            double lhs = transform_g(joint[k][i]);
            double rhs = transform_g(x0.values[i]) + joint[k][n + i];
            report.max_value_discrepancy =
                std::max(report.max_value_discrepancy, std::abs(lhs - rhs));
        }
    }

    // Slope check at up to eight interior grid times.
    std::vector<double> samples;
    for (double t : grid)
        if (t > fd_step) samples.push_back(t);
    if (samples.size() > 8) {
        std::vector<double> picked;
        for (std::size_t j = 0; j < 8; ++j)
            picked.push_back(samples[j * (samples.size() - 1) / 7]);
        picked.erase(std::unique(picked.begin(), picked.end()), picked.end());
        samples = std::move(picked);
    }
    if (!samples.empty()) {
        std::vector<double> refined;
        for (double t : samples) {
            refined.push_back(t - fd_step);
            refined.push_back(t);
            refined.push_back(t + fd_step);
        }
        std::sort(refined.begin(), refined.end());
        refined.erase(std::unique(refined.begin(), refined.end()), refined.end());
        auto fine = integrate_with_hazard(g, beta, x0, refined, acc);
        auto at = [&refined, &fine](double t) -> const std::vector<double>& {
            auto it = std::lower_bound(refined.begin(), refined.end(), t);
            return fine[static_cast<std::size_t>(it - refined.begin())];
        };
        for (double t : samples) {
            const auto& lo = at(t - fd_step);
            const auto& mid = at(t);
            const auto& hi = at(t + fd_step);
            std::vector<double> x(mid.begin(), mid.begin() + static_cast<std::ptrdiff_t>(n));
            std::vector<double> h = matvec(g, x);
            for (std::size_t i = 0; i < n; ++i) {
                double slope =
                    (transform_g(hi[i]) - transform_g(lo[i])) / (2.0 * fd_step);
                report.max_derivative_discrepancy = std::max(
                    report.max_derivative_discrepancy, std::abs(slope - beta * h[i]));
            }
        }
    }
    return report;
}

std::vector<std::vector<double>> residual_life_distribution(const Graph& g, double beta,
                                                            const StateVector& x0, double age,
                                                            std::span<const double> lookahead,
                                                            const Accuracy& acc) {
    validate_state(g, x0, true);
    if (!(age >= 0.0)) throw std::invalid_argument("age must be nonnegative");
    if (lookahead.empty()) throw std::invalid_argument("lookahead grid is empty");
    for (std::size_t k = 0; k < lookahead.size(); ++k) {
        if (!(lookahead[k] >= 0.0))
            throw std::invalid_argument("lookahead must be nonnegative");
        if (k > 0 && !(lookahead[k] > lookahead[k - 1]))
            throw std::invalid_argument("lookahead must be strictly increasing");
    }

    const std::size_t n = g.node_count();
    std::vector<double> times;
    times.push_back(age);
    for (double u : lookahead) times.push_back(age + u);
    std::sort(times.begin(), times.end());
    times.erase(std::unique(times.begin(), times.end()), times.end());
    bool drop_zero = times.front() == 0.0;
    std::span<const double> positive(times.data() + (drop_zero ? 1 : 0),
                                     times.size() - (drop_zero ? 1 : 0));

    std::vector<std::vector<double>> H(times.size(), std::vector<double>(n, 0.0));
    if (!positive.empty()) {
        auto joint = integrate_with_hazard(g, beta, x0, positive, acc);
        for (std::size_t k = 0; k < positive.size(); ++k)
            H[k + (drop_zero ? 1 : 0)].assign(joint[k].begin() + static_cast<std::ptrdiff_t>(n),
                                              joint[k].end());
    }
    auto h_at = [&times, &H](double t) -> const std::vector<double>& {
        auto it = std::lower_bound(times.begin(), times.end(), t);
        return H[static_cast<std::size_t>(it - times.begin())];
    };

    const auto& H_age = h_at(age);
    std::vector<std::vector<double>> out;
    out.reserve(lookahead.size());
    for (double u : lookahead) {
        const auto& H_end = h_at(age + u);
        std::vector<double> row(n);
        for (std::size_t i = 0; i < n; ++i) row[i] = std::exp(-(H_end[i] - H_age[i]));
        out.push_back(std::move(row));
    }
    return out;
}

}  // namespace epinet
