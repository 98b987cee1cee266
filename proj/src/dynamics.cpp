#include "epinet/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/numeric/odeint.hpp>

#include "epinet/errors.hpp"

namespace epinet {

double transform_g(double x) {
    if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error("transform_g: x outside [0,1]");
    return -std::log1p(-x);  // log1p(-1) = -inf, so g(1) = +inf exactly
}

double transform_f(double y) {
    if (!(y >= 0.0)) throw std::domain_error("transform_f: y must be nonnegative");
    return -std::expm1(-y);  // y = +inf maps to 1 exactly
}

double transform_b(double x) {
    if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error("transform_b: x outside [0,1]");
    if (x == 1.0) return 1.0;  // (1-x) log(1-x) -> 0 as x -> 1
    return x + (1.0 - x) * std::log1p(-x);
}

std::vector<double> transform_g(std::span<const double> x) {
    std::vector<double> out(x.size());
    std::transform(x.begin(), x.end(), out.begin(), [](double v) { return transform_g(v); });
    return out;
}

std::vector<double> transform_f(std::span<const double> y) {
    std::vector<double> out(y.size());
    std::transform(y.begin(), y.end(), out.begin(), [](double v) { return transform_f(v); });
    return out;
}

std::vector<double> transform_b(std::span<const double> x) {
    std::vector<double> out(x.size());
    std::transform(x.begin(), x.end(), out.begin(), [](double v) { return transform_b(v); });
    return out;
}

namespace {

void validate_grid(std::span<const double> grid) {
    if (grid.empty()) throw std::invalid_argument("time grid is empty");
    if (!(grid[0] >= 0.0)) throw std::invalid_argument("time grid starts before 0");
    for (std::size_t k = 1; k < grid.size(); ++k)
        if (!(grid[k] > grid[k - 1]))
            throw std::invalid_argument("time grid must be strictly increasing");
}

}  // namespace

std::vector<std::vector<double>> integrate_ode(const OdeRhs& rhs, std::vector<double> y0,
                                               std::span<const double> grid, const Accuracy& acc,
                                               const OdeCallbacks& callbacks) {
    namespace ode = boost::numeric::odeint;
    validate_grid(grid);
    if (y0.empty()) throw std::invalid_argument("empty initial state");

    using state_type = std::vector<double>;
    auto stepper = ode::make_controlled(acc.abs_tol, acc.rel_tol,
                                        ode::runge_kutta_dopri5<state_type>());
    auto system = [&rhs](const state_type& y, state_type& dydt, double t) { rhs(t, y, dydt); };

    std::vector<state_type> out;
    out.reserve(grid.size());
    state_type y = std::move(y0);
    double t = 0.0;
    double dt = std::max(grid.back(), 1e-6) * 1e-3;
    long steps = 0;
    const long max_steps = 50'000'000;

    for (double target : grid) {
        while (t < target * (1.0 - 1e-15) || (target == 0.0 && t < 0.0)) {
            bool truncated = false;
            double trial = dt;
            if (t + trial > target) {
                trial = target - t;
                truncated = true;
            }
            auto result = stepper.try_step(system, y, t, trial);
            if (result == ode::controlled_step_result::success) {
                if (callbacks.post_step) callbacks.post_step(t, y);
                if (callbacks.on_accept) callbacks.on_accept(t, y);
                if (!truncated || trial > dt) dt = trial;  // trial now holds the suggestion
            } else {
                dt = trial;  // reduced by the controller
                if (dt < 1e-14 * std::max(1.0, std::abs(t)))
                    throw IntegrationError("step size underflow", t);
            }
            if (++steps > max_steps) throw IntegrationError("step budget exhausted", t);
        }
        t = target;  // absorb the sub-ulp landing error
        out.push_back(y);
    }
    return out;
}

namespace {

Trajectory integrate_epidemic(const Graph& g, const ModelParams& params, const StateVector& x0,
                              std::span<const double> grid, const Accuracy& acc, bool with_curing) {
    const std::size_t n = g.node_count();
    if (x0.kind != StateKind::probability)
        throw std::invalid_argument("initial state must be on the probability scale");
    if (x0.values.size() != n) throw std::invalid_argument("initial state length mismatch");
    if (!(params.beta >= 0.0)) throw std::invalid_argument("beta must be nonnegative");
    if (with_curing && !(params.delta >= 0.0))
        throw std::invalid_argument("delta must be nonnegative");

    bool all_zero = true, all_one = true;
    for (double v : x0.values) {
        if (!(v >= 0.0 && v <= 1.0))
            throw std::invalid_argument("initial probabilities must lie in [0,1]");
        all_zero = all_zero && v == 0.0;
        all_one = all_one && v == 1.0;
    }
    if (all_zero) throw std::invalid_argument("initial state is identically zero");
    // All-one is stationary for pure infection but decays under curing.
    if (all_one && !(with_curing && params.delta > 0.0))
        throw std::invalid_argument("initial state is identically one");

    const double beta = params.beta;
    const double delta = with_curing ? params.delta : 0.0;
    OdeRhs rhs = [&g, beta, delta, n](double, const std::vector<double>& x,
                                      std::vector<double>& dxdt) {
        std::vector<double> ax = matvec(g, x);
        dxdt.resize(n);
        for (std::size_t i = 0; i < n; ++i)
            dxdt[i] = beta * (1.0 - x[i]) * ax[i] - delta * x[i];
    };
    OdeCallbacks cb;
    cb.post_step = [](double, std::vector<double>& x) {
        for (double& v : x) v = std::clamp(v, 0.0, 1.0);
    };

    Trajectory traj;
    traj.kind = StateKind::probability;
    traj.times.assign(grid.begin(), grid.end());
    traj.states = integrate_ode(rhs, x0.values, grid, acc, cb);
    return traj;
}

}  // namespace

Trajectory integrate_si(const Graph& g, const ModelParams& params, const StateVector& x0,
                        std::span<const double> grid, const Accuracy& acc) {
    return integrate_epidemic(g, params, x0, grid, acc, false);
}

Trajectory integrate_sis(const Graph& g, const ModelParams& params, const StateVector& x0,
                         std::span<const double> grid, const Accuracy& acc) {
    return integrate_epidemic(g, params, x0, grid, acc, true);
}

}  // namespace epinet
