#include "epinet/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "epinet/errors.hpp"

namespace epinet {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void validate_x0(const Graph& g, const StateVector& x0) {
    if (x0.kind != StateKind::probability)
        throw std::invalid_argument("bound initial state must be on the probability scale");
    if (x0.values.size() != g.node_count())
        throw std::invalid_argument("bound initial state length mismatch");
    bool any = false;
    for (double v : x0.values) {
        if (!(v >= 0.0 && v <= 1.0))
            throw std::invalid_argument("initial probabilities must lie in [0,1]");
        any = any || v > 0.0;
    }
    if (!any) throw std::invalid_argument("initial state is identically zero");
}

enum class Shape { binary, interior, mixed };

Shape classify(const StateVector& x0) {
    bool binary = true, interior = true;
    for (double v : x0.values) {
        if (v != 0.0 && v != 1.0) binary = false;
        if (v == 1.0) interior = false;
    }
    if (binary) return Shape::binary;
    return interior ? Shape::interior : Shape::mixed;
}

// The three closed forms share this shape: evaluate the finite series part at
// one time, then let the caller place +inf on source rows and map to x.
struct FinitePoint {
    std::vector<double> y;
    int terms = 0;
    bool cap = false;
};

// General form: y(t) = exp(beta t M) g0 + [integral_0^t exp(s M) ds] A b(x0)
// with M = A diag(1-x0). Source rows have g0 replaced by 0, which is exact
// because diag(1-x0) zeroes those columns wherever g0 would have entered.
FinitePoint yhat_general(const Graph& g, double beta, const StateVector& x0, double t,
                         const ExpmActionParams& params) {
    const std::size_t n = g.node_count();
    std::vector<double> scale(n), g0(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
        double x = x0.values[i];
        scale[i] = 1.0 - x;
        g0[i] = x < 1.0 ? transform_g(x) : 0.0;
        b[i] = transform_b(x);
    }
    std::vector<double> ab = matvec(g, b);
    ExpmActionResult hom = expm_action(g, scale, beta * t, g0, params);
    ExpmActionResult inh = expm_action_integral(g, scale, beta * t, ab, params);
    FinitePoint p;
    p.y.resize(n);
    for (std::size_t i = 0; i < n; ++i) p.y[i] = hom.values[i] + inh.values[i];
    p.terms = std::max(hom.terms_used, inh.terms_used);
    p.cap = hom.cap_hit || inh.cap_hit;
    return p;
}

// Interior form: y(t) = g(x0) + [exp(beta t M) - I] w, w = x0/(1-x0).
FinitePoint yhat_interior(const Graph& g, double beta, const StateVector& x0, double t,
                          const ExpmActionParams& params) {
    const std::size_t n = g.node_count();
    std::vector<double> scale(n), w(n);
    for (std::size_t i = 0; i < n; ++i) {
        double x = x0.values[i];
        if (x >= 1.0) throw std::invalid_argument("interior form requires max x0 < 1");
        scale[i] = 1.0 - x;
        w[i] = x / (1.0 - x);
    }
    ExpmActionResult r = expm_action(g, scale, beta * t, w, params);
    FinitePoint p;
    p.y.resize(n);
    for (std::size_t i = 0; i < n; ++i) p.y[i] = transform_g(x0.values[i]) + r.values[i] - w[i];
    p.terms = r.terms_used;
    p.cap = r.cap_hit;
    return p;
}

// Binary form: the homogeneous part vanishes (g(x0) is 0 on susceptible rows
// and killed by diag(1-x0) on source rows) and b(x0) = x0.
FinitePoint yhat_binary(const Graph& g, double beta, const StateVector& x0, double t,
                        const ExpmActionParams& params) {
    const std::size_t n = g.node_count();
    std::vector<double> scale(n);
    for (std::size_t i = 0; i < n; ++i) {
        double x = x0.values[i];
        if (x != 0.0 && x != 1.0)
            throw std::invalid_argument("binary form requires x0 in {0,1}");
        scale[i] = 1.0 - x;
    }
    ExpmActionResult r = expm_action_integral(g, scale, beta * t, matvec(g, x0.values), params);
    FinitePoint p;
    p.y = std::move(r.values);
    p.terms = r.terms_used;
    p.cap = r.cap_hit;
    return p;
}

FinitePoint yhat_dispatch(const Graph& g, double beta, const StateVector& x0, double t,
                          const ExpmActionParams& params, Shape shape) {
    switch (shape) {
        case Shape::binary:
            return yhat_binary(g, beta, x0, t, params);
        case Shape::interior:
            return yhat_interior(g, beta, x0, t, params);
        case Shape::mixed:
            return yhat_general(g, beta, x0, t, params);
    }
    throw std::logic_error("unreachable");
}

BoundResult assemble_transform_result(const Graph& g, double beta, const StateVector& x0,
                                      std::span<const double> grid,
                                      const ExpmActionParams& params, Shape shape,
                                      BoundMethod method) {
    validate_x0(g, x0);
    const std::size_t n = g.node_count();
    BoundResult out;
    out.method = method;
    out.probability.kind = StateKind::probability;
    out.transformed.kind = StateKind::transformed;
    out.probability.times.assign(grid.begin(), grid.end());
    out.transformed.times.assign(grid.begin(), grid.end());
    for (double t : grid) {
        FinitePoint p = yhat_dispatch(g, beta, x0, t, params, shape);
        std::vector<double> x(n);
        for (std::size_t i = 0; i < n; ++i) {
            if (x0.values[i] == 1.0) p.y[i] = kInf;
            x[i] = transform_f(p.y[i]);
        }
        out.transformed.states.push_back(std::move(p.y));
        out.probability.states.push_back(std::move(x));
        out.series_terms.push_back(p.terms);
        out.series_cap_hit.push_back(p.cap ? 1 : 0);
    }
    return out;
}

}  // namespace

BoundResult linearization_bound(const Graph& g, double beta, const StateVector& x0,
                                std::span<const double> grid, const ExpmActionParams& params) {
    validate_x0(g, x0);
    if (!(beta >= 0.0)) throw std::invalid_argument("beta must be nonnegative");
    BoundResult out;
    out.method = BoundMethod::linearization;
    out.probability.kind = StateKind::probability;
    out.probability.times.assign(grid.begin(), grid.end());
    for (double t : grid) {
        ExpmActionResult r = expm_action(g, {}, beta * t, x0.values, params);
        out.probability.states.push_back(std::move(r.values));
        out.series_terms.push_back(r.terms_used);
        out.series_cap_hit.push_back(r.cap_hit ? 1 : 0);
    }
    return out;
}

std::vector<double> evc_asymptote(const Graph& g, double beta, const StateVector& x0, double t) {
    validate_x0(g, x0);
    EigenPair pair = dominant_eigenpair(g, {}, false);
    double xi = 0.0;
    for (std::size_t i = 0; i < g.node_count(); ++i) xi += pair.right[i] * x0.values[i];
    double amp = xi * std::exp(beta * pair.value * t);
    std::vector<double> out(pair.right);
    for (double& v : out) v *= amp;
    return out;
}

BoundResult transformation_bound(const Graph& g, double beta, const StateVector& x0,
                                 std::span<const double> grid, const ExpmActionParams& params) {
    validate_x0(g, x0);
    Shape shape = classify(x0);
    BoundMethod method = shape == Shape::binary     ? BoundMethod::transformation_binary
                         : shape == Shape::interior ? BoundMethod::transformation_interior
                                                    : BoundMethod::transformation_general;
    return assemble_transform_result(g, beta, x0, grid, params, shape, method);
}

BoundResult transformation_bound_general(const Graph& g, double beta, const StateVector& x0,
                                         std::span<const double> grid,
                                         const ExpmActionParams& params) {
    return assemble_transform_result(g, beta, x0, grid, params, Shape::mixed,
                                     BoundMethod::transformation_general);
}

BoundResult transformation_bound_interior(const Graph& g, double beta, const StateVector& x0,
                                          std::span<const double> grid,
                                          const ExpmActionParams& params) {
    return assemble_transform_result(g, beta, x0, grid, params, Shape::interior,
                                     BoundMethod::transformation_interior);
}

BoundResult transformation_bound_binary(const Graph& g, double beta, const StateVector& x0,
                                        std::span<const double> grid,
                                        const ExpmActionParams& params) {
    return assemble_transform_result(g, beta, x0, grid, params, Shape::binary,
                                     BoundMethod::transformation_binary);
}

std::vector<double> transformation_asymptote(const Graph& g, double beta, const StateVector& x0,
                                             double t) {
    validate_x0(g, x0);
    const std::size_t n = g.node_count();
    std::vector<double> scale(n), w(n);
    for (std::size_t i = 0; i < n; ++i) {
        double x = x0.values[i];
        if (x >= 1.0)
            throw std::invalid_argument("asymptotic form requires max x0 < 1");
        scale[i] = 1.0 - x;
        w[i] = x / (1.0 - x);
    }
    EigenPair pair = dominant_eigenpair(g, scale, true);
    double xi = 0.0;
    for (std::size_t i = 0; i < n; ++i) xi += pair.left[i] * w[i];
    double amp = xi * std::exp(beta * pair.value * t);
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = amp * pair.right[i] - w[i] + transform_g(x0.values[i]);
    return out;
}

std::vector<double> transformation_yhat_finite(const Graph& g, double beta, const StateVector& x0,
                                               double t, const ExpmActionParams& params,
                                               int* terms_used, bool* cap_hit) {
    validate_x0(g, x0);
    FinitePoint p = yhat_dispatch(g, beta, x0, t, params, classify(x0));
    if (terms_used) *terms_used = p.terms;
    if (cap_hit) *cap_hit = p.cap;
    return p.y;
}

DerivativeCheckReport bound_derivative_check(const Graph& g, double beta, const StateVector& x0,
                                             double t, double h, const ExpmActionParams& params) {
    validate_x0(g, x0);
    if (!(h > 0.0 && h < t)) throw std::invalid_argument("need 0 < h < t");
    const std::size_t n = g.node_count();
    Shape shape = classify(x0);
    FinitePoint lo = yhat_dispatch(g, beta, x0, t - h, params, shape);
    FinitePoint hi = yhat_dispatch(g, beta, x0, t + h, params, shape);

    std::vector<double> scale(n);
    for (std::size_t i = 0; i < n; ++i) scale[i] = 1.0 - x0.values[i];
    std::vector<double> bax = matvec(g, x0.values);
    for (double& v : bax) v *= beta;
    ExpmActionResult ident = expm_action(g, scale, beta * t, bax, params);

    DerivativeCheckReport report;
    report.identity_value = std::move(ident.values);
    report.fd_value.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        report.fd_value[i] = (hi.y[i] - lo.y[i]) / (2.0 * h);
        report.max_discrepancy =
            std::max(report.max_discrepancy,
                     std::abs(report.fd_value[i] - report.identity_value[i]));
    }
    return report;
}

}  // namespace epinet
