#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace epinet {

// Malformed input while reading an edge list. Carries the 1-based line number.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t line)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

// Power iteration failed to converge. Carries the last iterate and its residual
// so callers can inspect or restart.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, std::vector<double> last_iterate, double residual)
        : std::runtime_error(what), last_iterate_(std::move(last_iterate)), residual_(residual) {}
    const std::vector<double>& last_iterate() const { return last_iterate_; }
    double residual() const { return residual_; }

private:
    std::vector<double> last_iterate_;
    double residual_;
};

// Adaptive integration could not proceed (step underflow or step budget
// exhausted). Carries the time actually reached.
class IntegrationError : public std::runtime_error {
public:
    IntegrationError(const std::string& what, double time_reached)
        : std::runtime_error(what + " (reached t=" + std::to_string(time_reached) + ")"),
          time_reached_(time_reached) {}
    double time_reached() const { return time_reached_; }

private:
    double time_reached_;
};

// Non-finite value produced while accumulating a truncated matrix series.
class SeriesError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace epinet
