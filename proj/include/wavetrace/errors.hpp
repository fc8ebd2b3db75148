#pragma once

#include <memory>
#include <stdexcept>
#include <string>

namespace wavetrace {

struct TrajectoryBundle;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RangeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Fan spatial ordering violated: two adjacent rays crossed, so the
/// single-valued wavefront parametrization breaks down.
struct CausticError : std::runtime_error {
    int step_index;
    int ray_lo;
    int ray_hi;
    std::shared_ptr<TrajectoryBundle> partial;  // may be null outside run()

    CausticError(int step, int lo, int hi)
        : std::runtime_error("trajectory crossing at step " + std::to_string(step) +
                             " between rays " + std::to_string(lo) + " and " +
                             std::to_string(hi)),
          step_index(step), ray_lo(lo), ray_hi(hi) {}
};

struct NumericalBlowupError : std::runtime_error {
    int step_index;
    int ray_index;
    std::shared_ptr<TrajectoryBundle> partial;

    NumericalBlowupError(int step, int ray)
        : std::runtime_error("non-finite state at step " + std::to_string(step) +
                             ", ray " + std::to_string(ray)),
          step_index(step), ray_index(ray) {}
};

/// |rho_x| reached 1: the ray is no longer forward-propagating and the
/// constraint rho_z = sqrt(1 - rho_x^2) has no real forward solution.
struct TurnedRayError : std::runtime_error {
    int ray_index;

    explicit TurnedRayError(int ray)
        : std::runtime_error("ray " + std::to_string(ray) +
                             " turned back (|rho_x| >= 1)"),
          ray_index(ray) {}
};

struct OracleResolutionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace wavetrace
