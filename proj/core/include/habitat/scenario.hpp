#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "habitat/motion.hpp"
#include "habitat/periodic.hpp"

namespace habitat {

/// Validation failure with the offending config field path.
class ScenarioError : public std::runtime_error {
public:
    ScenarioError(std::string field, const std::string& message)
        : std::runtime_error(field + ": " + message), field_(std::move(field)) {}
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

struct InitialDatum {
    enum class Kind { Sine, Tabulated };
    Kind kind = Kind::Sine;
    // Tabulated profile in moving coordinates y in [0, L(0)].
    std::vector<double> y, v;

    /// Evaluate at y in [0, L(0)] (moving coordinates at t = 0).
    double operator()(double y, double L0) const;
};

/// Full problem instance: growth/selection coefficients, habitat motion,
/// horizon and initial datum. Immutable after construction.
struct Scenario {
    double d = 1.0;       // diffusivity
    double r = 1.0;       // maximal growth rate
    double T = 1.0;       // period of alpha and beta
    double horizon = 1.0; // final simulation time
    PeriodicCoefficient alpha;
    PeriodicCoefficient beta;
    DomainMotion motion;
    InitialDatum initial;
    double c_shift = 0.0; // exponential shift constant; 0 means "use r + 1"

    double resolved_c_shift() const { return c_shift > 0.0 ? c_shift : r + 1.0; }

    /// Position of the growth optimum A(t) + beta(t) L(t).
    double x_opt(double t) const { return motion.A(t) + beta(t) * motion.L(t); }

    /// Growth term r - alpha(t)/2 (x - x_opt(t))^2 in physical coordinates.
    double growth(double t, double x) const {
        const double dx = x - x_opt(t);
        return r - 0.5 * alpha(t) * dx * dx;
    }

    /// Checks all invariants; throws ScenarioError with a field path.
    void validate() const;
};

/// Parse and validate a JSON configuration document.
Scenario parse_scenario(const std::string& text);

/// Serialize back to the config schema (used by run manifests).
std::string scenario_to_json(const Scenario& s);

double eval_x_opt(const Scenario& s, double t);

} // namespace habitat
