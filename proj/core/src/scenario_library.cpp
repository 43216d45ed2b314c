#include "habitat/scenario_library.hpp"

#include <numbers>
#include <sstream>
#include <stdexcept>

namespace habitat {

namespace {

constexpr double kPi = std::numbers::pi;

Scenario make(double d, double r, double T, double horizon, PeriodicCoefficient alpha,
              PeriodicCoefficient beta, DomainMotion motion) {
    Scenario s;
    s.d = d;
    s.r = r;
    s.T = T;
    s.horizon = horizon;
    s.alpha = std::move(alpha);
    s.beta = std::move(beta);
    s.motion = std::move(motion);
    return s;
}

std::vector<NamedScenario> build_library() {
    std::vector<NamedScenario> lib;

    // Fixed domain, seasonal optimum sweeping the whole habitat.
    // d=10, r=17.5, alpha=5, beta=1/2+1/2 sin(2t), L=3.
    lib.push_back({"seasonal-optimum",
                   "fixed habitat with a periodically sweeping optimum (survival)",
                   make(10.0, 17.5, kPi, 4.0, PeriodicCoefficient::constant(5.0, kPi),
                        PeriodicCoefficient(0.5, {{0.5, 1, 0.0}}, kPi), DomainMotion::fixed(3.0))});

    // Sub-linear shift A = sqrt(1+t)-1, L=2; optimum leaning left or right.
    // d=1, r=4.1, alpha=7+0.2 sin t, beta = 0.2-0.1 sin(4t) / 0.8+0.1 sin(4t).
    const double T5 = 2.0 * kPi;
    lib.push_back({"sublinear-shift-left",
                   "sub-linear habitat shift, optimum near the trailing edge",
                   make(1.0, 4.1, T5, 10.0, PeriodicCoefficient(7.0, {{0.2, 1, 0.0}}, T5),
                        PeriodicCoefficient(0.2, {{-0.1, 4, 0.0}}, T5),
                        DomainMotion::power_shift(1.0, 0.5, 2.0))});
    lib.push_back({"sublinear-shift-right",
                   "sub-linear habitat shift, optimum near the leading edge",
                   make(1.0, 4.1, T5, 10.0, PeriodicCoefficient(7.0, {{0.2, 1, 0.0}}, T5),
                        PeriodicCoefficient(0.8, {{0.1, 4, 0.0}}, T5),
                        DomainMotion::power_shift(1.0, 0.5, 2.0))});

    // Super-linear shift, exponent 1.35, L=35.
    // d=7, r=1.25, alpha=0.4+0.04 sin t, beta=0.5+0.1 sin t.
    lib.push_back({"superlinear-shift", "super-linear habitat shift (extinction)",
                   make(7.0, 1.25, T5, 30.0, PeriodicCoefficient(0.4, {{0.04, 1, 0.0}}, T5),
                        PeriodicCoefficient(0.5, {{0.1, 1, 0.0}}, T5),
                        DomainMotion::power_shift(1.0, 1.35, 35.0))});

    // Linear shift A = 2t, L=3; three optimum placements.
    // d=1.6, r=4.8, alpha=5+0.1 sin(4t), beta = 0.1-0.1 sin t / 0.5+0.1 sin t
    // / 0.9+0.1 sin t.
    auto linear = [&](double beta_mean, double beta_amp) {
        return make(1.6, 4.8, T5, 4.0, PeriodicCoefficient(5.0, {{0.1, 4, 0.0}}, T5),
                    PeriodicCoefficient(beta_mean, {{beta_amp, 1, 0.0}}, T5),
                    DomainMotion::power_shift(2.0, 1.0, 3.0));
    };
    lib.push_back({"linear-shift-left", "linear shift, optimum near the trailing edge",
                   linear(0.1, -0.1)});
    lib.push_back({"linear-shift-middle", "linear shift, optimum centered", linear(0.5, 0.1)});
    lib.push_back({"linear-shift-right", "linear shift, optimum near the leading edge",
                   linear(0.9, 0.1)});

    // Linear enlargement, A = 0, L = 1 + slope t.
    // d=1, r=3.5, alpha=3+0.2 sin(2t), beta=0.8+0.1 sin(2t).
    auto enlarge = [&](double slope, double horizon) {
        return make(1.0, 3.5, kPi, horizon, PeriodicCoefficient(3.0, {{0.2, 1, 0.0}}, kPi),
                    PeriodicCoefficient(0.8, {{0.1, 1, 0.0}}, kPi),
                    DomainMotion::linear_growth(1.0, slope));
    };
    lib.push_back({"enlargement-slow", "slowly enlarging habitat (survival)",
                   enlarge(0.3, 11.0)});
    // The norm peaks near t = 10 before the decay takes over; run past the
    // transient so the end-to-end probe reflects the asymptotic extinction.
    lib.push_back({"enlargement-fast", "rapidly enlarging habitat (extinction)",
                   enlarge(2.0, 25.0)});

    // Constant coefficients with the optimum outside the habitat; template
    // for the (L, r) phase diagram and the L-sweep study.
    auto outside = [&](double r, double L) {
        return make(1.0, r, 1.0, 2.0, PeriodicCoefficient::constant(4.0, 1.0),
                    PeriodicCoefficient::constant(1.5, 1.0), DomainMotion::fixed(L));
    };
    lib.push_back({"phase-diagram", "constant alpha=4, beta=1.5 phase-diagram template",
                   outside(15.0, 1.0)});
    lib.push_back({"lsweep-high-r", "L-sweep template at r=15", outside(15.0, 1.0)});
    lib.push_back({"lsweep-low-r", "L-sweep template at r=5", outside(5.0, 1.0)});

    // Selection-free benchmark with the explicit solution
    // sin(pi x / L) exp((r - d pi^2/L^2) t); alpha = 0 on purpose, so this
    // instance skips the positivity validation.
    lib.push_back({"benchmark-no-selection", "fixed domain, alpha=0 convergence benchmark",
                   make(1.0, 6.0, 1.0, 1.0, PeriodicCoefficient::constant(0.0, 1.0),
                        PeriodicCoefficient::constant(0.0, 1.0), DomainMotion::fixed(1.5))});

    return lib;
}

} // namespace

const std::vector<NamedScenario>& scenario_library() {
    static const std::vector<NamedScenario> lib = build_library();
    return lib;
}

Scenario scenario_by_name(const std::string& name) {
    for (const auto& entry : scenario_library())
        if (entry.name == name) return entry.scenario;
    std::ostringstream os;
    os << "unknown scenario '" << name << "'; known names:";
    for (const auto& entry : scenario_library()) os << ' ' << entry.name;
    throw std::invalid_argument(os.str());
}

} // namespace habitat
