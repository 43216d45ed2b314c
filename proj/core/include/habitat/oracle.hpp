#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "habitat/scenario.hpp"
#include "habitat/spectral.hpp"

namespace habitat {

/// Output of one fixed-frame finite-difference run: stored slices of
/// v(t, y) on (0, L0) plus norm traces at every step.
struct OracleResult {
    double L0 = 1.0;
    int ny = 0;            // interior nodes
    double tau = 0.0;
    std::vector<double> times;        // per-step trace times (0 ... horizon)
    std::vector<double> l2;           // ||v(t)||_{L2}
    std::vector<double> linf;         // ||v(t)||_inf
    std::vector<double> argmax;       // y position of the max
    std::vector<double> slice_times;  // stored slice times
    std::vector<std::vector<double>> slices; // interior values, ny entries each

    double node_y(int i) const { return L0 * (i + 1) / (ny + 1); }
    /// Fitted slope of ln ||v||_inf over [t0, t1] (least squares).
    double log_slope_linf(double t0, double t1) const;
    double log_slope_l2(double t0, double t1) const;
};

struct OracleOptions {
    int ny = 400;
    double tau = 1e-3;
    double horizon = 1.0;
    int slice_stride = 0;   // 0: pick ~200 stored slices automatically
    /// Override the initial profile (moving coordinates); default: scenario datum.
    std::function<double(double)> initial;
};

/// Crank-Nicolson solver for the fixed-frame transformed equation
///   v_t = (d L0^2/L^2) v_yy + ((Adot L0 + y Ldot)/L) v_y + (r - (alpha L^2 / 2 L0^2)(y - beta L0)^2) v
/// with central differences and an automatic first-order upwind switch when
/// the cell Peclet number exceeds 2.
OracleResult step_solver(const Scenario& s, const OracleOptions& opts);

struct SweepSpec {
    std::vector<double> Ls;
    std::vector<double> rs;     // empty: L-only sweep at the template's r
    double probe_time = 2.0;    // horizon; probe compares this time to t=0
    int ny = 300;
    double tau = 2e-3;
    bool with_lambda = false;   // numeric eigenvalue per cell (fixed domains)
    int lambda_ny = 201;
    int lambda_steps = 500;
    int threads = 0;            // 0: hardware concurrency
};

struct SweepCell {
    double L = 0.0, r = 0.0;
    double probe0 = 0.0, probeT = 0.0;
    double slope_late = 0.0;    // d/dt ln ||v||_{L2} over the last quarter
    int verdict_numeric = 0;    // +1 growing, -1 decaying, 0 marginal
    Classification verdict_analytic;
    double lambda = std::nan("");
};

/// Parallel map of step_solver over an (L, r) grid; cells are keyed by grid
/// coordinates so the output order is deterministic.
std::vector<SweepCell> sweep(const Scenario& tmpl, const SweepSpec& spec);

std::string sweep_csv(const std::vector<SweepCell>& cells);

} // namespace habitat
