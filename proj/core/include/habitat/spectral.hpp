#pragma once

#include <optional>
#include <string>
#include <vector>

#include "habitat/scenario.hpp"

namespace habitat {

enum class Verdict { Extinct, Survive, Unknown };

std::string to_string(Verdict v);

/// Analytic lower/upper bounds on the principal periodic eigenvalue.
struct EigenBounds {
    double lower = 0.0;
    double upper = 0.0;
    enum class Source { Refined, Extremes, Averaged } source = Source::Refined;
};

/// Time-averaged elliptic comparison problem: quadratic-potential eigenvalue
/// mu_hat and the derived averaged eigenvalue lambda_hat.
struct AveragedProblem {
    double alpha_mean = 0.0;
    double alpha_beta_mean = 0.0;
    double alpha_beta2_mean = 0.0;
    double mu_hat = 0.0;
    double lambda_hat = 0.0;
};

/// Time-periodic eigenfunction sampled on a uniform [0,T] x [0,L] grid,
/// boundary columns included, sup-normalized to 1.
struct PhiGrid {
    double T = 1.0;
    double L = 1.0;
    int nt = 0; // stored time slices - 1 (slice k at t = k*T/nt)
    int ny = 0; // interior space nodes; columns = ny + 2
    std::vector<double> data; // (nt+1) x (ny+2), row-major in time

    double at(int k, int col) const { return data[static_cast<std::size_t>(k) * (ny + 2) + col]; }
    /// Bilinear evaluation; tau is wrapped modulo the period.
    double eval(double tau, double y) const;
    double node_y(int col) const { return L * col / (ny + 1); }
};

struct EigenReport {
    EigenBounds bounds;             // refined bounds
    AveragedProblem averaged;
    double lambda_raw = 0.0;        // default-grid monodromy eigenvalue
    double lambda = 0.0;            // Richardson-extrapolated
    PhiGrid phi;
    Verdict verdict = Verdict::Unknown;
    std::string criterion;

    std::string to_json() const;
    static std::string csv_header();
    std::string to_csv_row() const;
};

struct FloquetOptions {
    int ny = 801;            // interior space nodes
    int steps_per_period = 2000;
    double power_tol = 1e-10;
    int max_iterations = 500;
    bool richardson = true;  // second run on a twice-refined grid
    bool keep_phi = true;
    /// Replace the growth term by the x-independent r (selection ignored).
    bool ignore_selection = false;
};

/// min over [0,L] of (alpha/2)(x - beta L)^2.
double r_minus(double alpha_t, double beta_t, double L);
/// max over [0,L] of (alpha/2)(x - beta L)^2.
double r_plus(double alpha_t, double beta_t, double L);

/// Refined eigenvalue bounds (time-averaged upper estimate). Fixed domain only.
EigenBounds bounds_refined(const Scenario& s, double L);
/// Extreme-value bounds: both sides from space extrema of the growth term.
EigenBounds bounds_extremes(const Scenario& s, double L);

/// Principal eigenvalue for an x-independent growth term: d pi^2/L^2 - <R>.
double lambda_closed_form_x_independent(const PeriodicCoefficient& R, double d, double L);

/// Averaged elliptic problem: smallest eigenvalue of the quadratic-potential
/// operator by second-order differences and inverse iteration.
AveragedProblem averaged_problem(const Scenario& s, double L, int nodes = 2047);

/// Numeric principal periodic eigenpair via the one-period solution map:
/// Crank-Nicolson propagation, power iteration on the period map, and
/// lambda = -ln(rho)/T.
EigenReport floquet_lambda(const Scenario& s, double L, const FloquetOptions& opts = {});

/// Extinction threshold delta^- (valid when beta(t) stays outside (0,1)).
double delta_minus(const Scenario& s);
/// Survival threshold delta^+.
double delta_plus(const Scenario& s);

struct Classification {
    Verdict verdict = Verdict::Unknown;
    std::string criterion;
    /// Survival window [L_lo, L_hi] when the survival criterion applies.
    std::optional<std::pair<double, double>> survival_interval;
};

/// Analytic survival/extinction classification for a fixed domain of size L.
Classification classify_fixed(const Scenario& s, double L, double r);

/// Thresholds controlling whether in-phase / opposite-phase fluctuations of
/// selection strength and optimum position help or hurt survival.
struct FluctuationDesign {
    double alpha_mean = 0.0;  // baseline selection strength
    double beta_mean = 0.0;   // baseline optimum position
    double amp_alpha = 0.0;   // selection fluctuation amplitude
    double beta_tilde = 0.0;  // help regime needs beta_mean > beta_tilde
    double b1 = 0.0, b2 = 0.0; // help window (NaN when undefined)
    bool help_window_defined = false;
    double b3 = 0.0;           // hurt window lower bound
    double hurt_beta_threshold = 0.0;
};

FluctuationDesign fluctuation_thresholds(double alpha_mean, double amp_alpha, double beta_mean);
bool fluctuations_help(const FluctuationDesign& design, double b);
bool fluctuations_hurt(const FluctuationDesign& design, double b);

} // namespace habitat
