#include "habitat/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "habitat/tridiag.hpp"

namespace habitat {

namespace {

constexpr double kPi = std::numbers::pi;
// (2 pi^2 - 3) / (6 pi^2), the constant of the refined upper bound.
const double kUpperConst = (2.0 * kPi * kPi - 3.0) / (6.0 * kPi * kPi);

void require_fixed(const Scenario& s, const char* what) {
    if (!s.motion.is_fixed())
        throw std::invalid_argument(std::string(what) + ": requires a fixed (non-moving) domain");
}

} // namespace

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::Extinct: return "extinct";
        case Verdict::Survive: return "survive";
        default: return "unknown";
    }
}

double r_minus(double alpha_t, double beta_t, double L) {
    if (beta_t >= 0.0 && beta_t <= 1.0) return 0.0;
    const double u = 0.5 - std::abs(0.5 - beta_t); // negative outside [0,1]
    return 0.5 * alpha_t * u * u * L * L;
}

double r_plus(double alpha_t, double beta_t, double L) {
    const double u = 0.5 + std::abs(0.5 - beta_t);
    return 0.5 * alpha_t * u * u * L * L;
}

double PhiGrid::eval(double tau, double y) const {
    double tw = std::fmod(tau, T);
    if (tw < 0.0) tw += T;
    const int cols = ny + 2;
    double ft = tw / T * nt;
    int k = std::min(static_cast<int>(ft), nt - 1);
    double st = ft - k;
    double fy = std::clamp(y / L, 0.0, 1.0) * (ny + 1);
    int j = std::min(static_cast<int>(fy), ny);
    double sy = fy - j;
    auto v = [&](int kk, int jj) { return data[static_cast<std::size_t>(kk) * cols + jj]; };
    return (1 - st) * ((1 - sy) * v(k, j) + sy * v(k, j + 1)) +
           st * ((1 - sy) * v(k + 1, j) + sy * v(k + 1, j + 1));
}

EigenBounds bounds_refined(const Scenario& s, double L) {
    require_fixed(s, "bounds_refined");
    const double base = s.d * kPi * kPi / (L * L) - s.r;
    const double rminus_mean =
        periodic_mean([&](double t) { return r_minus(s.alpha(t), s.beta(t), L); }, s.T);
    const double am = periodic_mean([&](double t) { return s.alpha(t); }, s.T);
    const double abm = periodic_mean([&](double t) { return s.alpha(t) * s.beta(t); }, s.T);
    const double ab2m =
        periodic_mean([&](double t) { return s.alpha(t) * s.beta(t) * s.beta(t); }, s.T);
    EigenBounds b;
    b.source = EigenBounds::Source::Refined;
    b.lower = base + rminus_mean;
    b.upper = base + L * L * 0.5 * am * (kUpperConst + ab2m / am - abm / am);
    return b;
}

EigenBounds bounds_extremes(const Scenario& s, double L) {
    require_fixed(s, "bounds_extremes");
    const double base = s.d * kPi * kPi / (L * L) - s.r;
    EigenBounds b;
    b.source = EigenBounds::Source::Extremes;
    b.lower = base + periodic_mean([&](double t) { return r_minus(s.alpha(t), s.beta(t), L); }, s.T);
    b.upper = base + periodic_mean([&](double t) { return r_plus(s.alpha(t), s.beta(t), L); }, s.T);
    return b;
}

double lambda_closed_form_x_independent(const PeriodicCoefficient& R, double d, double L) {
    return d * kPi * kPi / (L * L) - periodic_mean([&](double t) { return R(t); }, R.period());
}

AveragedProblem averaged_problem(const Scenario& s, double L, int nodes) {
    require_fixed(s, "averaged_problem");
    AveragedProblem out;
    out.alpha_mean = periodic_mean([&](double t) { return s.alpha(t); }, s.T);
    out.alpha_beta_mean = periodic_mean([&](double t) { return s.alpha(t) * s.beta(t); }, s.T);
    out.alpha_beta2_mean =
        periodic_mean([&](double t) { return s.alpha(t) * s.beta(t) * s.beta(t); }, s.T);

    const int ny = std::max(nodes, 2000);
    const double h = L / (ny + 1);
    const double center = out.alpha_beta_mean / out.alpha_mean * L;
    std::vector<double> diag(ny), pot(ny);
    for (int i = 0; i < ny; ++i) {
        const double y = (i + 1) * h;
        pot[i] = 0.5 * out.alpha_mean * (y - center) * (y - center);
        diag[i] = 2.0 * s.d / (h * h) + pot[i];
    }
    const double off = -s.d / (h * h);

    // Inverse power iteration toward the smallest eigenvalue. The operator is
    // positive definite, so no shift is needed.
    std::vector<double> v(ny);
    for (int i = 0; i < ny; ++i) v[i] = std::sin(kPi * (i + 1) / (ny + 1));
    double mu = 0.0, mu_prev = 1e300;
    const int cap = 20000;
    int it = 0;
    for (; it < cap; ++it) {
        std::vector<double> lo(ny, off), di = diag, up(ny, off), rhs = v;
        solve_tridiagonal(lo, di, up, rhs);
        double norm = 0.0;
        for (double x : rhs) norm += x * x;
        norm = std::sqrt(norm);
        for (double& x : rhs) x /= norm;
        // Rayleigh quotient of the normalized iterate
        double num = 0.0;
        for (int i = 0; i < ny; ++i) {
            double Av = diag[i] * rhs[i];
            if (i > 0) Av += off * rhs[i - 1];
            if (i + 1 < ny) Av += off * rhs[i + 1];
            num += rhs[i] * Av;
        }
        mu = num;
        v = rhs;
        // The Rayleigh quotient cancels against the 2d/h^2 diagonal, so its
        // floating-point noise floor scales with the matrix norm, not with mu.
        const double tol = 64.0 * std::numeric_limits<double>::epsilon() *
                           (2.0 * s.d / (h * h) + std::abs(mu));
        if (std::abs(mu - mu_prev) < tol) break;
        mu_prev = mu;
    }
    if (it == cap) throw std::runtime_error("averaged_problem: inverse iteration did not converge");

    out.mu_hat = mu;
    out.lambda_hat = mu - s.r -
        0.5 * L * L * (out.alpha_beta_mean * out.alpha_beta_mean / out.alpha_mean -
                       out.alpha_beta2_mean);

    // Sanity bounds on mu_hat (discretization tolerance on the strict side).
    const double lo_bound = s.d * kPi * kPi / (L * L);
    const double q = out.alpha_beta_mean / out.alpha_mean;
    const double hi_bound = lo_bound + L * L * 0.5 * out.alpha_mean * (kUpperConst + q * (q - 1.0));
    if (out.mu_hat < lo_bound - 1e-6 * (1.0 + std::abs(lo_bound)) ||
        out.mu_hat > hi_bound + 1e-6 * (1.0 + std::abs(hi_bound)))
        throw std::runtime_error("averaged_problem: mu_hat violates its analytic bounds");
    return out;
}

namespace {

// One Crank-Nicolson period sweep of u_t = d u_yy + R(t,y) u on (0,L) with
// ny interior nodes. The vector is renormalized every step; the accumulated
// log of the norm growth over the period is returned.
class PeriodMap {
public:
    PeriodMap(const Scenario& s, double L, int ny, int steps, bool ignore_selection)
        : s_(s), L_(L), ny_(ny), steps_(steps), ignore_(ignore_selection), h_(L / (ny + 1)),
          tau_(s.T / steps) {
        // Crank-Nicolson is A- but not L-stable: on strongly decaying problems
        // its near-unit-magnitude high-frequency modes would dominate the
        // period map instead of the physical principal mode. Iterate on the
        // exponentially shifted growth term R + c, with c large enough that
        // the principal mode grows by at least e^5 per period, and undo the
        // shift through shift().
        double penalty_max = 0.0;
        if (!ignore_selection) {
            for (int n = 0; n <= 512; ++n) {
                const double t = s.T * n / 512;
                penalty_max = std::max(penalty_max, r_plus(s.alpha(t), s.beta(t), L));
            }
        }
        shift_ = s.d * kPi * kPi / (L * L) - s.r + penalty_max + 5.0 / s.T;

        // Growth term per time level, reused across power iterations.
        pot_.resize(static_cast<std::size_t>(steps_ + 1) * ny_);
        for (int n = 0; n <= steps_; ++n) {
            const double t = n * tau_;
            const double a = s_.alpha(t), b = s_.beta(t);
            for (int i = 0; i < ny_; ++i) {
                const double y = (i + 1) * h_;
                double R = s_.r + shift_;
                if (!ignore_) {
                    const double dy = y - b * L_;
                    R -= 0.5 * a * dy * dy;
                }
                pot_[static_cast<std::size_t>(n) * ny_ + i] = R;
            }
        }
    }

    /// Constant added to the growth term: lambda = -g/T + shift().
    double shift() const { return shift_; }

    /// Propagate u through one period in place; returns ln of the growth.
    /// When slices is non-null, the (steps+1) time levels are stored with the
    /// per-step renormalization undone relative to the start of the period.
    double apply(std::vector<double>& u, std::vector<std::vector<double>>* slices = nullptr,
                 std::vector<double>* slice_logs = nullptr) const {
        const double dcoef = s_.d / (h_ * h_);
        double log_growth = 0.0;
        if (slices) {
            slices->assign(steps_ + 1, {});
            (*slices)[0] = u;
            slice_logs->assign(steps_ + 1, 0.0);
        }
        std::vector<double> lo(ny_), di(ny_), up(ny_), rhs(ny_);
        for (int n = 0; n < steps_; ++n) {
            const double* Rn = &pot_[static_cast<std::size_t>(n) * ny_];
            const double* Rn1 = &pot_[static_cast<std::size_t>(n + 1) * ny_];
            for (int i = 0; i < ny_; ++i) {
                // explicit half step
                double Au = -2.0 * dcoef * u[i] + Rn[i] * u[i];
                if (i > 0) Au += dcoef * u[i - 1];
                if (i + 1 < ny_) Au += dcoef * u[i + 1];
                rhs[i] = u[i] + 0.5 * tau_ * Au;
                lo[i] = -0.5 * tau_ * dcoef;
                up[i] = -0.5 * tau_ * dcoef;
                di[i] = 1.0 + 0.5 * tau_ * (2.0 * dcoef - Rn1[i]);
            }
            solve_tridiagonal(lo, di, up, rhs);
            double norm = 0.0;
            for (double x : rhs) norm = std::max(norm, std::abs(x));
            if (norm == 0.0) throw std::runtime_error("floquet: solution collapsed to zero");
            for (int i = 0; i < ny_; ++i) u[i] = rhs[i] / norm;
            log_growth += std::log(norm);
            if (slices) {
                (*slices)[n + 1] = u;
                (*slice_logs)[n + 1] = log_growth;
            }
        }
        return log_growth;
    }

    int ny() const { return ny_; }
    int steps() const { return steps_; }
    double h() const { return h_; }

private:
    const Scenario& s_;
    double L_;
    int ny_;
    int steps_;
    bool ignore_;
    double h_;
    double tau_;
    double shift_ = 0.0;
    std::vector<double> pot_;
};

// Returns the converged log growth of the period map (ln of its spectral radius).
double power_iterate(const PeriodMap& map, const FloquetOptions& opts, std::vector<double>& u) {
    u.assign(map.ny(), 0.0);
    for (int i = 0; i < map.ny(); ++i) u[i] = std::sin(kPi * (i + 1) / (map.ny() + 1));
    double g = 0.0, g_prev = 1e300;
    for (int it = 0; it < opts.max_iterations; ++it) {
        g = map.apply(u);
        if (std::abs(g - g_prev) < opts.power_tol * (1.0 + std::abs(g))) return g;
        g_prev = g;
    }
    throw std::runtime_error("floquet: power iteration did not converge");
}

} // namespace

EigenReport floquet_lambda(const Scenario& s, double L, const FloquetOptions& opts) {
    require_fixed(s, "floquet_lambda");
    if (!opts.ignore_selection && s.alpha.min_on_period() <= 0.0)
        throw std::invalid_argument("floquet_lambda: alpha must be positive");

    EigenReport report;
    PeriodMap coarse(s, L, opts.ny, opts.steps_per_period, opts.ignore_selection);
    std::vector<double> u;
    const double g_coarse = power_iterate(coarse, opts, u);
    report.lambda_raw = -g_coarse / s.T + coarse.shift();
    report.lambda = report.lambda_raw;

    std::vector<double> u_fine;
    if (opts.richardson) {
        // Nested refinement: spacing and time step both halve exactly.
        PeriodMap fine(s, L, 2 * opts.ny + 1, 2 * opts.steps_per_period, opts.ignore_selection);
        const double g_fine = power_iterate(fine, opts, u_fine);
        const double lam_fine = -g_fine / s.T + fine.shift();
        report.lambda = (4.0 * lam_fine - report.lambda_raw) / 3.0;
    }

    if (opts.keep_phi) {
        // Reconstruct the periodic eigenfunction by one more period sweep of
        // the converged vector, undoing the per-period decay e^{-lambda t}.
        std::vector<std::vector<double>> slices;
        std::vector<double> logs;
        const double g = coarse.apply(u, &slices, &logs);
        PhiGrid phi;
        phi.T = s.T;
        phi.L = L;
        phi.nt = coarse.steps();
        phi.ny = coarse.ny();
        phi.data.assign(static_cast<std::size_t>(phi.nt + 1) * (phi.ny + 2), 0.0);
        const double rate = g / s.T; // = -lambda_raw
        double maxv = 0.0;
        for (int k = 0; k <= phi.nt; ++k) {
            const double t = s.T * k / phi.nt;
            // periodic profile: remove the exponential growth accumulated so far
            const double scale = std::exp(logs[k] - rate * t);
            for (int i = 0; i < phi.ny; ++i) {
                const double v = slices[k][i] * scale;
                phi.data[static_cast<std::size_t>(k) * (phi.ny + 2) + i + 1] = v;
                maxv = std::max(maxv, std::abs(v));
            }
        }
        if (maxv <= 0.0) throw std::runtime_error("floquet: degenerate eigenfunction");
        for (double& v : phi.data) v /= maxv;
        report.phi = std::move(phi);
    }

    if (s.motion.is_fixed() && !opts.ignore_selection) {
        report.bounds = bounds_refined(s, L);
        report.averaged = averaged_problem(s, L);
    }
    report.verdict = report.lambda > 0.0 ? Verdict::Extinct : Verdict::Survive;
    report.criterion = "monodromy";
    return report;
}

double delta_minus(const Scenario& s) {
    const double m = periodic_mean(
        [&](double t) {
            const double u = 0.5 - std::abs(0.5 - s.beta(t));
            return s.alpha(t) * u * u;
        },
        s.T);
    return 2.0 * s.d * kPi * kPi * m;
}

double delta_plus(const Scenario& s) {
    const double am = periodic_mean([&](double t) { return s.alpha(t); }, s.T);
    const double abm = periodic_mean([&](double t) { return s.alpha(t) * s.beta(t); }, s.T);
    const double ab2m =
        periodic_mean([&](double t) { return s.alpha(t) * s.beta(t) * s.beta(t); }, s.T);
    return 2.0 * s.d * kPi * kPi * (kUpperConst * am + ab2m - abm);
}

Classification classify_fixed(const Scenario& s, double L, double r) {
    Scenario sc = s;
    sc.r = r;
    Classification out;

    // Small domains always go extinct.
    if (L <= std::sqrt(sc.d * kPi * kPi / r)) {
        out.verdict = Verdict::Extinct;
        out.criterion = "small-domain";
        return out;
    }

    // Survival window from the refined upper bound.
    const double dp = delta_plus(sc);
    if (r * r >= dp) {
        const double disc = std::sqrt(r * r - dp);
        const double lo = std::sqrt(2.0 * sc.d * kPi * kPi * (r - disc) / dp);
        const double hi = std::sqrt(2.0 * sc.d * kPi * kPi * (r + disc) / dp);
        if (L >= lo && L <= hi) {
            out.verdict = Verdict::Survive;
            out.criterion = "survival-window";
            out.survival_interval = {lo, hi};
            return out;
        }
    }

    // Extinction criterion is only valid when the optimum never enters the
    // habitat; checked on a dense grid.
    bool outside = true;
    const int samples = 10000;
    for (int i = 0; i <= samples && outside; ++i) {
        const double b = sc.beta(sc.T * i / samples);
        if (b > 0.0 && b < 1.0) outside = false;
    }
    if (outside) {
        const double dm = delta_minus(sc);
        if (r * r <= dm) {
            out.verdict = Verdict::Extinct;
            out.criterion = "extinction-any-L";
            return out;
        }
        const double disc = std::sqrt(r * r - dm);
        const double lo = std::sqrt(2.0 * sc.d * kPi * kPi * (r - disc) / dm);
        const double hi = std::sqrt(2.0 * sc.d * kPi * kPi * (r + disc) / dm);
        if (L <= lo || L >= hi) {
            out.verdict = Verdict::Extinct;
            out.criterion = "extinction-window";
            return out;
        }
    }

    out.verdict = Verdict::Unknown;
    out.criterion = "no-criterion";
    return out;
}

FluctuationDesign fluctuation_thresholds(double alpha_mean, double amp_alpha, double beta_mean) {
    if (!(amp_alpha > 0.0 && amp_alpha < alpha_mean))
        throw std::invalid_argument("fluctuation_thresholds: need 0 < a < alpha");
    FluctuationDesign d;
    d.alpha_mean = alpha_mean;
    d.beta_mean = beta_mean;
    d.amp_alpha = amp_alpha;
    const double q = amp_alpha / alpha_mean;   // a / alpha
    const double q2 = q * q;
    d.beta_tilde = 0.5 + (1.0 / q2) * (1.0 + std::sqrt(q2 * (2.0 * kUpperConst - 1.0) + 1.0));
    const double disc = q2 * (beta_mean - 0.5) * (beta_mean - 0.5) -
                        2.0 * (beta_mean + kUpperConst - 1.0);
    if (disc >= 0.0 && beta_mean > d.beta_tilde) {
        d.help_window_defined = true;
        d.b1 = q * (beta_mean - 0.5) - std::sqrt(disc);
        d.b2 = q * (beta_mean - 0.5) + std::sqrt(disc);
    } else {
        d.b1 = d.b2 = std::nan("");
    }
    d.b3 = -q * (beta_mean - 1.0) +
           std::sqrt(q2 * (beta_mean - 1.0) * (beta_mean - 1.0) +
                     2.0 * (beta_mean + kUpperConst - 1.0));
    const double p = 1.0 + 2.0 * q;
    d.hurt_beta_threshold = 1.0 + (1.0 + std::sqrt(1.0 + 2.0 * kUpperConst * p)) / p;
    return d;
}

bool fluctuations_help(const FluctuationDesign& d, double b) {
    return d.help_window_defined && b > d.b1 && b < d.b2;
}

bool fluctuations_hurt(const FluctuationDesign& d, double b) {
    return d.beta_mean > d.hurt_beta_threshold && b > d.b3 && b < d.beta_mean - 1.0;
}

std::string EigenReport::to_json() const {
    nlohmann::json j;
    j["lambda"] = lambda;
    j["lambda_raw"] = lambda_raw;
    j["bounds"] = {{"lower", bounds.lower}, {"upper", bounds.upper}};
    j["averaged"] = {{"alpha_mean", averaged.alpha_mean},
                     {"alpha_beta_mean", averaged.alpha_beta_mean},
                     {"alpha_beta2_mean", averaged.alpha_beta2_mean},
                     {"mu_hat", averaged.mu_hat},
                     {"lambda_hat", averaged.lambda_hat}};
    j["verdict"] = to_string(verdict);
    j["criterion"] = criterion;
    return j.dump(2);
}

std::string EigenReport::csv_header() {
    return "lambda,lambda_raw,lower,upper,mu_hat,lambda_hat,verdict,criterion";
}

std::string EigenReport::to_csv_row() const {
    std::ostringstream os;
    os.precision(15);
    os << lambda << ',' << lambda_raw << ',' << bounds.lower << ',' << bounds.upper << ','
       << averaged.mu_hat << ',' << averaged.lambda_hat << ',' << to_string(verdict) << ','
       << criterion;
    return os.str();
}

} // namespace habitat
