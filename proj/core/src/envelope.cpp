#include "habitat/envelope.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace habitat {

namespace {

// Extremum of the quadratic q(z) = a2 z^2 + a1 z + a0 over [lo, hi];
// candidates are the endpoints and the interior vertex.
double quad_extremum(double a2, double a1, double a0, double lo, double hi, bool take_max) {
    auto q = [&](double z) { return (a2 * z + a1) * z + a0; };
    double best = take_max ? std::max(q(lo), q(hi)) : std::min(q(lo), q(hi));
    if (a2 != 0.0) {
        const double zs = -a1 / (2.0 * a2);
        if (zs > lo && zs < hi) best = take_max ? std::max(best, q(zs)) : std::min(best, q(zs));
    }
    return best;
}

double q_extremum(const Scenario& s, double t, bool take_max) {
    const MotionState m = s.motion.state(t);
    return quad_extremum(m.Lddot * m.L / (4.0 * s.d), m.Addot * m.L / (2.0 * s.d), 0.0, 0.0, 1.0,
                         take_max);
}

// Half the extremum over y in [0, L0] of
//   (L0^2/L^2) alpha(tau) (y - beta(tau) L0)^2 - (L^2/L0^2) alpha(t) (y - beta(t) L0)^2,
// where tau is the rescaled clock at time t. The bracket is quadratic in y.
double p_extremum(const Scenario& s, double t, double tau, double L0, bool take_max) {
    const double L = s.motion.L(t);
    const double c1 = L0 * L0 / (L * L) * s.alpha(tau);
    const double c2 = L * L / (L0 * L0) * s.alpha(t);
    const double y1 = s.beta(tau) * L0;
    const double y2 = s.beta(t) * L0;
    const double a2 = c1 - c2;
    const double a1 = -2.0 * (c1 * y1 - c2 * y2);
    const double a0 = c1 * y1 * y1 - c2 * y2 * y2;
    return 0.5 * quad_extremum(a2, a1, a0, 0.0, L0, take_max);
}

std::vector<double> p_sampled(const Scenario& s, const std::vector<double>& tgrid, bool take_max) {
    // Accumulate the clock along the (assumed increasing) grid.
    const double L0 = s.motion.L0();
    std::vector<double> out(tgrid.size());
    double tau = 0.0, tprev = 0.0;
    auto speed = [&](double t) {
        const double L = s.motion.L(t);
        return L0 * L0 / (L * L);
    };
    for (std::size_t i = 0; i < tgrid.size(); ++i) {
        const double t = tgrid[i];
        if (t < tprev) throw std::invalid_argument("p_bar/p_under: time grid must be increasing");
        if (t > tprev) tau += integrate_gl(speed, tprev, t, 4);
        out[i] = p_extremum(s, t, tau, L0, take_max);
        tprev = t;
    }
    return out;
}

} // namespace

FrameTransform FrameTransform::from(const Scenario& s) {
    FrameTransform f;
    f.d = s.d;
    f.r = s.r;
    f.motion = s.motion;
    f.L0 = s.motion.L0();
    return f;
}

double FrameTransform::to_y(double t, double x) const {
    return (x - motion.A(t)) * L0 / motion.L(t);
}

double FrameTransform::to_x(double t, double y) const {
    return motion.A(t) + y * motion.L(t) / L0;
}

double FrameTransform::w_weight_spatial(double t, double y) const {
    const MotionState m = motion.state(t);
    return std::sqrt(m.L / L0) *
           std::exp(y * y * m.Ldot * m.L / (4.0 * d * L0 * L0) +
                    y * m.Adot * m.L / (2.0 * d * L0));
}

double FrameTransform::w_weight(double t, double y) const {
    auto kinetic = [&](double s) {
        const double Adot = motion.Adot(s);
        return Adot * Adot / (4.0 * d);
    };
    const double I = t > 0.0 ? integrate_gl(kinetic, 0.0, t, 16) : 0.0;
    return w_weight_spatial(t, y) * std::exp(-r * t + I);
}

double q_bar(const Scenario& s, double t) { return q_extremum(s, t, true); }
double q_under(const Scenario& s, double t) { return q_extremum(s, t, false); }

std::vector<double> p_bar(const Scenario& s, const std::vector<double>& tgrid) {
    return p_sampled(s, tgrid, true);
}

std::vector<double> p_under(const Scenario& s, const std::vector<double>& tgrid) {
    return p_sampled(s, tgrid, false);
}

Remark32 remark32_coeffs(const Scenario& s, double t) {
    // Hypothesis check: 2 d alpha L - Lddot > 0 over one period.
    const int n = 2048;
    for (int i = 0; i <= n; ++i) {
        const double tc = s.T * i / n;
        if (2.0 * s.d * s.alpha(tc) * s.motion.L(tc) - s.motion.Lddot(tc) <= 0.0)
            throw std::runtime_error(
                "remark32_coeffs: 2 d alpha L - Lddot must stay positive over the period");
    }
    const MotionState m = s.motion.state(t);
    const double al = s.alpha(t), be = s.beta(t);
    const double denom = 2.0 * s.d * al * m.L - m.Lddot;
    Remark32 out;
    out.alpha_tilde = denom / (2.0 * s.d * m.L);
    out.beta_tilde = (m.Addot + 2.0 * s.d * al * be * m.L) / denom;
    const double num = m.Addot + 2.0 * s.d * al * be * m.L;
    out.Q = m.L / (4.0 * s.d) * num * num / denom - 0.5 * al * be * be * m.L * m.L;
    return out;
}

double EnvelopeBound::interp(const std::vector<double>& table, double t) const {
    if (t <= 0.0) return table.front();
    const double pos = t / ht_;
    const auto i = static_cast<std::size_t>(pos);
    if (i + 1 >= table.size()) return table.back();
    const double w = pos - static_cast<double>(i);
    return table[i] * (1.0 - w) + table[i + 1] * w;
}

double EnvelopeBound::clock(double t) const { return interp(clock_, t); }

double EnvelopeBound::clock_inverse(double tau) const {
    if (tau <= 0.0) return 0.0;
    if (tau >= clock_.back()) return horizon_;
    auto it = std::upper_bound(clock_.begin(), clock_.end(), tau);
    const auto i = static_cast<std::size_t>(it - clock_.begin()) - 1;
    const double w = (tau - clock_[i]) / (clock_[i + 1] - clock_[i]);
    return ht_ * (static_cast<double>(i) + w);
}

double EnvelopeBound::exponent(double t, bool up) const {
    return r_ * t - interp(adv_, t) - (lambda_ + r_) * interp(clock_, t) +
           (up ? interp(pbar_, t) + interp(qbar_, t) : interp(punder_, t) + interp(qunder_, t));
}

double EnvelopeBound::upper(double t, double y) const {
    const MotionState m = motion_.state(t);
    const double quad =
        -m.Ldot * m.L * y * y / (4.0 * d_ * L0_ * L0_) - m.Adot * m.L * y / (2.0 * d_ * L0_);
    return b_ * phi_.eval(clock(t), y) * std::sqrt(L0_ / m.L) * std::exp(exponent(t, true) + quad);
}

double EnvelopeBound::lower(double t, double y) const {
    const MotionState m = motion_.state(t);
    const double quad =
        -m.Ldot * m.L * y * y / (4.0 * d_ * L0_ * L0_) - m.Adot * m.L * y / (2.0 * d_ * L0_);
    return a_ * phi_.eval(clock(t), y) * std::sqrt(L0_ / m.L) * std::exp(exponent(t, false) + quad);
}

EnvelopeBound build_envelope(const Scenario& s, const std::function<double(double)>& v0,
                             const FloquetOptions& opts, double horizon, int npts) {
    EnvelopeBound env;
    env.d_ = s.d;
    env.r_ = s.r;
    env.T_ = s.T;
    env.motion_ = s.motion;
    env.L0_ = s.motion.L0();
    env.horizon_ = horizon > 0.0 ? horizon : s.horizon;

    // Eigenpair of the fixed (0, L0) problem with the original coefficients.
    FloquetOptions fo = opts;
    fo.keep_phi = true;
    fo.ignore_selection = false;
    Scenario frozen = s;
    frozen.motion = DomainMotion::fixed(env.L0_);
    const EigenReport eig = floquet_lambda(frozen, env.L0_, fo);
    env.lambda_ = eig.lambda;
    env.phi_ = eig.phi;

    // Sandwich constants from w0 / phi(0, .), floored away from the boundary.
    const FrameTransform frame = FrameTransform::from(s);
    double phimax = 0.0;
    for (int c = 0; c <= env.phi_.ny + 1; ++c) phimax = std::max(phimax, env.phi_.at(0, c));
    const double floor = 1e-8 * phimax;
    double a = std::numeric_limits<double>::infinity(), b = 0.0;
    bool any = false, nontrivial = false;
    for (int c = 1; c <= env.phi_.ny; ++c) {
        const double y = env.phi_.node_y(c);
        const double p = env.phi_.at(0, c);
        const double w0 = v0(y) * frame.w_weight_spatial(0.0, y);
        if (w0 != 0.0) nontrivial = true;
        if (p <= floor) continue;
        const double ratio = w0 / p;
        a = std::min(a, ratio);
        b = std::max(b, ratio);
        any = true;
    }
    if (!nontrivial) throw std::invalid_argument("build_envelope: initial profile is identically zero");
    if (!any || !(a > 0.0) || a > b)
        throw std::runtime_error("build_envelope: could not bracket w0 between multiples of phi");
    env.a_ = a;
    env.b_ = b;

    // Cumulative exponent tables: per-subinterval Simpson, with the clock
    // threaded through so P can be evaluated at exact midpoint clocks.
    const int n = std::max(16, npts);
    env.ht_ = env.horizon_ / n;
    env.clock_.assign(n + 1, 0.0);
    env.adv_.assign(n + 1, 0.0);
    env.qbar_.assign(n + 1, 0.0);
    env.qunder_.assign(n + 1, 0.0);
    env.pbar_.assign(n + 1, 0.0);
    env.punder_.assign(n + 1, 0.0);

    auto clock_speed = [&](double t) {
        const double L = s.motion.L(t);
        return env.L0_ * env.L0_ / (L * L);
    };
    auto adv_speed = [&](double t) {
        const double Adot = s.motion.Adot(t);
        return Adot * Adot / (4.0 * s.d);
    };

    double t0 = 0.0, tau0 = 0.0;
    double qb0 = q_bar(s, t0), qu0 = q_under(s, t0);
    double pb0 = p_extremum(s, t0, tau0, env.L0_, true);
    double pu0 = p_extremum(s, t0, tau0, env.L0_, false);
    for (int i = 0; i < n; ++i) {
        const double tm = t0 + 0.5 * env.ht_;
        const double t1 = t0 + env.ht_;
        const double tau_m = tau0 + integrate_gl(clock_speed, t0, tm, 1);
        const double tau1 = tau_m + integrate_gl(clock_speed, tm, t1, 1);

        auto simpson = [&](double f0, double fm, double f1) {
            return env.ht_ / 6.0 * (f0 + 4.0 * fm + f1);
        };
        const double qb1 = q_bar(s, t1), qbm = q_bar(s, tm);
        const double qu1 = q_under(s, t1), qum = q_under(s, tm);
        const double pb1 = p_extremum(s, t1, tau1, env.L0_, true);
        const double pbm = p_extremum(s, tm, tau_m, env.L0_, true);
        const double pu1 = p_extremum(s, t1, tau1, env.L0_, false);
        const double pum = p_extremum(s, tm, tau_m, env.L0_, false);

        env.clock_[i + 1] = tau1;
        env.adv_[i + 1] = env.adv_[i] + simpson(adv_speed(t0), adv_speed(tm), adv_speed(t1));
        env.qbar_[i + 1] = env.qbar_[i] + simpson(qb0, qbm, qb1);
        env.qunder_[i + 1] = env.qunder_[i] + simpson(qu0, qum, qu1);
        env.pbar_[i + 1] = env.pbar_[i] + simpson(pb0, pbm, pb1);
        env.punder_[i + 1] = env.punder_[i] + simpson(pu0, pum, pu1);

        t0 = t1;
        tau0 = tau1;
        qb0 = qb1;
        qu0 = qu1;
        pb0 = pb1;
        pu0 = pu1;
    }
    return env;
}

ShiftRegime classify_shift(const Scenario& s, double lambda, double lambda_tol) {
    if (s.motion.kind() != DomainMotion::Kind::PowerShift)
        throw std::invalid_argument("classify_shift: motion must be a power shift");
    ShiftRegime out;
    out.lambda = lambda;
    out.lambda_tol = lambda_tol;
    const double a = s.motion.shift_exponent();
    const double c = s.motion.shift_speed();
    const bool critical = std::abs(lambda) <= lambda_tol;

    if (a > 1.0) {
        out.verdict = Verdict::Extinct;
        out.regime = "superlinear-shift";
        out.rate = "C1 * exp(-C2 t^(2a-1))";
        return out;
    }
    if (lambda > lambda_tol) {
        out.verdict = Verdict::Extinct;
        out.regime = "fixed-domain";
        out.rate = "exp(-lambda t)";
        return out;
    }
    if (a < 1.0) {
        if (!critical) { // lambda < -tol
            out.verdict = Verdict::Survive;
            out.regime = "sublinear-shift";
            out.rate = "exp(-lambda t)";
        } else if (a < 0.5) {
            out.verdict = Verdict::Survive;
            out.regime = "critical-sublinear";
            out.rate = "bounded below by a constant";
        } else {
            out.verdict = Verdict::Extinct;
            out.regime = "critical-sublinear";
            out.rate = a == 0.5 ? "C1 * exp(-C2 ln(1+t))" : "C1 * exp(-C2 t^(2a-1))";
        }
        return out;
    }
    // Linear shift: compare the speed to the critical one.
    out.regime = "linear-shift";
    out.c_star = critical ? 0.0 : 2.0 * std::sqrt(-lambda * s.d);
    const double tol = 1e-12 * std::max(1.0, out.c_star);
    if (c < out.c_star - tol) {
        out.verdict = Verdict::Survive;
        out.rate = "locally unbounded growth";
    } else if (c <= out.c_star + tol) {
        out.verdict = Verdict::Survive;
        out.rate = "survival without explosion";
    } else {
        out.verdict = Verdict::Extinct;
        out.rate = "uniform decay";
    }
    return out;
}

} // namespace habitat
