#include "habitat/oracle.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "habitat/tridiag.hpp"

namespace habitat {

namespace {

double trace_l2(const std::vector<double>& v, double h) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s * h);
}

double fit_slope(const std::vector<double>& t, const std::vector<double>& y, double t0, double t1) {
    double st = 0, sy = 0, stt = 0, sty = 0;
    int n = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (t[i] < t0 || t[i] > t1 || !(y[i] > 0.0)) continue;
        const double ly = std::log(y[i]);
        st += t[i];
        sy += ly;
        stt += t[i] * t[i];
        sty += t[i] * ly;
        ++n;
    }
    if (n < 2) return std::nan("");
    return (n * sty - st * sy) / (n * stt - st * st);
}

} // namespace

double OracleResult::log_slope_linf(double t0, double t1) const {
    return fit_slope(times, linf, t0, t1);
}

double OracleResult::log_slope_l2(double t0, double t1) const {
    return fit_slope(times, l2, t0, t1);
}

OracleResult step_solver(const Scenario& s, const OracleOptions& opts) {
    if (opts.ny < 16) throw std::invalid_argument("step_solver: ny must be >= 16");
    const double L0 = s.motion.L0();
    const int ny = opts.ny;
    const double h = L0 / (ny + 1);
    const int steps = std::max(1, static_cast<int>(std::ceil(opts.horizon / opts.tau)));
    const double tau = opts.horizon / steps;

    OracleResult out;
    out.L0 = L0;
    out.ny = ny;
    out.tau = tau;
    const int stride = opts.slice_stride > 0 ? opts.slice_stride : std::max(1, steps / 200);

    std::vector<double> v(ny);
    for (int i = 0; i < ny; ++i) {
        const double y = (i + 1) * h;
        v[i] = opts.initial ? opts.initial(y) : s.initial(y, L0);
    }

    // Rows of the spatial operator M(t) at a given time; a row is
    // (lo, di, up) acting on (v[i-1], v[i], v[i+1]).
    auto operator_rows = [&](double t, std::vector<double>& lo, std::vector<double>& di,
                             std::vector<double>& up) {
        const MotionState m = s.motion.state(t);
        const double D = s.d * L0 * L0 / (m.L * m.L);
        const double aco = s.alpha(t), bco = s.beta(t);
        for (int i = 0; i < ny; ++i) {
            const double y = (i + 1) * h;
            const double adv = (m.Adot * L0 + y * m.Ldot) / m.L;
            const double dy = y - bco * L0;
            const double reac = s.r - 0.5 * aco * m.L * m.L / (L0 * L0) * dy * dy;
            const double pe = std::abs(adv) * h / D;
            double cl, cc, cu;
            if (pe <= 2.0) {
                cl = D / (h * h) - adv / (2.0 * h);
                cu = D / (h * h) + adv / (2.0 * h);
                cc = -2.0 * D / (h * h) + reac;
            } else if (adv > 0.0) { // upwind: information moves toward -y? v_y ~ forward diff
                cl = D / (h * h);
                cu = D / (h * h) + adv / h;
                cc = -2.0 * D / (h * h) - adv / h + reac;
            } else {
                cl = D / (h * h) - adv / h;
                cu = D / (h * h);
                cc = -2.0 * D / (h * h) + adv / h + reac;
            }
            lo[i] = cl;
            di[i] = cc;
            up[i] = cu;
        }
    };

    std::vector<double> lo0(ny), di0(ny), up0(ny), lo1(ny), di1(ny), up1(ny);
    std::vector<double> la(ny), da(ny), ua(ny), rhs(ny);

    auto record = [&](int n, double t) {
        out.times.push_back(t);
        out.l2.push_back(trace_l2(v, h));
        double mx = 0.0;
        int arg = 0;
        for (int i = 0; i < ny; ++i)
            if (std::abs(v[i]) > mx) {
                mx = std::abs(v[i]);
                arg = i;
            }
        out.linf.push_back(mx);
        out.argmax.push_back((arg + 1) * h);
        if (n % stride == 0 || n == steps) {
            out.slice_times.push_back(t);
            out.slices.push_back(v);
        }
    };

    record(0, 0.0);
    operator_rows(0.0, lo0, di0, up0);
    for (int n = 0; n < steps; ++n) {
        const double t1 = (n + 1) * tau;
        operator_rows(t1, lo1, di1, up1);
        for (int i = 0; i < ny; ++i) {
            double Av = di0[i] * v[i];
            if (i > 0) Av += lo0[i] * v[i - 1];
            if (i + 1 < ny) Av += up0[i] * v[i + 1];
            rhs[i] = v[i] + 0.5 * tau * Av;
            la[i] = -0.5 * tau * lo1[i];
            da[i] = 1.0 - 0.5 * tau * di1[i];
            ua[i] = -0.5 * tau * up1[i];
        }
        solve_tridiagonal(la, da, ua, rhs);
        v = rhs;
        lo0.swap(lo1);
        di0.swap(di1);
        up0.swap(up1);
        record(n + 1, t1);
    }
    return out;
}

std::vector<SweepCell> sweep(const Scenario& tmpl, const SweepSpec& spec) {
    std::vector<SweepCell> cells;
    const std::vector<double> rs = spec.rs.empty() ? std::vector<double>{tmpl.r} : spec.rs;
    for (double L : spec.Ls)
        for (double r : rs) {
            SweepCell c;
            c.L = L;
            c.r = r;
            cells.push_back(c);
        }

    auto run_cell = [&](SweepCell& c) {
        Scenario s = tmpl;
        s.r = c.r;
        s.motion = DomainMotion::fixed(c.L);
        s.horizon = spec.probe_time;
        OracleOptions o;
        o.ny = spec.ny;
        o.tau = spec.tau;
        o.horizon = spec.probe_time;
        OracleResult res = step_solver(s, o);
        c.probe0 = res.l2.front();
        c.probeT = res.l2.back();
        const double w = spec.probe_time / 4.0;
        c.slope_late = res.log_slope_l2(spec.probe_time - w, spec.probe_time);
        const double ratio = c.probeT / c.probe0;
        if (std::abs(std::log(ratio)) < 1e-3) c.verdict_numeric = 0; // marginal
        else c.verdict_numeric = ratio >= 1.0 ? 1 : -1;
        c.verdict_analytic = classify_fixed(s, c.L, c.r);
        if (spec.with_lambda) {
            FloquetOptions fo;
            fo.ny = spec.lambda_ny;
            fo.steps_per_period = spec.lambda_steps;
            fo.richardson = true;
            fo.keep_phi = false;
            c.lambda = floquet_lambda(s, c.L, fo).lambda;
        }
    };

    unsigned nthreads = spec.threads > 0 ? spec.threads
                                         : std::max(1u, std::thread::hardware_concurrency());
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < nthreads; ++t) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= cells.size()) return;
                run_cell(cells[i]);
            }
        });
    }
    for (auto& th : pool) th.join();
    return cells;
}

std::string sweep_csv(const std::vector<SweepCell>& cells) {
    std::ostringstream os;
    os.precision(12);
    os << "L,r,probe0,probeT,slope_late,verdict_numeric,verdict_analytic,criterion,lambda\n";
    for (const auto& c : cells) {
        os << c.L << ',' << c.r << ',' << c.probe0 << ',' << c.probeT << ',' << c.slope_late << ','
           << c.verdict_numeric << ',' << to_string(c.verdict_analytic.verdict) << ','
           << c.verdict_analytic.criterion << ',' << c.lambda << '\n';
    }
    return os.str();
}

} // namespace habitat
