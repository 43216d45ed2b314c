#include "habitat/periodic.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace habitat {

namespace {

// 64-point Gauss-Legendre nodes/weights on [-1, 1], generated once by Newton
// iteration on the Legendre polynomial.
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

GaussRule make_gauss64() {
    constexpr int n = 64;
    GaussRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = -x;
        rule.weights[i] = w;
        rule.nodes[n - 1 - i] = x;
        rule.weights[n - 1 - i] = w;
    }
    return rule;
}

const GaussRule& gauss64() {
    static const GaussRule rule = make_gauss64();
    return rule;
}

} // namespace

PeriodicCoefficient::PeriodicCoefficient(double mean, std::vector<Harmonic> harmonics, double period)
    : mean_(mean), harmonics_(std::move(harmonics)), period_(period) {
    if (period_ <= 0.0) throw std::invalid_argument("PeriodicCoefficient: period must be positive");
}

PeriodicCoefficient PeriodicCoefficient::constant(double value, double period) {
    return PeriodicCoefficient(value, {}, period);
}

double PeriodicCoefficient::operator()(double t) const {
    double v = mean_;
    const double omega = 2.0 * std::numbers::pi / period_;
    for (const auto& h : harmonics_) v += h.amplitude * std::sin(h.multiple * omega * t + h.phase);
    return v;
}

double PeriodicCoefficient::min_on_period(int samples) const {
    double m = (*this)(0.0);
    for (int i = 1; i <= samples; ++i) {
        m = std::min(m, (*this)(period_ * i / samples));
    }
    return m;
}

bool PeriodicCoefficient::is_constant() const {
    for (const auto& h : harmonics_)
        if (h.amplitude != 0.0) return false;
    return true;
}

double integrate_gl(const std::function<double(double)>& f, double a, double b, int panels) {
    const auto& rule = gauss64();
    double total = 0.0;
    const double dx = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        const double lo = a + p * dx;
        double sum = 0.0;
        for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
            sum += rule.weights[q] * f(lo + 0.5 * dx * (rule.nodes[q] + 1.0));
        }
        total += 0.5 * dx * sum;
    }
    return total;
}

double periodic_mean(const std::function<double(double)>& f, double period) {
    if (period <= 0.0) throw std::invalid_argument("periodic_mean: period must be positive");
    int panels = 1;
    double prev = integrate_gl(f, 0.0, period, panels);
    for (int iter = 0; iter < 12; ++iter) {
        panels *= 2;
        double cur = integrate_gl(f, 0.0, period, panels);
        if (std::abs(cur - prev) < 1e-11) return cur / period;
        prev = cur;
    }
    return prev / period;
}

} // namespace habitat
