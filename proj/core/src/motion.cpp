#include "habitat/motion.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace habitat {

namespace {

std::vector<double> pchip_slopes(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    std::vector<double> d(n, 0.0);
    if (n == 1) return d;
    std::vector<double> delta(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) delta[i] = (y[i + 1] - y[i]) / (x[i + 1] - x[i]);
    if (n == 2) {
        d[0] = d[1] = delta[0];
        return d;
    }
    // Fritsch-Carlson monotone slopes
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (delta[i - 1] * delta[i] <= 0.0) {
            d[i] = 0.0;
        } else {
            double w1 = 2.0 * (x[i + 1] - x[i]) + (x[i] - x[i - 1]);
            double w2 = (x[i + 1] - x[i]) + 2.0 * (x[i] - x[i - 1]);
            d[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
        }
    }
    auto endpoint = [](double h0, double h1, double d0, double d1) {
        double d = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
        if (d * d0 <= 0.0) d = 0.0;
        else if (d0 * d1 <= 0.0 && std::abs(d) > 3.0 * std::abs(d0)) d = 3.0 * d0;
        return d;
    };
    d[0] = endpoint(x[1] - x[0], x[2] - x[1], delta[0], delta[1]);
    d[n - 1] = endpoint(x[n - 1] - x[n - 2], x[n - 2] - x[n - 3], delta[n - 2], delta[n - 3]);
    return d;
}

} // namespace

double DomainMotion::Pchip::eval(double t, int deriv) const {
    if (x.empty()) throw std::logic_error("DomainMotion: empty custom table");
    const std::size_t n = x.size();
    double tc = std::clamp(t, x.front(), x.back());
    std::size_t i = std::upper_bound(x.begin(), x.end(), tc) - x.begin();
    i = std::clamp<std::size_t>(i, 1, n - 1) - 1;
    const double h = x[i + 1] - x[i];
    const double s = (tc - x[i]) / h;
    const double y0 = y[i], y1 = y[i + 1], d0 = slope[i], d1 = slope[i + 1];
    // Hermite basis and its derivatives in s
    switch (deriv) {
        case 0: {
            double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
            double h10 = s * (1 - s) * (1 - s);
            double h01 = s * s * (3 - 2 * s);
            double h11 = s * s * (s - 1);
            return h00 * y0 + h10 * h * d0 + h01 * y1 + h11 * h * d1;
        }
        case 1: {
            double h00 = 6 * s * (s - 1);
            double h10 = (1 - s) * (1 - 3 * s);
            double h01 = -6 * s * (s - 1);
            double h11 = s * (3 * s - 2);
            return (h00 * y0 + h01 * y1) / h + h10 * d0 + h11 * d1;
        }
        case 2: {
            double h00 = 12 * s - 6;
            double h10 = 6 * s - 4;
            double h01 = 6 - 12 * s;
            double h11 = 6 * s - 2;
            return (h00 * y0 + h01 * y1) / (h * h) + (h10 * d0 + h11 * d1) / h;
        }
        default:
            throw std::logic_error("Pchip: unsupported derivative order");
    }
}

DomainMotion DomainMotion::fixed(double L0) {
    if (L0 <= 0.0) throw std::invalid_argument("DomainMotion: nonpositive length");
    DomainMotion m;
    m.kind_ = Kind::Fixed;
    m.L0_ = L0;
    return m;
}

DomainMotion DomainMotion::power_shift(double c, double exponent, double L0) {
    if (L0 <= 0.0) throw std::invalid_argument("DomainMotion: nonpositive length");
    if (c < 0.0) throw std::invalid_argument("DomainMotion: shift speed must be >= 0");
    DomainMotion m;
    m.kind_ = Kind::PowerShift;
    m.L0_ = L0;
    m.c_ = c;
    m.a_ = exponent;
    return m;
}

DomainMotion DomainMotion::linear_growth(double L0, double slope) {
    if (L0 <= 0.0) throw std::invalid_argument("DomainMotion: nonpositive length");
    DomainMotion m;
    m.kind_ = Kind::LinearGrowth;
    m.L0_ = L0;
    m.slope_ = slope;
    return m;
}

DomainMotion DomainMotion::custom(std::vector<double> t, std::vector<double> A, std::vector<double> L) {
    if (t.size() < 2 || t.size() != A.size() || t.size() != L.size())
        throw std::invalid_argument("DomainMotion: custom table needs matching t/A/L with >= 2 rows");
    for (std::size_t i = 0; i + 1 < t.size(); ++i)
        if (t[i + 1] <= t[i]) throw std::invalid_argument("DomainMotion: custom times must be increasing");
    DomainMotion m;
    m.kind_ = Kind::Custom;
    m.customA_ = {t, A, pchip_slopes(t, A)};
    m.customL_ = {t, L, pchip_slopes(t, L)};
    m.L0_ = m.customL_.eval(t.front(), 0);
    return m;
}

double DomainMotion::A(double t) const {
    switch (kind_) {
        case Kind::Fixed:
        case Kind::LinearGrowth: return 0.0;
        case Kind::PowerShift: return c_ * (std::pow(1.0 + t, a_) - 1.0);
        case Kind::Custom: return customA_.eval(t, 0);
    }
    return 0.0;
}

double DomainMotion::Adot(double t) const {
    switch (kind_) {
        case Kind::Fixed:
        case Kind::LinearGrowth: return 0.0;
        case Kind::PowerShift: return c_ * a_ * std::pow(1.0 + t, a_ - 1.0);
        case Kind::Custom: return customA_.eval(t, 1);
    }
    return 0.0;
}

double DomainMotion::Addot(double t) const {
    switch (kind_) {
        case Kind::Fixed:
        case Kind::LinearGrowth: return 0.0;
        case Kind::PowerShift: return c_ * a_ * (a_ - 1.0) * std::pow(1.0 + t, a_ - 2.0);
        case Kind::Custom: return customA_.eval(t, 2);
    }
    return 0.0;
}

double DomainMotion::L(double t) const {
    switch (kind_) {
        case Kind::Fixed:
        case Kind::PowerShift: return L0_;
        case Kind::LinearGrowth: return L0_ + slope_ * t;
        case Kind::Custom: return customL_.eval(t, 0);
    }
    return L0_;
}

double DomainMotion::Ldot(double t) const {
    switch (kind_) {
        case Kind::Fixed:
        case Kind::PowerShift: return 0.0;
        case Kind::LinearGrowth: return slope_;
        case Kind::Custom: return customL_.eval(t, 1);
    }
    return 0.0;
}

double DomainMotion::Lddot(double t) const {
    if (kind_ == Kind::Custom) return customL_.eval(t, 2);
    return 0.0;
}

MotionState DomainMotion::state(double t) const {
    return {A(t), Adot(t), Addot(t), L(t), Ldot(t), Lddot(t)};
}

void DomainMotion::validate(double horizon) const {
    const int samples = 4096;
    for (int i = 0; i <= samples; ++i) {
        double t = horizon * i / samples;
        if (L(t) <= 0.0) throw std::invalid_argument("DomainMotion: nonpositive length on horizon");
    }
}

} // namespace habitat
