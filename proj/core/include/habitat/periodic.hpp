#pragma once

#include <functional>
#include <vector>

namespace habitat {

/// One Fourier-sine term: amplitude * sin(multiple * (2*pi/T) * t + phase).
struct Harmonic {
    double amplitude = 0.0;
    int multiple = 1;
    double phase = 0.0;
};

/// T-periodic coefficient of the form mean + sum of sine harmonics.
/// Immutable after construction; evaluation is thread-safe.
class PeriodicCoefficient {
public:
    PeriodicCoefficient() = default;
    PeriodicCoefficient(double mean, std::vector<Harmonic> harmonics, double period);

    static PeriodicCoefficient constant(double value, double period);

    double operator()(double t) const;
    double mean() const { return mean_; }
    double period() const { return period_; }
    const std::vector<Harmonic>& harmonics() const { return harmonics_; }

    /// Minimum over one period on a dense sample (used for positivity checks).
    double min_on_period(int samples = 4096) const;
    bool positive_on_period(int samples = 4096) const { return min_on_period(samples) > 0.0; }

    /// True when the coefficient has no harmonic content.
    bool is_constant() const;

private:
    double mean_ = 0.0;
    std::vector<Harmonic> harmonics_;
    double period_ = 1.0;
};

/// (1/T) * integral of f over [0, T], composite Gauss-Legendre.
/// Panels are doubled until two successive estimates differ by < 1e-11.
double periodic_mean(const std::function<double(double)>& f, double period);

/// Definite integral of f over [a, b] with n-panel composite 64-point Gauss-Legendre.
double integrate_gl(const std::function<double(double)>& f, double a, double b, int panels);

} // namespace habitat
