#pragma once

#include <vector>

namespace habitat {

/// Snapshot of the habitat geometry at one time.
struct MotionState {
    double A, Adot, Addot;
    double L, Ldot, Lddot;
};

/// Left endpoint A(t) and length L(t) of the habitat, with first and second
/// derivatives. Immutable after construction.
class DomainMotion {
public:
    enum class Kind { Fixed, PowerShift, LinearGrowth, Custom };

    static DomainMotion fixed(double L0);
    /// A(t) = c * ((1+t)^a - 1), L constant. A(0) = 0 so the frame transform
    /// is the identity at t = 0; Adot and Addot match the family c(1+t)^a.
    static DomainMotion power_shift(double c, double exponent, double L0);
    static DomainMotion linear_growth(double L0, double slope);
    /// Tabulated A and L with monotone cubic (PCHIP) interpolation.
    static DomainMotion custom(std::vector<double> t, std::vector<double> A, std::vector<double> L);

    double A(double t) const;
    double Adot(double t) const;
    double Addot(double t) const;
    double L(double t) const;
    double Ldot(double t) const;
    double Lddot(double t) const;
    MotionState state(double t) const;

    Kind kind() const { return kind_; }
    bool is_fixed() const { return kind_ == Kind::Fixed; }
    double L0() const { return L(0.0); }
    /// Shift parameters (PowerShift only).
    double shift_speed() const { return c_; }
    double shift_exponent() const { return a_; }

    /// Throws if L(t) <= 0 anywhere on a dense sample of [0, horizon].
    void validate(double horizon) const;

private:
    struct Pchip {
        std::vector<double> x, y, slope;
        double eval(double t, int deriv) const;
    };

    Kind kind_ = Kind::Fixed;
    double L0_ = 1.0;
    double c_ = 0.0;        // PowerShift speed
    double a_ = 0.0;        // PowerShift exponent
    double slope_ = 0.0;    // LinearGrowth slope
    Pchip customA_, customL_;
};

} // namespace habitat
