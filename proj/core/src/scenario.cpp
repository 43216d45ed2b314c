#include "habitat/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <json.hpp>

namespace habitat {

using nlohmann::json;

double InitialDatum::operator()(double yy, double L0) const {
    if (kind == Kind::Sine) return std::sin(std::numbers::pi * yy / L0);
    if (yy <= y.front()) return v.front();
    if (yy >= y.back()) return v.back();
    auto it = std::upper_bound(y.begin(), y.end(), yy);
    std::size_t i = (it - y.begin()) - 1;
    double s = (yy - y[i]) / (y[i + 1] - y[i]);
    return (1.0 - s) * v[i] + s * v[i + 1];
}

void Scenario::validate() const {
    if (d <= 0.0) throw ScenarioError("d", "diffusivity must be positive");
    if (r <= 0.0) throw ScenarioError("r", "growth rate must be positive");
    if (T <= 0.0) throw ScenarioError("T", "period must be positive");
    if (horizon <= 0.0) throw ScenarioError("horizon", "horizon must be positive");
    if (alpha.period() != T) throw ScenarioError("alpha.period", "mismatched periods");
    if (beta.period() != T) throw ScenarioError("beta.period", "mismatched periods");
    if (alpha.min_on_period() <= 0.0) throw ScenarioError("alpha", "alpha must be positive");
    try {
        motion.validate(horizon);
    } catch (const std::exception& e) {
        throw ScenarioError("motion", e.what());
    }
    if (initial.kind == InitialDatum::Kind::Tabulated) {
        if (initial.y.size() < 2 || initial.y.size() != initial.v.size())
            throw ScenarioError("initial", "tabulated profile needs matching y/v with >= 2 rows");
    }
    if (c_shift < 0.0) throw ScenarioError("c_shift", "shift constant must be >= 0");
}

namespace {

PeriodicCoefficient parse_coefficient(const json& j, double T, const std::string& path) {
    if (!j.is_object() || !j.contains("mean"))
        throw ScenarioError(path, "expected object with 'mean'");
    std::vector<Harmonic> hs;
    if (j.contains("harmonics")) {
        for (std::size_t i = 0; i < j["harmonics"].size(); ++i) {
            const auto& h = j["harmonics"][i];
            Harmonic out;
            out.amplitude = h.at("amp").get<double>();
            out.multiple = h.at("k").get<int>();
            if (out.multiple < 1)
                throw ScenarioError(path + ".harmonics[" + std::to_string(i) + "].k",
                                    "multiple must be >= 1");
            out.phase = h.value("phase", 0.0);
            hs.push_back(out);
        }
    }
    return PeriodicCoefficient(j["mean"].get<double>(), std::move(hs), T);
}

DomainMotion parse_motion(const json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "fixed") {
        double L0 = j.at("L0").get<double>();
        if (L0 <= 0.0) throw ScenarioError("motion.L0", "nonpositive length");
        return DomainMotion::fixed(L0);
    }
    if (kind == "power_shift") {
        double L0 = j.at("L0").get<double>();
        if (L0 <= 0.0) throw ScenarioError("motion.L0", "nonpositive length");
        return DomainMotion::power_shift(j.at("c").get<double>(), j.at("a").get<double>(), L0);
    }
    if (kind == "linear_growth") {
        double L0 = j.at("L0").get<double>();
        if (L0 <= 0.0) throw ScenarioError("motion.L0", "nonpositive length");
        return DomainMotion::linear_growth(L0, j.at("slope").get<double>());
    }
    if (kind == "custom") {
        return DomainMotion::custom(j.at("t").get<std::vector<double>>(),
                                    j.at("A").get<std::vector<double>>(),
                                    j.at("L").get<std::vector<double>>());
    }
    throw ScenarioError("motion.kind", "unknown kind '" + kind + "'");
}

} // namespace

Scenario parse_scenario(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ScenarioError("<document>", std::string("malformed JSON: ") + e.what());
    }
    Scenario s;
    try {
        s.d = j.at("d").get<double>();
        s.r = j.at("r").get<double>();
        s.T = j.at("T").get<double>();
        s.horizon = j.at("horizon").get<double>();
        s.alpha = parse_coefficient(j.at("alpha"), s.T, "alpha");
        s.beta = parse_coefficient(j.at("beta"), s.T, "beta");
        s.motion = parse_motion(j.at("motion"));
        if (j.contains("initial")) {
            const auto& ji = j["initial"];
            const std::string kind = ji.value("kind", "sine");
            if (kind == "sine") {
                s.initial.kind = InitialDatum::Kind::Sine;
            } else if (kind == "tabulated") {
                s.initial.kind = InitialDatum::Kind::Tabulated;
                s.initial.y = ji.at("y").get<std::vector<double>>();
                s.initial.v = ji.at("v").get<std::vector<double>>();
            } else {
                throw ScenarioError("initial.kind", "unknown kind '" + kind + "'");
            }
        }
        s.c_shift = j.value("c_shift", 0.0);
    } catch (const ScenarioError&) {
        throw;
    } catch (const json::exception& e) {
        throw ScenarioError("<document>", std::string("missing or ill-typed field: ") + e.what());
    }
    s.validate();
    return s;
}

std::string scenario_to_json(const Scenario& s) {
    json j;
    j["d"] = s.d;
    j["r"] = s.r;
    j["T"] = s.T;
    j["horizon"] = s.horizon;
    auto coeff = [](const PeriodicCoefficient& c) {
        json out;
        out["mean"] = c.mean();
        out["harmonics"] = json::array();
        for (const auto& h : c.harmonics())
            out["harmonics"].push_back({{"amp", h.amplitude}, {"k", h.multiple}, {"phase", h.phase}});
        return out;
    };
    j["alpha"] = coeff(s.alpha);
    j["beta"] = coeff(s.beta);
    json m;
    switch (s.motion.kind()) {
        case DomainMotion::Kind::Fixed:
            m = {{"kind", "fixed"}, {"L0", s.motion.L0()}};
            break;
        case DomainMotion::Kind::PowerShift:
            m = {{"kind", "power_shift"}, {"c", s.motion.shift_speed()},
                 {"a", s.motion.shift_exponent()}, {"L0", s.motion.L0()}};
            break;
        case DomainMotion::Kind::LinearGrowth:
            m = {{"kind", "linear_growth"}, {"L0", s.motion.L0()}, {"slope", s.motion.Ldot(0.0)}};
            break;
        case DomainMotion::Kind::Custom:
            m = {{"kind", "custom"}};
            break;
    }
    j["motion"] = m;
    j["initial"] = {{"kind", s.initial.kind == InitialDatum::Kind::Sine ? "sine" : "tabulated"}};
    j["c_shift"] = s.c_shift;
    return j.dump(2);
}

double eval_x_opt(const Scenario& s, double t) { return s.x_opt(t); }

} // namespace habitat
