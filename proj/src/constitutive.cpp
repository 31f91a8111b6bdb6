#include "ep1d/constitutive.hpp"

#include <cmath>
#include <stdexcept>

#include "ep1d/quadrature.hpp"

namespace ep1d {

namespace {
constexpr double kVacuumFloor = -1.0 + 1e-6;
constexpr double kQuadTol = 1e-12;

void validate_convexity(const std::function<double(double)>& p,
                        const std::function<double(double)>& dp) {
    // p' > 0 and p'' >= 0 on a representative density window; p'' probed by
    // centered differences since custom laws only supply (p, p').
    for (int i = 0; i <= 40; ++i) {
        const double rho = 0.1 + i * (10.0 - 0.1) / 40.0;
        const double d1 = dp(rho);
        if (!(d1 > 0.0) || !std::isfinite(d1))
            throw std::invalid_argument("PressureLaw: p'(rho) must be positive on [0.1, 10]");
        const double h = 1e-5 * rho;
        const double d2 = (dp(rho + h) - dp(rho - h)) / (2.0 * h);
        if (!(d2 >= -1e-6 * std::abs(d1)) || !std::isfinite(d2))
            throw std::invalid_argument("PressureLaw: p''(rho) must be nonnegative on [0.1, 10]");
        (void)p(rho);
    }
}
}  // namespace

PressureLaw PressureLaw::isothermal(double k) {
    if (!(k > 0.0) || !std::isfinite(k))
        throw std::invalid_argument("PressureLaw::isothermal: k must be positive");
    PressureLaw law;
    law.kind_ = "isothermal";
    law.k_ = k;
    law.p_ = [k](double rho) { return k * rho; };
    law.dp_ = [k](double) { return k; };
    return law;
}

PressureLaw PressureLaw::polytropic(double gamma, double coefficient) {
    if (!(gamma >= 1.0) || !std::isfinite(gamma))
        throw std::invalid_argument("PressureLaw::polytropic: gamma must be at least 1");
    if (!(coefficient > 0.0) || !std::isfinite(coefficient))
        throw std::invalid_argument("PressureLaw::polytropic: coefficient must be positive");
    if (gamma == 1.0) return isothermal(coefficient);
    PressureLaw law;
    law.kind_ = "polytropic";
    law.k_ = coefficient * gamma;
    law.gamma_ = gamma;
    law.coeff_ = coefficient;
    law.p_ = [coefficient, gamma](double rho) { return coefficient * std::pow(rho, gamma); };
    law.dp_ = [coefficient, gamma](double rho) {
        return coefficient * gamma * std::pow(rho, gamma - 1.0);
    };
    return law;
}

PressureLaw PressureLaw::custom(std::function<double(double)> p,
                                std::function<double(double)> dp) {
    if (!p || !dp) throw std::invalid_argument("PressureLaw::custom: p and dp required");
    validate_convexity(p, dp);
    PressureLaw law;
    law.kind_ = "custom";
    law.k_ = dp(1.0);
    law.p_ = std::move(p);
    law.dp_ = std::move(dp);
    return law;
}

double PressureLaw::sonic() const { return std::sqrt(1.0 + k_); }
double PressureLaw::slow() const { return k_ / std::sqrt(1.0 + k_); }

double PressureLaw::p(double rho) const { return p_(rho); }
double PressureLaw::dp(double rho) const { return dp_(rho); }

void PressureLaw::check_domain(double n, const char* who) const {
    if (!(n > kVacuumFloor))
        throw std::domain_error(std::string(who) +
                                ": density perturbation at or below the vacuum floor n = -1 + 1e-6");
    if (!std::isfinite(n)) throw std::domain_error(std::string(who) + ": non-finite argument");
}

double PressureLaw::w(double n) const {
    check_domain(n, "PressureLaw::w");
    if (kind_ == "isothermal") return k_ * std::log1p(n);
    if (kind_ == "polytropic")
        return coeff_ * gamma_ / (gamma_ - 1.0) * (std::pow(1.0 + n, gamma_ - 1.0) - 1.0);
    const auto& dp = dp_;
    return integrate_adaptive([&dp](double s) { return dp(1.0 + s) / (1.0 + s); }, 0.0, n,
                              kQuadTol);
}

double PressureLaw::W(double n) const {
    check_domain(n, "PressureLaw::W");
    if (kind_ == "isothermal") return k_ * ((1.0 + n) * std::log1p(n) - n);
    if (kind_ == "polytropic")
        return coeff_ / (gamma_ - 1.0) * (std::pow(1.0 + n, gamma_) - 1.0 - gamma_ * n);
    return n * w(n) - S(n);
}

double PressureLaw::S(double n) const {
    check_domain(n, "PressureLaw::S");
    if (kind_ == "isothermal") return k_ * (n - std::log1p(n));
    if (kind_ == "polytropic") return n * w(n) - W(n);
    const auto& dp = dp_;
    return integrate_adaptive([&dp](double s) { return s * dp(1.0 + s) / (1.0 + s); }, 0.0, n,
                              kQuadTol);
}

Thresholds thresholds(const PressureLaw& law) { return {law.k(), law.sonic(), law.slow()}; }

double q_of(double phi) { return std::expm1(phi); }
double dq_of(double phi) { return std::exp(phi); }
double Q_of(double phi) { return std::expm1(phi) - phi; }
double R_of(double phi) { return phi * std::expm1(phi) - std::expm1(phi) + phi; }

}  // namespace ep1d
