#pragma once

#include <functional>
#include <string>

namespace ep1d {

// Barotropic ion pressure closure. Everything downstream touches the law
// through the enthalpy-type potentials:
//   w'(s) = p'(1+s)/(1+s), w(0) = 0,
//   W(n)  = integral_0^n w,
//   S(n)  = n w(n) - W(n)  (= integral_0^n s w'(s) ds, so S >= 0),
// and the sound-speed-squared k = p'(1). Isothermal and polytropic laws use
// closed forms; a custom (p, p') pair falls back to adaptive quadrature at
// 1e-12. Arguments at or below the vacuum floor n = -1 + 1e-6 are rejected:
// the momentum flux loses hyperbolicity there and no downstream quantity is
// meaningful.
class PressureLaw {
public:
    static PressureLaw isothermal(double k);
    static PressureLaw polytropic(double gamma, double coefficient);
    static PressureLaw custom(std::function<double(double)> p, std::function<double(double)> dp);

    double k() const { return k_; }
    double sonic() const;  // sqrt(1 + k), fastest linear wave speed
    double slow() const;   // k / sqrt(1 + k), slow-regime observer ceiling

    double p(double rho) const;
    double dp(double rho) const;
    double w(double n) const;
    double W(double n) const;
    double S(double n) const;

    const std::string& kind() const { return kind_; }
    double gamma() const { return gamma_; }
    double coefficient() const { return coeff_; }

private:
    PressureLaw() = default;
    void check_domain(double n, const char* who) const;

    std::string kind_;
    double k_ = 0.0;
    double gamma_ = 0.0;   // polytropic exponent, 0 when unused
    double coeff_ = 0.0;   // polytropic coefficient, 0 when unused
    std::function<double(double)> p_, dp_;
};

struct Thresholds {
    double k;
    double sonic;
    double slow;
};
Thresholds thresholds(const PressureLaw& law);

// Boltzmann electron response and its potentials:
//   q(phi) = e^phi - 1, Q(phi) = e^phi - 1 - phi, R(phi) = phi q - Q >= 0.
double q_of(double phi);
double dq_of(double phi);  // q'(phi) = e^phi
double Q_of(double phi);
double R_of(double phi);

}  // namespace ep1d
