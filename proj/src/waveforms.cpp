#include "ep1d/waveforms.hpp"

#include "ep1d/quadrature.hpp"
#include "ep1d/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace ep1d {

namespace {

// Traveling-frame branch map with its fold located once per (c, law).
class Bernoulli {
  public:
    Bernoulli(double c, const PressureLaw& law) : c_(c), law_(&law) {
        const double k = law.k();
        if (!(c * c > k)) {
            throw std::invalid_argument(
                "traveling-wave reduction requires c^2 > k");
        }
        // d phi / d n = c^2 (1+n)^-3 - w'(n) is positive at n = 0 and turns
        // negative at the sonic fold; bracket by doubling, then bisect.
        double hi = 1.0;
        int guard = 0;
        while (slope(hi) > 0.0) {
            hi *= 2.0;
            if (++guard > 60) {
                throw std::runtime_error("sonic fold not found");
            }
        }
        double lo = 0.0;
        for (int i = 0; i < 200 && (hi - lo) > 1e-16 * (1.0 + hi); ++i) {
            double mid = 0.5 * (lo + hi);
            (slope(mid) > 0.0 ? lo : hi) = mid;
        }
        n_fold_ = 0.5 * (lo + hi);
        phi_fold_ = forward(n_fold_);
    }

    double c() const { return c_; }
    double n_fold() const { return n_fold_; }
    double phi_fold() const { return phi_fold_; }

    // phi as a function of n on the branch.
    double forward(double n) const {
        double r = 1.0 + n;
        return 0.5 * c_ * c_ * (1.0 - 1.0 / (r * r)) - law_->w(n);
    }

    // d phi / d n.
    double slope(double n) const {
        double r = 1.0 + n;
        return c_ * c_ / (r * r * r) - law_->dp(r) / r;
    }

    // Inverse of forward() on [0, n_fold].
    double density(double phi) const {
        if (!(phi >= 0.0)) {
            throw std::invalid_argument(
                "bernoulli_density: potential must be nonnegative on the "
                "compressive branch");
        }
        if (phi > phi_fold_) {
            throw std::domain_error(
                "bernoulli_density: fold exceeded, no root on the branch");
        }
        if (phi == 0.0) {
            return 0.0;
        }
        double lo = 0.0, hi = n_fold_;
        for (int i = 0; i < 200 && (hi - lo) > 1e-16 * (1.0 + hi); ++i) {
            double mid = 0.5 * (lo + hi);
            (forward(mid) < phi ? lo : hi) = mid;
        }
        return 0.5 * (lo + hi);
    }

    // d n / d phi = 1 / slope, and V'' along the branch.
    double dn_dphi(double n) const { return 1.0 / slope(n); }

  private:
    double c_;
    const PressureLaw* law_;
    double n_fold_ = 0.0;
    double phi_fold_ = 0.0;
};

double scan_segment(const Bernoulli& b, double from, double to, double tol) {
    return integrate_adaptive(
        [&](double s) { return q_of(s) - b.density(s); }, from, to, tol);
}

}  // namespace

State packet(const Grid& g, const PressureLaw& law, PacketShape shape,
             double amplitude, double width, double center, VelocityMode mode) {
    if (!(amplitude >= 0.0) || amplitude > 0.5 || !std::isfinite(amplitude)) {
        throw std::invalid_argument("packet: amplitude must lie in [0, 0.5]");
    }
    if (!(width >= 4.0 * g.dx()) || !std::isfinite(width)) {
        throw std::invalid_argument(
            "packet: width must be at least 4 dx for the grid to resolve it");
    }
    Field n = Field::sample(g, [&](double x) {
        double z = g.wrap(x - center) / width;
        if (shape == PacketShape::gaussian) {
            return amplitude * std::exp(-z * z);
        }
        double s = 1.0 / std::cosh(z);
        return amplitude * s * s;
    });
    Field u = Field::zeros(g);
    if (mode == VelocityMode::right_moving) {
        u = n;
        u *= law.sonic();
    }
    return State(std::move(n), std::move(u), 0.0);
}

BernoulliFold bernoulli_fold(double c, const PressureLaw& law) {
    Bernoulli b(c, law);
    return {b.n_fold(), b.phi_fold()};
}

double bernoulli_density(double phi, double c, const PressureLaw& law) {
    return Bernoulli(c, law).density(phi);
}

double sagdeev_potential(double phi, double c, const PressureLaw& law) {
    Bernoulli b(c, law);
    if (!(phi >= 0.0)) {
        throw std::invalid_argument("sagdeev_potential: phi must be >= 0");
    }
    if (phi > b.phi_fold()) {
        throw std::domain_error(
            "sagdeev_potential: fold exceeded, branch undefined");
    }
    if (phi == 0.0) {
        return 0.0;
    }
    return scan_segment(b, 0.0, phi, 1e-13);
}

SagdeevScan sagdeev_scan(double c, const PressureLaw& law) {
    Bernoulli b(c, law);
    SagdeevScan out;
    out.phi_fold = b.phi_fold();

    const int segments = 400;
    const double h = b.phi_fold() / segments;
    double v_prev = 0.0;
    double phi_prev = 0.0;
    for (int i = 1; i <= segments; ++i) {
        double phi_i = (i == segments) ? b.phi_fold() : i * h;
        double v = v_prev + scan_segment(b, phi_prev, phi_i, 1e-13);
        if (v <= 0.0) {
            if (i == 1) {
                // V curves downward immediately: degenerate branch
                // (c at or below sonic), no positive well.
                return out;
            }
            // Refine the first return to zero between phi_prev and phi_i.
            double lo = phi_prev, hi = phi_i;
            for (int it = 0; it < 80 && (hi - lo) > 1e-14; ++it) {
                double mid = 0.5 * (lo + hi);
                double vm = v_prev + scan_segment(b, phi_prev, mid, 1e-14);
                (vm > 0.0 ? lo : hi) = mid;
            }
            out.exists = true;
            out.phi_max = 0.5 * (lo + hi);
            return out;
        }
        v_prev = v;
        phi_prev = phi_i;
    }
    out.fold_before_return = true;  // V still positive at the fold
    return out;
}

namespace {

// Dense table of V on [0, phi_max] with exact nodal derivatives
// V' = q - n(phi), interpolated by cubic Hermite pieces. The cumulative
// integral uses the derivative-corrected trapezoid, fifth-order accurate
// per interval.
class WellTable {
  public:
    WellTable(const Bernoulli& b, double phi_max) : h_(phi_max / kSize) {
        f_.resize(kSize + 1);
        fp_.resize(kSize + 1);
        V_.resize(kSize + 1);
        for (int i = 0; i <= kSize; ++i) {
            double phi = (i == kSize) ? phi_max : i * h_;
            double n = b.density(phi);
            f_[i] = q_of(phi) - n;
            fp_[i] = dq_of(phi) - b.dn_dphi(n);
        }
        V_[0] = 0.0;
        for (int i = 0; i < kSize; ++i) {
            V_[i + 1] = V_[i] + 0.5 * h_ * (f_[i] + f_[i + 1]) +
                        h_ * h_ / 12.0 * (fp_[i] - fp_[i + 1]);
        }
    }

    double operator()(double phi) const {
        if (phi <= 0.0) {
            return 0.0;
        }
        double s = std::min(phi / h_, double(kSize) - 1e-9);
        int i = std::min(int(s), kSize - 1);
        double t = s - i;
        double t2 = t * t, t3 = t2 * t;
        double val = (2 * t3 - 3 * t2 + 1) * V_[i] + (t3 - 2 * t2 + t) * h_ * f_[i] +
                     (-2 * t3 + 3 * t2) * V_[i + 1] + (t3 - t2) * h_ * f_[i + 1];
        return std::max(val, 0.0);
    }

    double slope_end() const { return f_[kSize]; }      // V'(phi_max) < 0
    double curvature_end() const { return fp_[kSize]; }  // V''(phi_max)
    double curvature_origin() const { return fp_[0]; }   // decay rate squared

  private:
    static constexpr int kSize = 4096;
    double h_;
    std::vector<double> f_, fp_, V_;
};

}  // namespace

SolitaryProfile solitary_profile(double c, const PressureLaw& law, const Grid& g) {
    if (!(c > law.sonic())) {
        throw std::invalid_argument(
            "solitary_profile: speed must exceed sqrt(1+k)");
    }
    SagdeevScan scan = sagdeev_scan(c, law);
    if (!scan.exists) {
        throw std::domain_error(
            scan.fold_before_return
                ? "solitary_profile: sonic fold reached before the potential "
                  "well closes (speed at or above the existence limit)"
                : "solitary_profile: no positive potential well at this speed");
    }
    Bernoulli b(c, law);
    const double peak = scan.phi_max;
    WellTable V(b, peak);

    // Even Taylor start at the peak through x^4: the turning point is
    // degenerate for the first-order form, so leave it analytically.
    //   phi'' = V'(phi), phi'''' = V''(phi) phi'' at the peak.
    const double d2 = V.slope_end();
    const double d4 = V.curvature_end() * d2;
    auto taylor = [&](double x) {
        double x2 = x * x;
        return peak + 0.5 * d2 * x2 + d4 * x2 * x2 / 24.0;
    };
    const double x_start = 0.05;

    // First-order march phi' = -sqrt(2 V(phi)), contractive toward the tail;
    // switch to the exact exponential rate once phi is deep in the linear
    // regime so interpolation noise never touches the far tail.
    const double phi_switch = std::max(1e-12, 1e-6 * peak);
    const double kappa0 = std::sqrt(std::max(V.curvature_origin(), 0.0));

    const int half = g.points / 2;
    std::vector<double> prof(static_cast<size_t>(half) + 1, 0.0);
    prof[0] = peak;

    double x = x_start;
    double phi = taylor(x_start);
    bool tail = false;
    double x_sw = 0.0, phi_sw = 0.0, kappa = kappa0;
    auto rhs1 = [&](double p) { return -std::sqrt(2.0 * V(p)); };

    for (int j = 1; j <= half; ++j) {
        const double target = j * g.dx();
        if (target <= x_start) {
            prof[static_cast<size_t>(j)] = taylor(target);
            continue;
        }
        if (!tail) {
            const int substeps =
                std::max(1, static_cast<int>(std::ceil((target - x) / (g.dx() / 32.0))));
            const double hm = (target - x) / substeps;
            for (int m = 0; m < substeps && !tail; ++m) {
                double k1 = rhs1(phi);
                double k2 = rhs1(phi + 0.5 * hm * k1);
                double k3 = rhs1(phi + 0.5 * hm * k2);
                double k4 = rhs1(phi + hm * k3);
                phi += hm / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
                x += hm;
                if (phi <= phi_switch) {
                    phi = std::max(phi, 1e-300);
                    x_sw = x;
                    phi_sw = phi;
                    double v_here = V(phi);
                    kappa = v_here > 0.0 ? std::sqrt(2.0 * v_here) / phi : kappa0;
                    tail = true;
                }
            }
            if (!tail) {
                x = target;  // absorb substep round-off
            }
        }
        prof[static_cast<size_t>(j)] =
            tail ? phi_sw * std::exp(-kappa * (target - x_sw))
                 : phi;
    }

    const int n_pts = g.points;
    Field phi_f(g), n_f(g), u_f(g);
    for (int j = 0; j < n_pts; ++j) {
        int idx = std::abs(j - half);
        double p = prof[static_cast<size_t>(idx)];
        double nn = b.density(p);
        phi_f[j] = p;
        n_f[j] = nn;
        u_f[j] = c * nn / (1.0 + nn);
    }

    const double tail_size = std::max({prof[static_cast<size_t>(half)],
                                       n_f[0], u_f[0]});
    if (tail_size > 1e-10) {
        throw std::domain_error(
            "solitary_profile: grid too short, tails have not decayed to "
            "1e-10 at the boundary");
    }

    Field res = derivative(phi_f, 2);
    res *= -1.0;
    for (int j = 0; j < n_pts; ++j) {
        res[j] += q_of(phi_f[j]) - n_f[j];
    }

    SolitaryProfile out;
    out.c = c;
    out.phi_max = peak;
    out.n = std::move(n_f);
    out.u = std::move(u_f);
    out.phi = std::move(phi_f);
    out.residual = norms(res).l2;
    return out;
}

}  // namespace ep1d
