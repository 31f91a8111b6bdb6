#include "ep1d/virial.hpp"

#include "ep1d/poisson.hpp"
#include "ep1d/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace ep1d {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// PCHIP slope rules: C^1, shape preserving (no new extrema between samples).
double pchip_interior(double h_prev, double h_next, double d_prev, double d_next) {
    if (d_prev == 0.0 || d_next == 0.0 || (d_prev > 0.0) != (d_next > 0.0)) return 0.0;
    const double w1 = 2.0 * h_next + h_prev;
    const double w2 = h_next + 2.0 * h_prev;
    return (w1 + w2) / (w1 / d_prev + w2 / d_next);
}

// One-sided boundary slope from the two nearest secants, clipped so the
// boundary piece stays monotone with its secant.
double pchip_endpoint(double h0, double h1, double d0, double d1) {
    double m = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if (m * d0 <= 0.0) return 0.0;
    if ((d0 > 0.0) != (d1 > 0.0) && std::abs(m) > 3.0 * std::abs(d0)) return 3.0 * d0;
    return m;
}

void require_path_table(const std::vector<double>& t, const std::vector<double>& y) {
    if (t.size() < 2 || t.size() != y.size())
        throw std::invalid_argument("ObserverPath::sampled: need >= 2 samples of equal length");
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (!std::isfinite(t[i]) || !std::isfinite(y[i]))
            throw std::invalid_argument("ObserverPath::sampled: non-finite sample");
        if (i > 0 && !(t[i] > t[i - 1]))
            throw std::invalid_argument("ObserverPath::sampled: times must increase strictly");
    }
}

}  // namespace

// ---------------------------------------------------------------------------
// ObserverPath
// ---------------------------------------------------------------------------

ObserverPath ObserverPath::at_rest(double y0) {
    ObserverPath p;
    p.kind_ = "static";
    p.y0_ = y0;
    return p;
}

ObserverPath ObserverPath::constant_speed(double y0, double speed) {
    if (!std::isfinite(y0) || !std::isfinite(speed))
        throw std::invalid_argument("ObserverPath::constant_speed: non-finite parameter");
    ObserverPath p;
    p.kind_ = "constant-speed";
    p.y0_ = y0;
    p.c_ = speed;
    return p;
}

ObserverPath ObserverPath::sampled(std::vector<double> t, std::vector<double> y) {
    require_path_table(t, y);
    const std::size_t n = t.size();
    std::vector<double> m(n, 0.0);
    if (n == 2) {
        m[0] = m[1] = (y[1] - y[0]) / (t[1] - t[0]);
    } else {
        std::vector<double> h(n - 1), d(n - 1);
        for (std::size_t i = 0; i + 1 < n; ++i) {
            h[i] = t[i + 1] - t[i];
            d[i] = (y[i + 1] - y[i]) / h[i];
        }
        for (std::size_t i = 1; i + 1 < n; ++i) m[i] = pchip_interior(h[i - 1], h[i], d[i - 1], d[i]);
        m[0] = pchip_endpoint(h[0], h[1], d[0], d[1]);
        // right endpoint mirrors the left rule on reversed data
        m[n - 1] = pchip_endpoint(h[n - 2], h[n - 3], d[n - 2], d[n - 3]);
    }
    return sampled(std::move(t), std::move(y), std::move(m));
}

ObserverPath ObserverPath::sampled(std::vector<double> t, std::vector<double> y,
                                   std::vector<double> ydot) {
    require_path_table(t, y);
    if (ydot.size() != t.size())
        throw std::invalid_argument("ObserverPath::sampled: slope table size mismatch");
    for (double m : ydot)
        if (!std::isfinite(m)) throw std::invalid_argument("ObserverPath::sampled: non-finite slope");
    ObserverPath p;
    p.kind_ = "sampled";
    p.ts_ = std::move(t);
    p.ys_ = std::move(y);
    p.ms_ = std::move(ydot);
    return p;
}

std::size_t ObserverPath::interval(double t) const {
    const auto it = std::upper_bound(ts_.begin(), ts_.end(), t);
    const std::size_t idx = static_cast<std::size_t>(it - ts_.begin());
    if (idx == 0) return 0;
    return std::min(idx - 1, ts_.size() - 2);
}

double ObserverPath::y(double t) const {
    if (kind_ == "static") return y0_;
    if (kind_ == "constant-speed") return y0_ + c_ * t;
    if (t <= ts_.front()) return ys_.front() + ms_.front() * (t - ts_.front());
    if (t >= ts_.back()) return ys_.back() + ms_.back() * (t - ts_.back());
    const std::size_t i = interval(t);
    const double h = ts_[i + 1] - ts_[i];
    const double x = (t - ts_[i]) / h;
    const double h00 = (1.0 + 2.0 * x) * (1.0 - x) * (1.0 - x);
    const double h10 = x * (1.0 - x) * (1.0 - x);
    const double h01 = x * x * (3.0 - 2.0 * x);
    const double h11 = x * x * (x - 1.0);
    return ys_[i] * h00 + h * ms_[i] * h10 + ys_[i + 1] * h01 + h * ms_[i + 1] * h11;
}

double ObserverPath::ydot(double t) const {
    if (kind_ == "static") return 0.0;
    if (kind_ == "constant-speed") return c_;
    if (t <= ts_.front()) return ms_.front();
    if (t >= ts_.back()) return ms_.back();
    const std::size_t i = interval(t);
    const double h = ts_[i + 1] - ts_[i];
    const double x = (t - ts_[i]) / h;
    const double g00 = 6.0 * x * (x - 1.0);
    const double g10 = (3.0 * x - 1.0) * (x - 1.0);
    const double g11 = x * (3.0 * x - 2.0);
    return (ys_[i] * g00 + h * ms_[i] * g10 - ys_[i + 1] * g00 + h * ms_[i + 1] * g11) / h;
}

double ObserverPath::max_speed() const {
    if (kind_ == "static") return 0.0;
    if (kind_ == "constant-speed") return std::abs(c_);
    double best = std::max(std::abs(ms_.front()), std::abs(ms_.back()));
    for (std::size_t i = 0; i + 1 < ts_.size(); ++i) {
        const double h = ts_[i + 1] - ts_[i];
        // Hermite derivative in the unit variable is the quadratic
        // a x^2 + b x + c below; the speed is its magnitude divided by h.
        const double a = 6.0 * (ys_[i] - ys_[i + 1]) + 3.0 * h * (ms_[i] + ms_[i + 1]);
        const double b = -6.0 * (ys_[i] - ys_[i + 1]) - 2.0 * h * (2.0 * ms_[i] + ms_[i + 1]);
        const double c = h * ms_[i];
        best = std::max(best, std::abs(ms_[i]));
        best = std::max(best, std::abs(ms_[i + 1]));
        if (a != 0.0) {
            const double xv = -b / (2.0 * a);
            if (xv > 0.0 && xv < 1.0)
                best = std::max(best, std::abs((a * xv + b) * xv + c) / h);
        }
    }
    return best;
}

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------

void require_valid(const VirialConfig& cfg) {
    if (!std::isfinite(cfg.A) || cfg.A < 10.0)
        throw std::invalid_argument("VirialConfig: weight scale A must be >= 10");
    if (cfg.epsilon) {
        const double e = *cfg.epsilon;
        if (!std::isfinite(e) || e <= 0.0 || e >= 1.0)
            throw std::invalid_argument("VirialConfig: epsilon must lie in (0,1)");
    }
}

double resolve_epsilon(const PressureLaw& law, const VirialConfig& cfg) {
    require_valid(cfg);
    if (cfg.epsilon) return *cfg.epsilon;
    const double k = law.k();
    const double c = cfg.path.max_speed();
    const double lo = c * c / k;
    const double hi = k / (1.0 + k);
    if (lo < hi) return 0.5 * (lo + hi);
    // Observer too fast for the coercive mixing interval; keep I well defined
    // with a neutral weight so fast-regime records still carry the column.
    return 0.5 * hi;
}

// ---------------------------------------------------------------------------
// Densities and fluxes
// ---------------------------------------------------------------------------

Field energy_density(const PressureLaw& law, const State& s, const Field& phi) {
    require_same_grid(s.n, phi, "energy_density");
    const Field dphi = derivative(phi, 1);
    Field e(s.grid());
    for (int j = 0; j < e.size(); ++j) {
        e[j] = 0.5 * (1.0 + s.n[j]) * s.u[j] * s.u[j] + law.W(s.n[j]) +
               0.5 * dphi[j] * dphi[j] + R_of(phi[j]);
    }
    return e;
}

Field momentum_density(const State& s) {
    return pointwise(s.n, s.u);
}

Field momentum_flux(const PressureLaw& law, const State& s, const Field& phi) {
    require_same_grid(s.n, phi, "momentum_flux");
    const Field dphi = derivative(phi, 1);
    Field f(s.grid());
    for (int j = 0; j < f.size(); ++j) {
        f[j] = (0.5 + s.n[j]) * s.u[j] * s.u[j] + law.S(s.n[j]) -
               0.5 * dphi[j] * dphi[j] + Q_of(phi[j]);
    }
    return f;
}

namespace {

// Time derivative of the potential slaved to the mass equation:
// (-d2 + q'(phi)) phidot = dn/dt with dn/dt = -((1+n)u)' exactly as the
// stepper discretizes it (2/3-rule truncation of the product iff dealias).
Field slaved_phi_dot(const State& s, const Field& phi, bool dealias) {
    Field flux(s.grid());
    for (int j = 0; j < flux.size(); ++j) flux[j] = (1.0 + s.n[j]) * s.u[j];
    if (dealias) flux = dealias_23(flux);
    Field ndot = derivative(flux, 1);
    for (int j = 0; j < ndot.size(); ++j) ndot[j] = -ndot[j];
    const Field V = map(phi, [](double p) { return dq_of(p) - 1.0; });
    return helmholtz_inverse_v(ndot, V, 1e-12, 400);
}

struct WeightFields {
    Field w0, w1;  // weight and its first derivative on the wrapped grid
};

WeightFields weight_fields(const Grid& g, double A, double y) {
    WeightFamily w{A, y};
    return {w.eval_on(g, 0), w.eval_on(g, 1)};
}

}  // namespace

Field energy_flux(const PressureLaw& law, const State& s, const Field& phi,
                  const Field* phi_dot, bool dealias) {
    require_same_grid(s.n, phi, "energy_flux");
    Field pd = phi_dot ? *phi_dot : slaved_phi_dot(s, phi, dealias);
    require_same_grid(pd, phi, "energy_flux");
    const Field pdx = derivative(pd, 1);
    Field f(s.grid());
    for (int j = 0; j < f.size(); ++j) {
        const double rho = 1.0 + s.n[j];
        const double u = s.u[j];
        f[j] = 0.5 * rho * u * u * u + rho * law.w(s.n[j]) * u + rho * u * phi[j] -
               phi[j] * pdx[j];
    }
    return f;
}

double total_energy(const PressureLaw& law, const State& s, const Field& phi) {
    return integral(energy_density(law, s, phi));
}

// ---------------------------------------------------------------------------
// Functionals
// ---------------------------------------------------------------------------

VirialValues functionals(const PressureLaw& law, const State& s, const Field& phi,
                         const VirialConfig& cfg) {
    require_same_grid(s.n, phi, "functionals");
    const Grid& g = s.grid();
    const auto [w0, w1] = weight_fields(g, cfg.A, cfg.path.y(s.t));
    const Field dphi = derivative(phi, 1);
    const Field e = energy_density(law, s, phi);

    VirialValues v;
    v.epsilon = resolve_epsilon(law, cfg);
    double J = 0.0, K = 0.0, L = 0.0;
    for (int j = 0; j < g.points; ++j) {
        J += w0[j] * s.n[j] * s.u[j];
        K += w1[j] * s.u[j] * dphi[j];
        L += w0[j] * e[j];
    }
    const double dx = g.dx();
    v.J = J * dx;
    v.K = -0.5 * K * dx;
    v.L = L * dx;
    v.I = v.J + (1.0 - v.epsilon) * v.K;
    return v;
}

double localized_mass(const State& s, const VirialConfig& cfg) {
    require_valid(cfg);
    const Grid& g = s.grid();
    const Field w1 = WeightFamily{cfg.A, cfg.path.y(s.t)}.eval_on(g, 1);
    double acc = 0.0;
    for (int j = 0; j < g.points; ++j)
        acc += w1[j] * (s.u[j] * s.u[j] + s.n[j] * s.n[j]);
    return acc * g.dx();
}

// ---------------------------------------------------------------------------
// Analytic derivatives
// ---------------------------------------------------------------------------

double dJdt_analytic(const PressureLaw& law, const State& s, const Field& phi,
                     const VirialConfig& cfg) {
    require_valid(cfg);
    const Grid& g = s.grid();
    const Field w1 = WeightFamily{cfg.A, cfg.path.y(s.t)}.eval_on(g, 1);
    const Field fm = momentum_flux(law, s, phi);
    const double ydot = cfg.path.ydot(s.t);
    double flux = 0.0, cross = 0.0;
    for (int j = 0; j < g.points; ++j) {
        flux += w1[j] * fm[j];
        cross += w1[j] * s.n[j] * s.u[j];
    }
    return (flux - ydot * cross) * g.dx();
}

double dKdt_analytic(const PressureLaw& law, const State& s, const Field& phi,
                     const VirialConfig& cfg, bool dealias) {
    require_valid(cfg);
    const Grid& g = s.grid();
    const RhsResult r = rhs(law, s, dealias, &phi);
    const Field V = map(r.phi, [](double p) { return dq_of(p) - 1.0; });
    const Field phid = helmholtz_inverse_v(r.dn, V, 1e-12, 400);
    const Field phidx = derivative(phid, 1);
    const Field dphi = derivative(r.phi, 1);

    WeightFamily w{cfg.A, cfg.path.y(s.t)};
    const Field w1 = w.eval_on(g, 1);
    const Field w2 = w.eval_on(g, 2);
    const double ydot = cfg.path.ydot(s.t);

    double a = 0.0, b = 0.0, c = 0.0;
    for (int j = 0; j < g.points; ++j) {
        a += w1[j] * r.du[j] * dphi[j];
        b += w1[j] * s.u[j] * phidx[j];
        c += w2[j] * s.u[j] * dphi[j];
    }
    return 0.5 * (-a - b + ydot * c) * g.dx();
}

double dIdt_analytic(const PressureLaw& law, const State& s, const Field& phi,
                     const VirialConfig& cfg, bool dealias) {
    const double eps = resolve_epsilon(law, cfg);
    return dJdt_analytic(law, s, phi, cfg) +
           (1.0 - eps) * dKdt_analytic(law, s, phi, cfg, dealias);
}

double dLdt_analytic(const PressureLaw& law, const State& s, const Field& phi,
                     const VirialConfig& cfg, bool dealias) {
    require_valid(cfg);
    const Grid& g = s.grid();
    const Field w1 = WeightFamily{cfg.A, cfg.path.y(s.t)}.eval_on(g, 1);
    const Field fe = energy_flux(law, s, phi, nullptr, dealias);
    const Field e = energy_density(law, s, phi);
    const double ydot = cfg.path.ydot(s.t);
    double flux = 0.0, loc = 0.0;
    for (int j = 0; j < g.points; ++j) {
        flux += w1[j] * fe[j];
        loc += w1[j] * e[j];
    }
    return (flux - ydot * loc) * g.dx();
}

// ---------------------------------------------------------------------------
// Margin reports
// ---------------------------------------------------------------------------

CoercivityReport dIdt_coercivity(const PressureLaw& law, const State& s, const Field& phi,
                                 const VirialConfig& cfg, bool dealias) {
    require_valid(cfg);
    const Grid& g = s.grid();
    const double k = law.k();

    CoercivityReport rep;
    rep.epsilon = resolve_epsilon(law, cfg);
    rep.dIdt = dJdt_analytic(law, s, phi, cfg) +
               (1.0 - rep.epsilon) * dKdt_analytic(law, s, phi, cfg, dealias);
    rep.localized_mass = localized_mass(s, cfg);
    rep.degenerate = !(rep.localized_mass > 0.0);
    rep.margin = rep.degenerate ? kNaN : rep.dIdt / rep.localized_mass;

    rep.slow_regime_ok = std::abs(cfg.path.ydot(s.t)) < law.slow();
    const double top = cfg.path.max_speed();
    rep.epsilon_in_interval =
        rep.epsilon > top * top / k && rep.epsilon < k / (1.0 + k);

    const Field w1 = WeightFamily{cfg.A, cfg.path.y(s.t)}.eval_on(g, 1);
    const Field dphi = derivative(phi, 1);
    const Field ddphi = derivative(phi, 2);
    const Field hu = helmholtz_inverse(s.u);
    double gu = 0.0, gn = 0.0, gxx = 0.0, gx = 0.0, gp = 0.0, pos = 0.0, cross = 0.0;
    for (int j = 0; j < g.points; ++j) {
        gu += w1[j] * s.u[j] * s.u[j];
        gn += w1[j] * s.n[j] * s.n[j];
        gxx += w1[j] * ddphi[j] * ddphi[j];
        gx += w1[j] * dphi[j] * dphi[j];
        gp += w1[j] * phi[j] * phi[j];
        pos += w1[j] * s.u[j] * hu[j];
        cross += w1[j] * s.n[j] * s.u[j];
    }
    const double dx = g.dx();
    rep.group_u2 = gu * dx;
    rep.group_n2 = gn * dx;
    rep.group_phixx2 = gxx * dx;
    rep.group_phix2 = gx * dx;
    rep.group_phi2 = gp * dx;
    rep.positivity = pos * dx;
    rep.cross = cross * dx;

    const double eps = rep.epsilon;
    const double ydot = cfg.path.ydot(s.t);
    rep.principal = 0.5 * eps * rep.group_u2 + 0.5 * (1.0 - eps) * rep.positivity -
                    ydot * rep.cross +
                    0.5 * (k * rep.group_n2 + (1.0 - eps) * k * rep.group_phixx2 +
                           (k - eps * (1.0 + k)) * rep.group_phix2 + rep.group_phi2);
    return rep;
}

DecayReport dLdt_decay(const PressureLaw& law, const State& s, const Field& phi,
                       const VirialConfig& cfg, bool dealias) {
    require_valid(cfg);
    const Grid& g = s.grid();

    DecayReport rep;
    rep.dLdt = dLdt_analytic(law, s, phi, cfg, dealias);
    rep.localized_mass = localized_mass(s, cfg);
    rep.degenerate = !(rep.localized_mass > 0.0);
    rep.margin = rep.degenerate ? kNaN : -rep.dLdt / rep.localized_mass;

    const double ydot = cfg.path.ydot(s.t);
    rep.fast_regime_ok = std::abs(ydot) > law.sonic();

    const Field w1 = WeightFamily{cfg.A, cfg.path.y(s.t)}.eval_on(g, 1);
    const Field dphi = derivative(phi, 1);
    const double k = law.k();
    double quad = 0.0;
    for (int j = 0; j < g.points; ++j) {
        quad += w1[j] * (s.u[j] * s.u[j] + k * s.n[j] * s.n[j] +
                         dphi[j] * dphi[j] + phi[j] * phi[j]);
    }
    rep.group_quad = quad * g.dx();
    rep.principal = -0.5 * ydot * rep.group_quad;
    return rep;
}

TailMass tail_mass(const State& s, const Field& phi, double y, double R) {
    require_same_grid(s.n, phi, "tail_mass");
    const Grid& g = s.grid();
    if (!(R > 0.0) || !(R < 0.5 * g.length))
        throw std::invalid_argument("tail_mass: need 0 < R < length/2");
    const Field ddphi = derivative(phi, 2);
    TailMass tm;
    for (int j = 0; j < g.points; ++j) {
        if (std::abs(g.wrap(g.node(j) - y)) <= R) continue;
        tm.nu_tail += s.n[j] * s.n[j] + s.u[j] * s.u[j];
        tm.phi_tail += ddphi[j] * ddphi[j] + phi[j] * phi[j];
    }
    tm.nu_tail *= g.dx();
    tm.phi_tail *= g.dx();
    return tm;
}

// ---------------------------------------------------------------------------
// Recorded runs
// ---------------------------------------------------------------------------

void RunRecord::finalize_numeric_derivatives(std::size_t stride) {
    if (stride == 0)
        throw std::invalid_argument("RunRecord: derivative stride must be positive");
    const std::size_t N = t.size();
    const auto diff = [&](const std::vector<double>& X, std::vector<double>& D) {
        D.assign(N, kNaN);
        for (std::size_t i = stride; i + stride < N; ++i)
            D[i] = (X[i + stride] - X[i - stride]) / (t[i + stride] - t[i - stride]);
    };
    diff(J, dJdt_n);
    diff(K, dKdt_n);
    diff(I, dIdt_n);
    diff(L, dLdt_n);
}

RecordedRun record_run(const PressureLaw& law, State s0, const RecordOptions& opt) {
    require_valid(opt.virial);
    const double half_length = 0.5 * s0.grid().length;
    for (double R : opt.tail_radii)
        if (!(R > 0.0) || !(R < half_length))
            throw std::invalid_argument("record_run: tail radius outside (0, length/2)");

    RunRecord rec;
    rec.A = opt.virial.A;
    rec.epsilon = resolve_epsilon(law, opt.virial);
    rec.tail_radii = opt.tail_radii;
    rec.tail_nu.assign(opt.tail_radii.size(), {});
    rec.tail_phi.assign(opt.tail_radii.size(), {});

    const Probe probe = [&](const State& s, const Field& phi) {
        rec.t.push_back(s.t);
        rec.E.push_back(total_energy(law, s, phi));
        rec.mass.push_back(integral(s.n));
        const VirialValues v = functionals(law, s, phi, opt.virial);
        rec.J.push_back(v.J);
        rec.K.push_back(v.K);
        rec.I.push_back(v.I);
        rec.L.push_back(v.L);
        const double dj = dJdt_analytic(law, s, phi, opt.virial);
        const double dk = dKdt_analytic(law, s, phi, opt.virial, opt.stepper.dealias);
        rec.dJdt_a.push_back(dj);
        rec.dKdt_a.push_back(dk);
        rec.dIdt_a.push_back(dj + (1.0 - rec.epsilon) * dk);
        rec.dLdt_a.push_back(dLdt_analytic(law, s, phi, opt.virial, opt.stepper.dealias));
        rec.loc_mass.push_back(localized_mass(s, opt.virial));
        const double y = opt.virial.path.y(s.t);
        for (std::size_t r = 0; r < opt.tail_radii.size(); ++r) {
            const TailMass tm = tail_mass(s, phi, y, opt.tail_radii[r]);
            rec.tail_nu[r].push_back(tm.nu_tail);
            rec.tail_phi[r].push_back(tm.phi_tail);
        }
    };

    IntegrateResult outcome = integrate(law, std::move(s0), opt.stepper, {probe});
    rec.finalize_numeric_derivatives(opt.derivative_stride);
    return {std::move(rec), std::move(outcome)};
}

}  // namespace ep1d
