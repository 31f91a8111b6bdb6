#include "ep1d/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <map>
#include <memory>
#include <mutex>

namespace ep1d {

namespace {

// FFTW's planner mutates global state; plan creation must be serialized.
std::mutex planner_mutex;

class Workspace {
public:
    explicit Workspace(int n) : n_(n), nc_(n / 2 + 1) {
        real_ = fftw_alloc_real(static_cast<size_t>(n_));
        spec_ = fftw_alloc_complex(static_cast<size_t>(nc_));
        std::lock_guard<std::mutex> lock(planner_mutex);
        // FFTW_ESTIMATE: deterministic plan selection (measured plans depend on
        // machine timing and would break bit-reproducible outputs).
        fwd_ = fftw_plan_dft_r2c_1d(n_, real_, spec_, FFTW_ESTIMATE);
        inv_ = fftw_plan_dft_c2r_1d(n_, spec_, real_, FFTW_ESTIMATE);
    }
    ~Workspace() {
        std::lock_guard<std::mutex> lock(planner_mutex);
        fftw_destroy_plan(fwd_);
        fftw_destroy_plan(inv_);
        fftw_free(real_);
        fftw_free(spec_);
    }
    Workspace(const Workspace&) = delete;
    Workspace& operator=(const Workspace&) = delete;

    int bins() const { return nc_; }

    void forward(const std::vector<double>& in) {
        for (int j = 0; j < n_; ++j) real_[j] = in[static_cast<size_t>(j)];
        fftw_execute(fwd_);
    }
    // overwrites the spectrum buffer, returns normalized field values
    void inverse(std::vector<double>& out) {
        fftw_execute(inv_);
        const double s = 1.0 / n_;
        out.resize(static_cast<size_t>(n_));
        for (int j = 0; j < n_; ++j) out[static_cast<size_t>(j)] = real_[j] * s;
    }

    std::complex<double> coeff(int k) const {
        return {spec_[k][0], spec_[k][1]};
    }
    void set_coeff(int k, std::complex<double> z) {
        spec_[k][0] = z.real();
        spec_[k][1] = z.imag();
    }

private:
    int n_, nc_;
    double* real_;
    fftw_complex* spec_;
    fftw_plan fwd_, inv_;
};

Workspace& workspace_for(int n) {
    thread_local std::map<int, std::unique_ptr<Workspace>> cache;
    auto& slot = cache[n];
    if (!slot) slot = std::make_unique<Workspace>(n);
    return *slot;
}

double wavenumber(const Grid& g, int k) { return 2.0 * M_PI * k / g.length; }

}  // namespace

Field derivative(const Field& f, int order) {
    if (order < 1 || order > 3)
        throw std::invalid_argument("derivative: order must be 1, 2, or 3");
    const int n = f.grid.points;
    Workspace& ws = workspace_for(n);
    ws.forward(f.v);
    const int nyq = n / 2;
    for (int k = 0; k <= nyq; ++k) {
        const double xi = wavenumber(f.grid, k);
        std::complex<double> sym;
        switch (order) {
            case 1: sym = {0.0, xi}; break;
            case 2: sym = {-xi * xi, 0.0}; break;
            default: sym = {0.0, -xi * xi * xi}; break;
        }
        if (order % 2 == 1 && k == nyq) sym = 0.0;
        ws.set_coeff(k, sym * ws.coeff(k));
    }
    Field out(f.grid);
    ws.inverse(out.v);
    return out;
}

Field helmholtz_inverse(const Field& f) {
    const int n = f.grid.points;
    Workspace& ws = workspace_for(n);
    ws.forward(f.v);
    for (int k = 0; k <= n / 2; ++k) {
        const double xi = wavenumber(f.grid, k);
        ws.set_coeff(k, ws.coeff(k) / (1.0 + xi * xi));
    }
    Field out(f.grid);
    ws.inverse(out.v);
    return out;
}

Field helmholtz_inverse_v(const Field& f, const Field& V, double tol, int max_iter,
                          int* iterations_out) {
    require_same_grid(f, V, "helmholtz_inverse_v");
    const double vmax = max_abs(V);
    if (!(vmax <= 0.5))
        throw std::invalid_argument(
            "helmholtz_inverse_v: ||V||_inf = " + std::to_string(vmax) +
            " exceeds 1/2; the constant-coefficient preconditioner is no longer a contraction");

    const double fnorm = std::sqrt(inner(f, f));
    if (fnorm == 0.0) {
        if (iterations_out) *iterations_out = 0;
        return Field::zeros(f.grid);
    }

    const int n = f.grid.points;
    Workspace& ws = workspace_for(n);
    Field g = Field::zeros(f.grid);
    Field rhs(f.grid), gxx(f.grid);

    for (int it = 1; it <= max_iter; ++it) {
        for (int j = 0; j < n; ++j) rhs[j] = f[j] - V[j] * g[j];
        ws.forward(rhs.v);
        for (int k = 0; k <= n / 2; ++k) {
            const double xi = wavenumber(f.grid, k);
            ws.set_coeff(k, ws.coeff(k) / (1.0 + xi * xi));
        }
        // keep the spectrum: second derivative of the new iterate comes from it
        std::vector<std::complex<double>> ghat(static_cast<size_t>(ws.bins()));
        for (int k = 0; k < ws.bins(); ++k) ghat[static_cast<size_t>(k)] = ws.coeff(k);
        ws.inverse(g.v);
        for (int k = 0; k <= n / 2; ++k) {
            const double xi = wavenumber(f.grid, k);
            ws.set_coeff(k, -xi * xi * ghat[static_cast<size_t>(k)]);
        }
        ws.inverse(gxx.v);

        double rsq = 0.0;
        for (int j = 0; j < n; ++j) {
            const double r = -gxx[j] + (1.0 + V[j]) * g[j] - f[j];
            rsq += r * r;
        }
        const double resid = std::sqrt(rsq * f.grid.dx());
        if (!std::isfinite(resid))
            throw SolveError("helmholtz_inverse_v: iteration produced non-finite values");
        if (resid <= tol * fnorm) {
            if (iterations_out) *iterations_out = it;
            return g;
        }
    }
    throw SolveError("helmholtz_inverse_v: no convergence to relative residual " +
                     std::to_string(tol) + " within " + std::to_string(max_iter) + " sweeps");
}

Norms norms(const Field& f) {
    Norms out;
    out.linf = max_abs(f);
    const int n = f.grid.points;
    Workspace& ws = workspace_for(n);
    ws.forward(f.v);
    const int nyq = n / 2;
    double s0 = 0.0, s1 = 0.0, s2 = 0.0;
    for (int k = 0; k <= nyq; ++k) {
        const double xi = wavenumber(f.grid, k);
        const double mag2 = std::norm(ws.coeff(k));
        const double w = (k == 0 || k == nyq) ? 1.0 : 2.0;
        s0 += w * mag2;
        if (k != nyq) s1 += w * xi * xi * mag2;  // first derivative zeroes Nyquist
        s2 += w * xi * xi * xi * xi * mag2;
    }
    const double scale = f.grid.length / (static_cast<double>(n) * n);
    s0 *= scale;
    s1 *= scale;
    s2 *= scale;
    out.l2 = std::sqrt(s0);
    out.h1 = std::sqrt(s0 + s1);
    out.h2 = std::sqrt(s0 + s1 + s2);
    return out;
}

Field dealias_23(const Field& f) {
    const int n = f.grid.points;
    Workspace& ws = workspace_for(n);
    ws.forward(f.v);
    const int cutoff = n / 3;
    for (int k = cutoff + 1; k <= n / 2; ++k) ws.set_coeff(k, 0.0);
    Field out(f.grid);
    ws.inverse(out.v);
    return out;
}

Field translate(const Field& f, double s) {
    const int n = f.grid.points;
    Workspace& ws = workspace_for(n);
    ws.forward(f.v);
    const int nyq = n / 2;
    for (int k = 0; k <= nyq; ++k) {
        const double xi = wavenumber(f.grid, k);
        if (k == nyq) {
            ws.set_coeff(k, ws.coeff(k) * std::cos(xi * s));
        } else {
            ws.set_coeff(k, ws.coeff(k) * std::exp(std::complex<double>(0.0, -xi * s)));
        }
    }
    Field out(f.grid);
    ws.inverse(out.v);
    return out;
}

}  // namespace ep1d
