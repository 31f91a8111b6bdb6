#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ep1d {

// Uniform periodic grid on [-length/2, length/2). Node j sits at
// -length/2 + j*dx. The point count must be a power of two (>= 16) so the
// transform sizes stay in the regime every FFT backend handles exactly and
// the 2/3-rule cutoffs are unambiguous.
struct Grid {
    double length = 0.0;
    int points = 0;

    Grid() = default;
    Grid(double length_, int points_);

    double dx() const { return length / points; }
    double node(int j) const { return -0.5 * length + j * dx(); }
    std::vector<double> nodes() const;

    // Displacement x wrapped to [-length/2, length/2).
    double wrap(double x) const;

    bool operator==(const Grid&) const = default;
};

// Real scalar field sampled on a Grid. Value semantics; all operations that
// combine two fields require identical grids.
struct Field {
    Grid grid;
    std::vector<double> v;

    Field() = default;
    explicit Field(const Grid& g) : grid(g), v(static_cast<size_t>(g.points), 0.0) {}
    Field(const Grid& g, std::vector<double> values);

    int size() const { return grid.points; }
    double& operator[](int j) { return v[static_cast<size_t>(j)]; }
    double operator[](int j) const { return v[static_cast<size_t>(j)]; }

    static Field zeros(const Grid& g) { return Field(g); }
    static Field sample(const Grid& g, const std::function<double(double)>& f);

    Field& operator+=(const Field& o);
    Field& operator-=(const Field& o);
    Field& operator*=(double s);
};

Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);
Field operator*(double s, Field a);
Field pointwise(const Field& a, const Field& b);  // elementwise product
Field map(const Field& a, const std::function<double(double)>& f);

// Rectangle-rule integral dx * sum f_j: spectrally accurate for smooth
// periodic integrands, exact for trigonometric polynomials below Nyquist.
double integral(const Field& f);
double inner(const Field& a, const Field& b);  // dx * sum a_j b_j

double max_abs(const Field& f);
bool all_finite(const Field& f);

void require_same_grid(const Field& a, const Field& b, const char* where);

}  // namespace ep1d
