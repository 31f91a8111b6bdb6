#include "ep1d/field.hpp"

#include <algorithm>

namespace ep1d {

namespace {
bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }
}  // namespace

Grid::Grid(double length_, int points_) : length(length_), points(points_) {
    if (!(length > 0.0) || !std::isfinite(length))
        throw std::invalid_argument("Grid invariant: length must be positive and finite");
    if (points < 16 || !power_of_two(points))
        throw std::invalid_argument(
            "Grid invariant: points must be a power of two and at least 16 (got " +
            std::to_string(points) + ")");
}

std::vector<double> Grid::nodes() const {
    std::vector<double> xs(static_cast<size_t>(points));
    for (int j = 0; j < points; ++j) xs[static_cast<size_t>(j)] = node(j);
    return xs;
}

double Grid::wrap(double x) const {
    double y = x - length * std::round(x / length);
    if (y >= 0.5 * length) y -= length;   // round-half-even edge
    if (y < -0.5 * length) y += length;
    return y;
}

Field::Field(const Grid& g, std::vector<double> values) : grid(g), v(std::move(values)) {
    if (static_cast<int>(v.size()) != g.points)
        throw std::invalid_argument("Field: value count does not match grid points");
}

Field Field::sample(const Grid& g, const std::function<double(double)>& f) {
    Field out(g);
    for (int j = 0; j < g.points; ++j) out[j] = f(g.node(j));
    return out;
}

Field& Field::operator+=(const Field& o) {
    require_same_grid(*this, o, "Field::operator+=");
    for (size_t j = 0; j < v.size(); ++j) v[j] += o.v[j];
    return *this;
}

Field& Field::operator-=(const Field& o) {
    require_same_grid(*this, o, "Field::operator-=");
    for (size_t j = 0; j < v.size(); ++j) v[j] -= o.v[j];
    return *this;
}

Field& Field::operator*=(double s) {
    for (double& x : v) x *= s;
    return *this;
}

Field operator+(Field a, const Field& b) { return a += b; }
Field operator-(Field a, const Field& b) { return a -= b; }
Field operator*(double s, Field a) { return a *= s; }

Field pointwise(const Field& a, const Field& b) {
    require_same_grid(a, b, "pointwise");
    Field out = a;
    for (size_t j = 0; j < out.v.size(); ++j) out.v[j] *= b.v[j];
    return out;
}

Field map(const Field& a, const std::function<double(double)>& f) {
    Field out = a;
    for (double& x : out.v) x = f(x);
    return out;
}

double integral(const Field& f) {
    double s = 0.0;
    for (double x : f.v) s += x;
    return s * f.grid.dx();
}

double inner(const Field& a, const Field& b) {
    require_same_grid(a, b, "inner");
    double s = 0.0;
    for (size_t j = 0; j < a.v.size(); ++j) s += a.v[j] * b.v[j];
    return s * a.grid.dx();
}

double max_abs(const Field& f) {
    double m = 0.0;
    for (double x : f.v) m = std::max(m, std::abs(x));
    return m;
}

bool all_finite(const Field& f) {
    return std::all_of(f.v.begin(), f.v.end(), [](double x) { return std::isfinite(x); });
}

void require_same_grid(const Field& a, const Field& b, const char* where) {
    if (!(a.grid == b.grid))
        throw std::invalid_argument(std::string(where) + ": fields live on different grids");
}

}  // namespace ep1d
