#include "ptlab/grid.hpp"

#include <string>

namespace ptlab {

Grid make_grid(double half_width, int n_points) {
    if (!(half_width > 0.0))
        throw Error("grid half-width must be positive (got " + std::to_string(half_width) + ")");
    if (n_points < 5)
        throw Error("grid needs at least 5 points (got " + std::to_string(n_points) + ")");
    if (n_points % 2 == 0)
        throw Error("grid point count must be odd (got " + std::to_string(n_points) + ")");

    Grid g;
    g.half_width = half_width;
    g.n_points = n_points;
    g.spacing = 2.0 * half_width / (n_points - 1);
    g.points.assign(n_points, 0.0);
    const int c = g.center();
    for (int k = 1; k <= c; ++k) {
        const double d = k * g.spacing;
        g.points[c + k] = d;
        g.points[c - k] = -d;
    }
    return g;
}

int reflect_index(int j, int n_points) {
    if (j < 0 || j >= n_points)
        throw Error("reflect_index: index " + std::to_string(j) + " out of range for " +
                    std::to_string(n_points) + " points");
    return n_points - 1 - j;
}

std::vector<cplx> cumulative_integral(const Grid& grid, std::span<const cplx> samples) {
    const int n = grid.n_points;
    if (static_cast<int>(samples.size()) != n)
        throw Error("cumulative_integral: got " + std::to_string(samples.size()) +
                    " samples for a " + std::to_string(n) + "-point grid");

    std::vector<cplx> out(n, cplx(0.0, 0.0));
    const double half_h = 0.5 * grid.spacing;
    const int c = grid.center();
    for (int k = c; k + 1 < n; ++k)
        out[k + 1] = out[k] + half_h * (samples[k] + samples[k + 1]);
    for (int k = c; k - 1 >= 0; --k)
        out[k - 1] = out[k] - half_h * (samples[k] + samples[k - 1]);
    return out;
}

}  // namespace ptlab
