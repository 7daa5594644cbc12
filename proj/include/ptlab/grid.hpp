#pragma once

#include <span>
#include <vector>

#include "ptlab/core.hpp"

namespace ptlab {

// Uniform grid on [-L, L] with an odd point count, so x = 0 is a node and
// points come in exact +/- pairs: points[N-1-j] == -points[j] bitwise.
struct Grid {
    double half_width = 0.0;  // L
    int n_points = 0;         // N, odd, >= 5
    double spacing = 0.0;     // h = 2L/(N-1)
    std::vector<double> points;

    int center() const { return (n_points - 1) / 2; }
};

Grid make_grid(double half_width, int n_points);

// Index of -x_j (0-based); an involution, fixed at the center node.
int reflect_index(int j, int n_points);

// Trapezoid-rule cumulative integral F_j ~ integral_0^{x_j} f, anchored at
// the center node (F = 0 there) and accumulated outward in mirrored steps.
// The weights are real, so conjugation commutes with the quadrature
// bitwise, and exactly-even samples integrate to an exactly-odd F.
std::vector<cplx> cumulative_integral(const Grid& grid, std::span<const cplx> samples);

}  // namespace ptlab
