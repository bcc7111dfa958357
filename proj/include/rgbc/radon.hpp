#pragma once

#include <cstddef>
#include <vector>

#include "rgbc/matrix.hpp"

namespace rgbc {

/// Discrete Radon transform of an image: one column of line-integral
/// values per projection angle.
///
/// Geometry: the image is centered at the center pixel
/// c = (floor((rows-1)/2), floor((cols-1)/2)); a pixel at row r, column
/// k has coordinates x = k - c.col (across columns), y = r - c.row.
/// Angles are in degrees; theta = 0 integrates along image columns.
/// Each pixel's intensity is split between the two nearest rho bins by
/// linear interpolation, so the total mass of every column equals the
/// intensity sum of the image.
struct Sinogram {
    std::vector<double> angles_deg;
    Matrix values; // n_bins x angles_deg.size(), column j = angles_deg[j]

    std::size_t n_bins() const { return values.rows(); }
};

/// Number of rho bins used for a rows x cols image:
/// 2*ceil(d)+3 where d is the distance from the center pixel to the
/// farthest corner (rows-1, cols-1). The extra bins guarantee that the
/// two-bin mass split never lands outside the array.
std::size_t projection_bin_count(std::size_t rows, std::size_t cols);

/// Full transform over a list of angles (each in [0, 180) degrees).
Sinogram radon_transform(const Raster& img, const std::vector<double>& angles_deg);

/// Single projection, as a flat vector of projection_bin_count(...) values.
std::vector<double> radon_projection(const Raster& img, double angle_deg);

} // namespace rgbc
