#include "rgbc/radon.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "rgbc/errors.hpp"

namespace rgbc {

namespace {

void accumulate_projection(const Raster& img, double angle_deg, double* column,
                           std::size_t n_bins) {
    const double theta = angle_deg * std::numbers::pi / 180.0;
    const double cos_t = std::cos(theta);
    const double sin_t = std::sin(theta);
    const double center_row = std::floor((static_cast<double>(img.rows()) - 1.0) / 2.0);
    const double center_col = std::floor((static_cast<double>(img.cols()) - 1.0) / 2.0);
    const double rho_offset = static_cast<double>((n_bins - 1) / 2);

    for (std::size_t r = 0; r < img.rows(); ++r) {
        const double y = static_cast<double>(r) - center_row;
        const double y_term = y * sin_t + rho_offset;
        const double* px = img.row(r);
        for (std::size_t c = 0; c < img.cols(); ++c) {
            const double rho = (static_cast<double>(c) - center_col) * cos_t + y_term;
            const double lo = std::floor(rho);
            const double frac = rho - lo;
            const std::size_t bin = static_cast<std::size_t>(lo);
            column[bin] += px[c] * (1.0 - frac);
            column[bin + 1] += px[c] * frac;
        }
    }
}

} // namespace

std::size_t projection_bin_count(std::size_t rows, std::size_t cols) {
    if (rows < 1 || cols < 1) throw ConfigError("projection_bin_count: empty image");
    const double center_row = std::floor((static_cast<double>(rows) - 1.0) / 2.0);
    const double center_col = std::floor((static_cast<double>(cols) - 1.0) / 2.0);
    const double d = std::hypot(static_cast<double>(rows - 1) - center_row,
                                static_cast<double>(cols - 1) - center_col);
    return 2 * static_cast<std::size_t>(std::ceil(d)) + 3;
}

Sinogram radon_transform(const Raster& img, const std::vector<double>& angles_deg) {
    if (img.empty()) throw ConfigError("radon_transform: empty image");
    if (angles_deg.empty()) throw ConfigError("radon_transform: empty angle list");

    const std::size_t n_bins = projection_bin_count(img.rows(), img.cols());
    Sinogram sg;
    sg.angles_deg = angles_deg;
    sg.values = Matrix(n_bins, angles_deg.size());

    std::vector<double> column(n_bins);
    for (std::size_t j = 0; j < angles_deg.size(); ++j) {
        std::fill(column.begin(), column.end(), 0.0);
        accumulate_projection(img, angles_deg[j], column.data(), n_bins);
        for (std::size_t i = 0; i < n_bins; ++i) sg.values(i, j) = column[i];
    }
    return sg;
}

std::vector<double> radon_projection(const Raster& img, double angle_deg) {
    if (img.empty()) throw ConfigError("radon_projection: empty image");
    std::vector<double> column(projection_bin_count(img.rows(), img.cols()), 0.0);
    accumulate_projection(img, angle_deg, column.data(), column.size());
    return column;
}

} // namespace rgbc
