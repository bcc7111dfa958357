// Shared helpers for the test binaries: seeded image generators and the
// small labelled corpus used by the retrieval tests.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "rgbc/matrix.hpp"

namespace testutil {

inline rgbc::Matrix random_image(std::mt19937& rng, std::size_t rows, std::size_t cols,
                                 double lo = 0.0, double hi = 1.0) {
    std::uniform_real_distribution<double> dist(lo, hi);
    rgbc::Matrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) m(r, c) = dist(rng);
    return m;
}

// Smooth "photograph-like" content: a handful of Gaussian blobs over
// low-frequency gratings plus mild noise, rescaled to [0.05, 0.95].
inline rgbc::Matrix textured_image(std::mt19937& rng, std::size_t rows, std::size_t cols) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> signed_unit(-1.0, 1.0);
    rgbc::Matrix m(rows, cols);

    struct Blob {
        double cr, cc, sigma, amp;
    };
    std::vector<Blob> blobs;
    int n_blobs = 4 + static_cast<int>(unit(rng) * 4);
    for (int i = 0; i < n_blobs; ++i)
        blobs.push_back({unit(rng) * rows, unit(rng) * cols,
                         (0.08 + 0.17 * unit(rng)) * static_cast<double>(std::min(rows, cols)),
                         signed_unit(rng)});
    struct Wave {
        double kx, ky, phase, amp;
    };
    std::vector<Wave> waves;
    for (int i = 0; i < 2; ++i) {
        double period = (0.3 + 0.5 * unit(rng)) * static_cast<double>(std::min(rows, cols));
        double theta = unit(rng) * 3.14159265358979323846;
        waves.push_back({std::cos(theta) / period, std::sin(theta) / period,
                         unit(rng) * 6.283185307179586, 0.5 * signed_unit(rng)});
    }

    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) {
            double v = 0.0;
            for (const Blob& b : blobs) {
                double dr = (static_cast<double>(r) - b.cr) / b.sigma;
                double dc = (static_cast<double>(c) - b.cc) / b.sigma;
                v += b.amp * std::exp(-0.5 * (dr * dr + dc * dc));
            }
            for (const Wave& w : waves)
                v += w.amp * std::sin(6.283185307179586 *
                                          (w.kx * static_cast<double>(c) +
                                           w.ky * static_cast<double>(r)) +
                                      w.phase);
            v += 0.05 * signed_unit(rng);
            m(r, c) = v;
        }

    double lo = m.values()[0], hi = m.values()[0];
    for (double v : m.values()) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    double span = hi > lo ? hi - lo : 1.0;
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c)
            m(r, c) = 0.05 + 0.9 * (m(r, c) - lo) / span;
    return m;
}

// --- five-class geometric corpus -------------------------------------

// Indicator of class `cls` at normalized coordinates (px, py) in
// [-1, 1]^2 (shape frame; jitter already removed by the caller). The
// classes are chosen so their mass sits in different places: the
// projection profile of each class differs structurally at every
// angle, not merely in overall response strength.
inline bool shape_indicator(int cls, double px, double py) {
    auto in_disk = [](double px, double py, double cx, double cy, double r) {
        double dx = px - cx, dy = py - cy;
        return dx * dx + dy * dy <= r * r;
    };
    double rad = std::sqrt(px * px + py * py);
    switch (cls) {
    case 0: return rad <= 0.52;                    // disk
    case 1: return in_disk(px, py, -0.55, 0.0, 0.27) ||  // horizontal pair
                   in_disk(px, py, 0.55, 0.0, 0.27);
    case 2: return in_disk(px, py, 0.0, -0.55, 0.27) ||  // vertical pair
                   in_disk(px, py, 0.0, 0.55, 0.27);
    case 3: return in_disk(px, py, -0.50, -0.50, 0.24) ||  // four corners
                   in_disk(px, py, 0.50, -0.50, 0.24) ||
                   in_disk(px, py, -0.50, 0.50, 0.24) ||
                   in_disk(px, py, 0.50, 0.50, 0.24);
    case 4: return std::sin(px * 6.283185307179586 / 0.45) > 0.0; // stripes
    default: return false;
    }
}

// Renders one corpus image: the class shape with rotation/shift/size
// jitter, 4x supersampled for soft edges, plus Gaussian pixel noise.
inline rgbc::Matrix render_shape(int cls, double rot_deg, double shift_r, double shift_c,
                                 double size_scale, std::mt19937& rng,
                                 std::size_t side = 64, double noise_sigma = 0.03) {
    const int ss = 4;
    const double half = static_cast<double>(side) / 2.0;
    const double cos_t = std::cos(-rot_deg * 3.14159265358979323846 / 180.0);
    const double sin_t = std::sin(-rot_deg * 3.14159265358979323846 / 180.0);
    std::normal_distribution<double> noise(0.0, noise_sigma);

    rgbc::Matrix m(side, side);
    for (std::size_t r = 0; r < side; ++r)
        for (std::size_t c = 0; c < side; ++c) {
            int inside = 0;
            for (int sr = 0; sr < ss; ++sr)
                for (int sc = 0; sc < ss; ++sc) {
                    double y = (static_cast<double>(r) + (sr + 0.5) / ss - half - shift_r) / half;
                    double x = (static_cast<double>(c) + (sc + 0.5) / ss - half - shift_c) / half;
                    double px = (x * cos_t - y * sin_t) / size_scale;
                    double py = (x * sin_t + y * cos_t) / size_scale;
                    if (shape_indicator(cls, px, py)) ++inside;
                }
            double v = 0.15 + 0.7 * inside / double(ss * ss) + noise(rng);
            m(r, c) = std::clamp(v, 0.0, 1.0);
        }
    return m;
}

struct LabelledImage {
    rgbc::Matrix image;
    int label = 0;
};

// `per_class` jittered variants of each of the five classes, in class
// order. Jitter: rotation within ±12 degrees, shift within ±2 px, size
// within ±10%.
inline std::vector<LabelledImage> shape_corpus(std::mt19937& rng, int per_class,
                                               std::size_t side = 64) {
    std::uniform_real_distribution<double> rot(-12.0, 12.0);
    std::uniform_real_distribution<double> shift(-2.0, 2.0);
    std::uniform_real_distribution<double> size(0.9, 1.1);
    std::vector<LabelledImage> corpus;
    for (int cls = 0; cls < 5; ++cls)
        for (int i = 0; i < per_class; ++i)
            corpus.push_back(
                {render_shape(cls, rot(rng), shift(rng), shift(rng), size(rng), rng, side),
                 cls});
    return corpus;
}

inline rgbc::Matrix rot90ccw(const rgbc::Matrix& in) {
    rgbc::Matrix out(in.cols(), in.rows());
    for (std::size_t r = 0; r < out.rows(); ++r)
        for (std::size_t c = 0; c < out.cols(); ++c)
            out(r, c) = in(c, in.cols() - 1 - r);
    return out;
}

// Training codes for the hierarchical-error tests; the branch counts
// derived from these are what the frozen expected values assume.
inline std::vector<std::string> irma_training_codes() {
    return {
        "1121-120-200-700", "1121-127-700-500", "1123-127-500-000", "1121-121-942-700",
        "112d-121-500-000", "1124-410-620-625", "2121-220-230-921", "1131-320-205-700",
        "1121-120-213-700", "112a-12f-200-7a0", "2122-22c-230-921", "1121-12f-2b0-700",
    };
}

} // namespace testutil
