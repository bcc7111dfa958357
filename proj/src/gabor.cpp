#include "rgbc/gabor.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "rgbc/errors.hpp"

namespace rgbc {

void GaborBankConfig::validate() const {
    if (n_scales < 1 || n_orientations < 1)
        throw ConfigError("gabor bank: need at least one scale and one orientation");
    if (win_rows < 3 || win_cols < 3 || win_rows % 2 == 0 || win_cols % 2 == 0)
        throw ConfigError("gabor bank: window dimensions must be odd and >= 3");
    if (!(f_max > 0.0) || f_max > 0.5)
        throw ConfigError("gabor bank: f_max must lie in (0, 0.5]");
    if (!(gamma > 0.0) || !(eta > 0.0))
        throw ConfigError("gabor bank: gamma and eta must be positive");
}

std::vector<GaborKernel> build_bank(const GaborBankConfig& cfg) {
    cfg.validate();
    std::vector<GaborKernel> bank;
    bank.reserve(cfg.n_scales * cfg.n_orientations);

    const double amplitude_den = std::numbers::pi * cfg.gamma * cfg.eta;
    const int half_r = static_cast<int>(cfg.win_rows) / 2;
    const int half_c = static_cast<int>(cfg.win_cols) / 2;

    for (std::size_t u = 1; u <= cfg.n_scales; ++u) {
        const double f = cfg.f_max / std::pow(std::numbers::sqrt2, static_cast<double>(u - 1));
        const double amplitude = f * f / amplitude_den;
        const double sigma = cfg.eta / f;
        const double inv_two_sigma_sq = 1.0 / (2.0 * sigma * sigma);
        const double gamma_sq = cfg.gamma * cfg.gamma;

        for (std::size_t v = 1; v <= cfg.n_orientations; ++v) {
            const double theta_deg =
                static_cast<double>(v - 1) * 180.0 / static_cast<double>(cfg.n_orientations);
            const double theta = theta_deg * std::numbers::pi / 180.0;
            const double cos_t = std::cos(theta);
            const double sin_t = std::sin(theta);

            GaborKernel k;
            k.scale_index = u;
            k.orientation_index = v;
            k.frequency = f;
            k.orientation_deg = theta_deg;
            k.re = Matrix(cfg.win_rows, cfg.win_cols);
            k.im = Matrix(cfg.win_rows, cfg.win_cols);

            for (int y = -half_r; y <= half_r; ++y) {
                for (int x = -half_c; x <= half_c; ++x) {
                    const double xp = x * cos_t + y * sin_t;
                    const double yp = -x * sin_t + y * cos_t;
                    const double envelope =
                        amplitude *
                        std::exp(-(xp * xp + gamma_sq * yp * yp) * inv_two_sigma_sq);
                    const double phase = 2.0 * std::numbers::pi * f * xp + cfg.phi;
                    const std::size_t r = static_cast<std::size_t>(y + half_r);
                    const std::size_t c = static_cast<std::size_t>(x + half_c);
                    k.re(r, c) = envelope * std::cos(phase);
                    k.im(r, c) = envelope * std::sin(phase);
                }
            }
            bank.push_back(std::move(k));
        }
    }
    return bank;
}

Matrix filter_magnitude(const Raster& img, const GaborKernel& kernel) {
    if (img.empty()) throw ConfigError("filter_magnitude: empty image");
    const std::ptrdiff_t rows = static_cast<std::ptrdiff_t>(img.rows());
    const std::ptrdiff_t cols = static_cast<std::ptrdiff_t>(img.cols());
    const std::ptrdiff_t krows = static_cast<std::ptrdiff_t>(kernel.rows());
    const std::ptrdiff_t kcols = static_cast<std::ptrdiff_t>(kernel.cols());
    const std::ptrdiff_t half_r = krows / 2;
    const std::ptrdiff_t half_c = kcols / 2;

    // out(r,c) = sum_{s,t} img(r-s, c-t) * G(s,t). Flipping the kernel
    // once turns the sum into a correlation with forward index runs.
    Matrix flip_re(kernel.rows(), kernel.cols()), flip_im(kernel.rows(), kernel.cols());
    for (std::size_t i = 0; i < kernel.rows(); ++i)
        for (std::size_t j = 0; j < kernel.cols(); ++j) {
            flip_re(i, j) = kernel.re(kernel.rows() - 1 - i, kernel.cols() - 1 - j);
            flip_im(i, j) = kernel.im(kernel.rows() - 1 - i, kernel.cols() - 1 - j);
        }

    Matrix out(img.rows(), img.cols());
    for (std::ptrdiff_t r = 0; r < rows; ++r) {
        const std::ptrdiff_t i_lo = std::max<std::ptrdiff_t>(0, half_r - r);
        const std::ptrdiff_t i_hi = std::min(krows - 1, rows - 1 - r + half_r);
        for (std::ptrdiff_t c = 0; c < cols; ++c) {
            const std::ptrdiff_t j_lo = std::max<std::ptrdiff_t>(0, half_c - c);
            const std::ptrdiff_t j_hi = std::min(kcols - 1, cols - 1 - c + half_c);
            const std::ptrdiff_t len = j_hi - j_lo + 1;
            double acc_re = 0.0, acc_im = 0.0;
            for (std::ptrdiff_t i = i_lo; i <= i_hi; ++i) {
                const double* px =
                    img.row(static_cast<std::size_t>(r - half_r + i)) + (c - half_c + j_lo);
                const double* kre = flip_re.row(static_cast<std::size_t>(i)) + j_lo;
                const double* kim = flip_im.row(static_cast<std::size_t>(i)) + j_lo;
                for (std::ptrdiff_t j = 0; j < len; ++j) {
                    acc_re += px[j] * kre[j];
                    acc_im += px[j] * kim[j];
                }
            }
            out(static_cast<std::size_t>(r), static_cast<std::size_t>(c)) =
                std::sqrt(acc_re * acc_re + acc_im * acc_im);
        }
    }
    return out;
}

Matrix downsample(const Matrix& resp, std::size_t d1, std::size_t d2) {
    if (resp.empty()) throw ConfigError("downsample: empty input");
    if (d1 < 1 || d2 < 1) throw ConfigError("downsample: factors must be >= 1");
    if (resp.rows() % d1 != 0 || resp.cols() % d2 != 0)
        throw ConfigError("downsample: factors must divide the matrix dimensions");
    Matrix out(resp.rows() / d1, resp.cols() / d2);
    for (std::size_t r = 0; r < out.rows(); ++r)
        for (std::size_t c = 0; c < out.cols(); ++c)
            out(r, c) = resp(r * d1, c * d2);
    return out;
}

} // namespace rgbc
