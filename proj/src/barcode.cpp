#include "rgbc/barcode.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "rgbc/errors.hpp"
#include "rgbc/radon.hpp"
#include "rgbc/raster.hpp"

namespace rgbc {

namespace {

// Side of the square the Radon image is resized to before filtering.
constexpr std::size_t kGribcRadonSide = 32;

void require(bool ok, const char* msg) {
    if (!ok) throw ConfigError(msg);
}

void validate_config(Method method, const EncoderConfig& cfg) {
    require(cfg.image_side >= 1, "encoder config: image_side must be >= 1");
    switch (method) {
        case Method::RBC:
            require(cfg.n_angles >= 1, "RBC config: n_angles must be >= 1");
            require(cfg.bins_per_angle >= 1, "RBC config: bins_per_angle must be >= 1");
            break;
        case Method::GRIBC:
            require(cfg.n_scales >= 1 && cfg.n_orientations >= 1,
                    "GRIBC config: bank dimensions must be >= 1");
            require(cfg.n_angles >= 1, "GRIBC config: n_angles must be >= 1");
            require(cfg.d1 >= 1 && cfg.d2 >= 1 && kGribcRadonSide % cfg.d1 == 0 &&
                        kGribcRadonSide % cfg.d2 == 0,
                    "GRIBC config: d1 and d2 must divide 32");
            break;
        case Method::GRGBC:
            require(cfg.n_scales >= 1 && cfg.n_orientations >= 1,
                    "GRGBC config: bank dimensions must be >= 1");
            require(cfg.d1 >= 1 && cfg.d2 >= 1 && cfg.image_side % cfg.d1 == 0 &&
                        cfg.image_side % cfg.d2 == 0,
                    "GRGBC config: d1 and d2 must divide image_side");
            break;
    }
}

std::vector<double> evenly_spaced_angles(std::size_t n) {
    std::vector<double> angles(n);
    for (std::size_t k = 0; k < n; ++k)
        angles[k] = static_cast<double>(k) * 180.0 / static_cast<double>(n);
    return angles;
}

// 1-D linear resample of a projection, same sample-grid convention as
// the image resize.
std::vector<double> resample_projection(const std::vector<double>& proj, std::size_t n_out) {
    Matrix m(proj.size(), 1);
    std::copy(proj.begin(), proj.end(), m.values().begin());
    Matrix r = resize_bilinear(m, n_out, 1);
    return r.values();
}

void append_bits(BitVec& dst, const BitVec& src) {
    for (std::size_t i = 0; i < src.size(); ++i) dst.append(src.get(i));
}

} // namespace

const char* method_name(Method m) {
    switch (m) {
        case Method::RBC: return "RBC";
        case Method::GRIBC: return "GRIBC";
        case Method::GRGBC: return "GRGBC";
    }
    return "?";
}

Method method_from_name(const std::string& name) {
    std::string up;
    for (char ch : name) up.push_back(static_cast<char>(std::toupper(ch)));
    if (up == "RBC") return Method::RBC;
    if (up == "GRIBC") return Method::GRIBC;
    if (up == "GRGBC") return Method::GRGBC;
    throw ConfigError("unknown method: " + name);
}

GaborBankConfig EncoderConfig::gabor_params() const {
    GaborBankConfig g;
    g.n_scales = n_scales;
    g.n_orientations = n_orientations;
    g.win_rows = win_rows;
    g.win_cols = win_cols;
    g.f_max = f_max;
    g.gamma = gamma;
    g.eta = eta;
    g.phi = phi;
    return g;
}

bool same_layout(const EncoderConfig& a, const EncoderConfig& b) {
    return a.n_scales == b.n_scales && a.n_orientations == b.n_orientations &&
           a.win_rows == b.win_rows && a.win_cols == b.win_cols &&
           a.image_side == b.image_side && a.n_angles == b.n_angles && a.d1 == b.d1 &&
           a.d2 == b.d2 && a.bins_per_angle == b.bins_per_angle;
}

EncoderConfig default_config(Method method, std::size_t n_scales, std::size_t n_orientations,
                             std::size_t win_rows, std::size_t win_cols, std::size_t n_angles) {
    EncoderConfig cfg;
    switch (method) {
        case Method::RBC:
            cfg.image_side = 32;
            cfg.n_angles = static_cast<std::uint16_t>(n_angles);
            cfg.bins_per_angle = 128;
            break;
        case Method::GRIBC:
            cfg.n_scales = static_cast<std::uint16_t>(n_scales);
            cfg.n_orientations = static_cast<std::uint16_t>(n_orientations);
            cfg.win_rows = static_cast<std::uint16_t>(win_rows);
            cfg.win_cols = static_cast<std::uint16_t>(win_cols);
            cfg.image_side = 128;
            cfg.n_angles = 180;
            cfg.d1 = cfg.d2 = 4;
            break;
        case Method::GRGBC:
            cfg.n_scales = static_cast<std::uint16_t>(n_scales);
            cfg.n_orientations = static_cast<std::uint16_t>(n_orientations);
            cfg.win_rows = static_cast<std::uint16_t>(win_rows);
            cfg.win_cols = static_cast<std::uint16_t>(win_cols);
            cfg.image_side = 64;
            cfg.n_angles = static_cast<std::uint16_t>(n_orientations);
            cfg.d1 = cfg.d2 = 2;
            break;
    }
    return cfg;
}

std::size_t Barcode::n_segments() const {
    return method == Method::RBC
               ? config.n_angles
               : static_cast<std::size_t>(config.n_scales) * config.n_orientations;
}

std::size_t Barcode::segment_length() const { return n_bits() / n_segments(); }

Binarized binarize_median(const std::vector<double>& vec, bool nonzero_only) {
    if (vec.empty()) throw ConfigError("binarize_median: empty vector");

    std::vector<double> pool;
    if (nonzero_only) {
        pool.reserve(vec.size());
        for (double v : vec)
            if (v != 0.0) pool.push_back(v);
    } else {
        pool = vec;
    }

    double threshold = 0.0;
    if (!pool.empty()) {
        const std::size_t mid = pool.size() / 2;
        std::nth_element(pool.begin(), pool.begin() + mid, pool.end());
        threshold = pool[mid];
        if (pool.size() % 2 == 0) {
            const double lower = *std::max_element(pool.begin(), pool.begin() + mid);
            threshold = (lower + threshold) / 2.0;
        }
    }

    Binarized out;
    out.threshold = threshold;
    out.bits = BitVec(vec.size());
    for (std::size_t i = 0; i < vec.size(); ++i) out.bits.set(i, vec[i] >= threshold);
    return out;
}

std::size_t code_length(Method method, const EncoderConfig& cfg) {
    validate_config(method, cfg);
    switch (method) {
        case Method::RBC:
            return static_cast<std::size_t>(cfg.n_angles) * cfg.bins_per_angle;
        case Method::GRIBC:
            return static_cast<std::size_t>(cfg.n_scales) * cfg.n_orientations *
                   (kGribcRadonSide / cfg.d1) * (kGribcRadonSide / cfg.d2);
        case Method::GRGBC:
            return static_cast<std::size_t>(cfg.n_scales) * cfg.n_orientations *
                   projection_bin_count(cfg.image_side / cfg.d1, cfg.image_side / cfg.d2);
    }
    throw ConfigError("code_length: unknown method");
}

Barcode rbc_encode(const Raster& img, const EncoderConfig& cfg) {
    validate_config(Method::RBC, cfg);
    const Raster small = normalize(img, cfg.image_side, cfg.image_side);
    const Sinogram sg = radon_transform(small, evenly_spaced_angles(cfg.n_angles));

    Barcode bc;
    bc.method = Method::RBC;
    bc.config = cfg;
    std::vector<double> proj(sg.n_bins());
    for (std::size_t j = 0; j < cfg.n_angles; ++j) {
        for (std::size_t i = 0; i < sg.n_bins(); ++i) proj[i] = sg.values(i, j);
        const auto row = resample_projection(proj, cfg.bins_per_angle);
        append_bits(bc.bits, binarize_median(row, /*nonzero_only=*/true).bits);
    }
    return bc;
}

Barcode gribc_encode(const Raster& img, const EncoderConfig& cfg) {
    validate_config(Method::GRIBC, cfg);
    const Raster base = normalize(img, cfg.image_side, cfg.image_side);
    const Sinogram sg = radon_transform(base, evenly_spaced_angles(cfg.n_angles));
    const Matrix radon_image = resize_bilinear(sg.values, kGribcRadonSide, kGribcRadonSide);

    Barcode bc;
    bc.method = Method::GRIBC;
    bc.config = cfg;
    for (const GaborKernel& kernel : build_bank(cfg.gabor_params())) {
        const Matrix feature = downsample(filter_magnitude(radon_image, kernel), cfg.d1, cfg.d2);
        append_bits(bc.bits, binarize_median(feature.values()).bits);
    }
    return bc;
}

Barcode grgbc_encode(const Raster& img, const EncoderConfig& cfg) {
    validate_config(Method::GRGBC, cfg);
    const Raster base = normalize(img, cfg.image_side, cfg.image_side);

    Barcode bc;
    bc.method = Method::GRGBC;
    bc.config = cfg;
    for (const GaborKernel& kernel : build_bank(cfg.gabor_params())) {
        const Matrix feature = downsample(filter_magnitude(base, kernel), cfg.d1, cfg.d2);
        // project across the stripes of the matched filter
        const double angle = std::fmod(kernel.orientation_deg + 90.0, 180.0);
        const auto projection = radon_projection(feature, angle);
        append_bits(bc.bits, binarize_median(projection).bits);
    }
    return bc;
}

Barcode encode(Method method, const Raster& img, const EncoderConfig& cfg) {
    switch (method) {
        case Method::RBC: return rbc_encode(img, cfg);
        case Method::GRIBC: return gribc_encode(img, cfg);
        case Method::GRGBC: return grgbc_encode(img, cfg);
    }
    throw ConfigError("encode: unknown method");
}

void render_barcode(const Barcode& bc, const std::string& path, std::size_t scale) {
    if (bc.n_bits() == 0) throw ConfigError("render_barcode: empty barcode");
    if (scale < 1) throw ConfigError("render_barcode: scale must be >= 1");
    const std::size_t segments = bc.n_segments();
    const std::size_t seg_len = bc.segment_length();
    Matrix img(segments * scale, seg_len * scale, 1.0);
    for (std::size_t s = 0; s < segments; ++s)
        for (std::size_t i = 0; i < seg_len; ++i) {
            if (!bc.bits.get(s * seg_len + i)) continue;
            for (std::size_t dr = 0; dr < scale; ++dr)
                for (std::size_t dc = 0; dc < scale; ++dc)
                    img(s * scale + dr, i * scale + dc) = 0.0;
        }
    write_png_gray(path, img);
}

} // namespace rgbc
