// rgbc — encode image corpora into barcode archives, search them, and
// score retrieval against hierarchical ground-truth codes.
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rgbc/archive.hpp"
#include "rgbc/barcode.hpp"
#include "rgbc/errors.hpp"
#include "rgbc/irma.hpp"
#include "rgbc/raster.hpp"
#include "rgbc/threading.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

struct ManifestRow {
    std::string id;   // path token as written (also the archive entry id)
    std::string path; // resolved against the manifest's directory
    std::string code; // optional third-column-free label column
};

// One record per line: "<image-path> [<code>]". '#' starts a comment.
std::vector<ManifestRow> read_manifest(const std::string& manifest_path, bool need_codes) {
    std::ifstream in(manifest_path);
    if (!in) throw rgbc::IoError("cannot open manifest '" + manifest_path + "'");
    fs::path base = fs::path(manifest_path).parent_path();
    std::vector<ManifestRow> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream fields(line);
        ManifestRow row;
        if (!(fields >> row.id)) continue;
        fields >> row.code;
        std::string extra;
        if (fields >> extra)
            throw rgbc::FormatError("manifest '" + manifest_path + "' line " +
                                    std::to_string(line_no) + ": unexpected field '" + extra +
                                    "'");
        if (need_codes && row.code.empty())
            throw rgbc::FormatError("manifest '" + manifest_path + "' line " +
                                    std::to_string(line_no) + ": missing code column");
        fs::path p(row.id);
        row.path = p.is_absolute() ? row.id : (base / p).string();
        rows.push_back(std::move(row));
    }
    if (rows.empty())
        throw rgbc::FormatError("manifest '" + manifest_path + "': no entries");
    return rows;
}

struct BankGeometry {
    std::uint16_t scales = 0;
    std::uint16_t orientations = 0;
    std::uint16_t win_rows = 23;
    std::uint16_t win_cols = 23;
    std::uint16_t angles = 8;
    std::uint16_t image_side = 0; // 0 = method default
    std::uint16_t d1 = 0;
    std::uint16_t d2 = 0;
    std::uint16_t bins = 0;
    rgbc::EncoderConfig floats; // carries f_max/gamma/eta/phi
};

void add_bank_options(CLI::App* cmd, BankGeometry& g) {
    cmd->add_option("--scales", g.scales, "Gabor scale count N_u");
    cmd->add_option("--orientations", g.orientations, "Gabor orientation count N_v");
    cmd->add_option("--window-rows", g.win_rows, "Gabor window rows s")->capture_default_str();
    cmd->add_option("--window-cols", g.win_cols, "Gabor window cols t")->capture_default_str();
    cmd->add_option("--angles", g.angles, "projection angle count (rbc)")
        ->capture_default_str();
    cmd->add_option("--image-side", g.image_side, "normalized image side (0 = method default)");
    cmd->add_option("--d1", g.d1, "row decimation factor (0 = method default)");
    cmd->add_option("--d2", g.d2, "column decimation factor (0 = method default)");
    cmd->add_option("--bins", g.bins, "bins per projection (rbc; 0 = method default)");
    cmd->add_option("--f-max", g.floats.f_max, "peak Gabor frequency")->capture_default_str();
    cmd->add_option("--gamma", g.floats.gamma, "Gabor sharpness along x'")
        ->capture_default_str();
    cmd->add_option("--eta", g.floats.eta, "Gabor sharpness along y'")->capture_default_str();
    cmd->add_option("--phi", g.floats.phi, "Gabor phase offset")->capture_default_str();
}

rgbc::EncoderConfig make_config(rgbc::Method method, const BankGeometry& g) {
    rgbc::EncoderConfig cfg = rgbc::default_config(method, g.scales, g.orientations,
                                                   g.win_rows, g.win_cols, g.angles);
    if (g.image_side) cfg.image_side = g.image_side;
    if (g.d1) cfg.d1 = g.d1;
    if (g.d2) cfg.d2 = g.d2;
    if (g.bins) cfg.bins_per_angle = g.bins;
    cfg.f_max = g.floats.f_max;
    cfg.gamma = g.floats.gamma;
    cfg.eta = g.floats.eta;
    cfg.phi = g.floats.phi;
    return cfg;
}

ordered_json config_json(const rgbc::EncoderConfig& cfg) {
    return ordered_json{{"scales", cfg.n_scales},
                        {"orientations", cfg.n_orientations},
                        {"window_rows", cfg.win_rows},
                        {"window_cols", cfg.win_cols},
                        {"image_side", cfg.image_side},
                        {"angles", cfg.n_angles},
                        {"d1", cfg.d1},
                        {"d2", cfg.d2},
                        {"bins_per_angle", cfg.bins_per_angle}};
}

int run_encode(const std::string& manifest, const std::string& output,
               const std::string& method_str, const BankGeometry& geom, std::size_t threads,
               const std::string& format) {
    rgbc::Method method = rgbc::method_from_name(method_str);
    rgbc::EncoderConfig cfg = make_config(method, geom);

    std::vector<ManifestRow> rows = read_manifest(manifest, false);
    struct Slot {
        rgbc::BitVec bits;
        double ms = 0.0;
        std::string error;
    };
    std::vector<Slot> slots(rows.size());
    rgbc::parallel_for(rows.size(), threads, [&](std::size_t i) {
        auto t0 = std::chrono::steady_clock::now();
        try {
            rgbc::Raster img = rgbc::load_image(rows[i].path);
            slots[i].bits = rgbc::encode(method, img, cfg).bits;
        } catch (const std::exception& e) {
            slots[i].error = e.what();
        }
        slots[i].ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - t0)
                          .count();
    });

    rgbc::BarcodeArchive archive;
    archive.method = method;
    archive.config = cfg;
    archive.n_bits = static_cast<std::uint32_t>(rgbc::code_length(method, cfg));
    std::vector<std::pair<std::string, std::string>> skipped;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (!slots[i].error.empty()) {
            std::cerr << "warning: skipped " << rows[i].id << ": " << slots[i].error << "\n";
            skipped.emplace_back(rows[i].id, slots[i].error);
            continue;
        }
        std::cerr << "encoded " << rows[i].id << " (" << std::fixed << std::setprecision(1)
                  << slots[i].ms << " ms)\n";
        archive.add({rows[i].id, rows[i].code, slots[i].bits});
    }
    if (!skipped.empty()) {
        std::ofstream side(output + ".skipped.txt");
        for (const auto& [id, why] : skipped) side << id << '\t' << why << '\n';
        std::cerr << "warning: " << skipped.size() << " image(s) skipped; see " << output
                  << ".skipped.txt\n";
    }
    if (archive.entries.empty())
        throw rgbc::ConfigError("encode: every image failed; archive not written");
    rgbc::save_archive(archive, output);

    if (format == "json") {
        ordered_json out{{"archive", output},
                         {"method", rgbc::method_name(method)},
                         {"entries", archive.entries.size()},
                         {"skipped", skipped.size()},
                         {"code_bits", archive.n_bits},
                         {"config", config_json(cfg)}};
        std::cout << out.dump(2) << "\n";
    } else {
        std::cout << "wrote " << archive.entries.size() << " " << rgbc::method_name(method)
                  << " codes (" << archive.n_bits << " bits each) to " << output;
        if (!skipped.empty()) std::cout << "; skipped " << skipped.size();
        std::cout << "\n";
    }
    return 0;
}

int run_search(const std::string& query_path, const std::string& archive_path, std::size_t k,
               const std::string& method_str, const std::string& exclude_id,
               const BankGeometry& geom, const std::string& format) {
    rgbc::BarcodeArchive archive = rgbc::load_archive(archive_path);
    if (!method_str.empty() && rgbc::method_from_name(method_str) != archive.method)
        throw rgbc::ConfigError("archive '" + archive_path + "' holds " +
                                rgbc::method_name(archive.method) + " codes, not " +
                                method_str);
    rgbc::EncoderConfig cfg = archive.config;
    cfg.f_max = geom.floats.f_max;
    cfg.gamma = geom.floats.gamma;
    cfg.eta = geom.floats.eta;
    cfg.phi = geom.floats.phi;

    std::string query_id = fs::path(query_path).filename().string();
    rgbc::Barcode bc = rgbc::encode(archive.method, rgbc::load_image(query_path), cfg);
    std::optional<std::string> exclude;
    if (!exclude_id.empty()) exclude = exclude_id;
    rgbc::RetrievalResult res = rgbc::search(bc, archive, k, query_id, exclude);

    if (format == "table") {
        std::cout << std::left << std::setw(32) << "id" << std::setw(12) << "similarity"
                  << "code\n";
        for (const auto& hit : res.hits)
            std::cout << std::left << std::setw(32) << hit.id << std::setw(12) << std::fixed
                      << std::setprecision(6) << hit.similarity
                      << (hit.irma_code.empty() ? "-" : hit.irma_code) << "\n";
    } else {
        ordered_json hits = ordered_json::array();
        for (const auto& hit : res.hits)
            hits.push_back({{"id", hit.id},
                            {"similarity", hit.similarity},
                            {"code", hit.irma_code}});
        ordered_json out{{"query", res.query_id},
                         {"archive", archive_path},
                         {"method", rgbc::method_name(archive.method)},
                         {"hits", hits}};
        std::cout << out.dump(2) << "\n";
    }
    return 0;
}

int run_evaluate(const std::string& manifest, const std::vector<std::string>& archive_paths,
                 const std::string& hierarchy_path, const std::string& json_out,
                 const BankGeometry& geom, std::size_t threads, const std::string& format) {
    std::vector<ManifestRow> rows = read_manifest(manifest, true);
    std::vector<rgbc::QueryItem> queries;
    queries.reserve(rows.size());
    for (const auto& row : rows)
        queries.push_back({row.id, rgbc::load_image(row.path), rgbc::parse_irma(row.code)});

    std::vector<rgbc::EvaluationReport> reports;
    for (const std::string& path : archive_paths) {
        rgbc::BarcodeArchive archive = rgbc::load_archive(path);
        archive.config.f_max = geom.floats.f_max;
        archive.config.gamma = geom.floats.gamma;
        archive.config.eta = geom.floats.eta;
        archive.config.phi = geom.floats.phi;
        rgbc::HierarchyStats stats;
        if (!hierarchy_path.empty()) {
            stats = rgbc::load_hierarchy(hierarchy_path);
        } else {
            std::vector<rgbc::IrmaCode> training;
            for (const auto& entry : archive.entries)
                if (!entry.irma_code.empty()) training.push_back(rgbc::parse_irma(entry.irma_code));
            if (training.empty())
                throw rgbc::ConfigError("archive '" + path +
                                        "' carries no codes; supply --hierarchy");
            stats = rgbc::build_hierarchy(training);
        }
        rgbc::EvaluationReport report = rgbc::evaluate(archive, queries, stats, threads);
        if (report.unknown_prefix_lookups > 0)
            std::cerr << "warning: " << report.unknown_prefix_lookups
                      << " lookup(s) hit prefixes absent from the hierarchy (b = 1 fallback)\n";
        reports.push_back(std::move(report));
    }

    std::vector<double> eta;
    if (reports.size() > 1) {
        bool all_positive = true;
        std::vector<std::pair<double, double>> ranked;
        for (const auto& r : reports) {
            if (r.e_total <= 0.0) all_positive = false;
            ranked.emplace_back(r.e_total, static_cast<double>(r.l_code));
        }
        if (all_positive)
            eta = rgbc::suitability(ranked);
        else
            std::cerr << "warning: eta skipped (a method scored zero total error)\n";
    }

    ordered_json out = ordered_json::array();
    for (std::size_t i = 0; i < reports.size(); ++i) {
        const auto& r = reports[i];
        ordered_json per_query = ordered_json::array();
        for (const auto& q : r.queries)
            per_query.push_back({{"id", q.id},
                                 {"hit", q.hit_id},
                                 {"similarity", q.similarity},
                                 {"error", q.error}});
        ordered_json jr{{"archive", archive_paths[i]},
                        {"method", r.method},
                        {"code_bits", r.l_code},
                        {"queries", r.n_queries},
                        {"e_total", r.e_total},
                        {"accuracy", r.accuracy},
                        {"e_total_top3", r.e_total_top3},
                        {"e_total_top5", r.e_total_top5},
                        {"mean_query_seconds", r.mean_query_seconds},
                        {"unknown_prefix_lookups", r.unknown_prefix_lookups},
                        {"per_query", per_query}};
        if (!eta.empty()) jr["eta"] = eta[i];
        out.push_back(std::move(jr));
    }
    if (!json_out.empty()) {
        std::ofstream f(json_out);
        if (!f) throw rgbc::IoError("cannot write report '" + json_out + "'");
        f << out.dump(2) << "\n";
    }

    if (format == "table") {
        std::cout << std::left << std::setw(10) << "method" << std::right << std::setw(8)
                  << "L_code" << std::setw(12) << "E_total" << std::setw(10) << "A"
                  << std::setw(12) << "E_top3" << std::setw(12) << "E_top5" << std::setw(10)
                  << "ms/query";
        if (!eta.empty()) std::cout << std::setw(10) << "eta";
        std::cout << "\n";
        for (std::size_t i = 0; i < reports.size(); ++i) {
            const auto& r = reports[i];
            std::cout << std::left << std::setw(10) << r.method << std::right << std::setw(8)
                      << r.l_code << std::setw(12) << std::fixed << std::setprecision(4)
                      << r.e_total << std::setw(10) << std::setprecision(4) << r.accuracy
                      << std::setw(12) << std::setprecision(4) << r.e_total_top3
                      << std::setw(12) << std::setprecision(4) << r.e_total_top5
                      << std::setw(10) << std::setprecision(2)
                      << r.mean_query_seconds * 1e3;
            if (!eta.empty()) std::cout << std::setw(10) << std::setprecision(3) << eta[i];
            std::cout << "\n";
        }
    } else {
        std::cout << out.dump(2) << "\n";
    }
    return 0;
}

int run_render(const std::string& archive_path, const std::string& entry_id,
               const std::string& image_path, const std::string& method_str,
               const BankGeometry& geom, const std::string& output, std::size_t scale) {
    rgbc::Barcode bc;
    if (!archive_path.empty()) {
        if (entry_id.empty())
            throw rgbc::ConfigError("render: --archive requires --id");
        rgbc::BarcodeArchive archive = rgbc::load_archive(archive_path);
        const rgbc::ArchiveEntry* found = nullptr;
        for (const auto& entry : archive.entries)
            if (entry.id == entry_id) { found = &entry; break; }
        if (!found)
            throw rgbc::ConfigError("render: no entry '" + entry_id + "' in " + archive_path);
        bc.method = archive.method;
        bc.config = archive.config;
        bc.bits = found->bits;
    } else if (!image_path.empty()) {
        if (method_str.empty())
            throw rgbc::ConfigError("render: --image requires --method");
        rgbc::Method method = rgbc::method_from_name(method_str);
        bc = rgbc::encode(method, rgbc::load_image(image_path), make_config(method, geom));
    } else {
        throw rgbc::ConfigError("render: give either --archive --id or --image --method");
    }
    rgbc::render_barcode(bc, output, scale);
    std::cerr << "rendered " << bc.n_bits() << " bits (" << bc.n_segments() << " segments) to "
              << output << "\n";
    return 0;
}

int run_inspect(const std::string& archive_path, bool list_ids, const std::string& format) {
    rgbc::BarcodeArchive archive = rgbc::load_archive(archive_path);
    if (format == "table") {
        std::cout << "archive:    " << archive_path << "\n"
                  << "method:     " << rgbc::method_name(archive.method) << "\n"
                  << "code bits:  " << archive.n_bits << "\n"
                  << "entries:    " << archive.entries.size() << "\n"
                  << "geometry:   side " << archive.config.image_side << ", angles "
                  << archive.config.n_angles << ", window " << archive.config.win_rows << "x"
                  << archive.config.win_cols << ", decimation " << archive.config.d1 << "x"
                  << archive.config.d2 << ", bins/angle " << archive.config.bins_per_angle
                  << "\n"
                  << "bank:       " << archive.config.n_scales << " scales x "
                  << archive.config.n_orientations << " orientations\n";
        if (list_ids)
            for (const auto& entry : archive.entries)
                std::cout << "  " << entry.id
                          << (entry.irma_code.empty() ? "" : "  " + entry.irma_code) << "\n";
    } else {
        ordered_json out{{"archive", archive_path},
                         {"method", rgbc::method_name(archive.method)},
                         {"code_bits", archive.n_bits},
                         {"entries", archive.entries.size()},
                         {"config", config_json(archive.config)}};
        if (list_ids) {
            ordered_json ids = ordered_json::array();
            for (const auto& entry : archive.entries)
                ids.push_back({{"id", entry.id}, {"code", entry.irma_code}});
            out["ids"] = ids;
        }
        std::cout << out.dump(2) << "\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Radon/Gabor barcode toolkit"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_config("--config", "", "Read defaults from a key=value file");
    app.set_version_flag("--version", "rgbc 1.0.0");

    std::size_t threads = rgbc::default_thread_count();
    std::string format = "table";
    app.add_option("--threads", threads, "worker thread count")->capture_default_str();
    app.add_option("--format", format, "output format")
        ->check(CLI::IsMember({"table", "json"}))
        ->capture_default_str();

    // encode
    auto* enc = app.add_subcommand("encode", "Encode a manifest of images into an archive");
    std::string enc_manifest, enc_output, enc_method;
    BankGeometry enc_geom;
    enc->add_option("manifest", enc_manifest, "manifest file: <image-path> [<code>]")
        ->required();
    enc->add_option("-o,--output", enc_output, "archive file to write")->required();
    enc->add_option("-m,--method", enc_method, "rbc | gribc | grgbc")->required();
    add_bank_options(enc, enc_geom);

    // search
    auto* srch = app.add_subcommand("search", "Query an archive with an image");
    std::string srch_query, srch_archive, srch_method, srch_exclude;
    std::size_t srch_k = 10;
    BankGeometry srch_geom;
    srch->add_option("query", srch_query, "query image (png/pnm)")->required();
    srch->add_option("-a,--archive", srch_archive, "archive file")->required();
    srch->add_option("-k,--top-k", srch_k, "number of hits")->capture_default_str();
    srch->add_option("-m,--method", srch_method, "expected archive method (checked)");
    srch->add_option("--exclude", srch_exclude, "entry id to exclude (leave-one-out)");
    srch->add_option("--f-max", srch_geom.floats.f_max, "peak Gabor frequency")
        ->capture_default_str();
    srch->add_option("--gamma", srch_geom.floats.gamma, "Gabor sharpness along x'")
        ->capture_default_str();
    srch->add_option("--eta", srch_geom.floats.eta, "Gabor sharpness along y'")
        ->capture_default_str();
    srch->add_option("--phi", srch_geom.floats.phi, "Gabor phase offset")
        ->capture_default_str();

    // evaluate
    auto* eval = app.add_subcommand("evaluate", "Score retrieval against ground-truth codes");
    std::string eval_manifest, eval_hierarchy, eval_json;
    std::vector<std::string> eval_archives;
    BankGeometry eval_geom;
    eval->add_option("manifest", eval_manifest, "query manifest: <image-path> <code>")
        ->required();
    eval->add_option("-a,--archive", eval_archives, "archive file (repeat to compare methods)")
        ->required();
    eval->add_option("--hierarchy", eval_hierarchy,
                     "branch-count table file (default: derive from archive codes)");
    eval->add_option("--output", eval_json, "also write the JSON report to this file");
    eval->add_option("--f-max", eval_geom.floats.f_max, "peak Gabor frequency")
        ->capture_default_str();
    eval->add_option("--gamma", eval_geom.floats.gamma, "Gabor sharpness along x'")
        ->capture_default_str();
    eval->add_option("--eta", eval_geom.floats.eta, "Gabor sharpness along y'")
        ->capture_default_str();
    eval->add_option("--phi", eval_geom.floats.phi, "Gabor phase offset")
        ->capture_default_str();

    // render
    auto* rend = app.add_subcommand("render", "Write a barcode as a PNG strip");
    std::string rend_archive, rend_id, rend_image, rend_method, rend_output;
    std::size_t rend_scale = 4;
    BankGeometry rend_geom;
    rend->add_option("-a,--archive", rend_archive, "archive holding the barcode");
    rend->add_option("--id", rend_id, "entry id inside --archive");
    rend->add_option("-i,--image", rend_image, "image to encode on the fly");
    rend->add_option("-m,--method", rend_method, "method for --image");
    rend->add_option("-o,--output", rend_output, "PNG file to write")->required();
    rend->add_option("--scale", rend_scale, "pixels per bit cell")->capture_default_str();
    add_bank_options(rend, rend_geom);

    // inspect
    auto* insp = app.add_subcommand("inspect", "Print an archive's header");
    std::string insp_archive;
    bool insp_ids = false;
    insp->add_option("archive", insp_archive, "archive file")->required();
    insp->add_flag("--ids", insp_ids, "also list entry ids and codes");

    try {
        app.parse(argc, argv);
        if (*enc)
            return run_encode(enc_manifest, enc_output, enc_method, enc_geom, threads, format);
        if (*srch)
            return run_search(srch_query, srch_archive, srch_k, srch_method, srch_exclude,
                              srch_geom, format);
        if (*eval)
            return run_evaluate(eval_manifest, eval_archives, eval_hierarchy, eval_json,
                                eval_geom, threads, format);
        if (*rend)
            return run_render(rend_archive, rend_id, rend_image, rend_method, rend_geom,
                              rend_output, rend_scale);
        if (*insp) return run_inspect(insp_archive, insp_ids, format);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    } catch (const rgbc::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const rgbc::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
