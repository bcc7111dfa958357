#include "rgbc/irma.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <chrono>
#include <fstream>
#include <sstream>

#include "rgbc/barcode.hpp"
#include "rgbc/errors.hpp"
#include "rgbc/threading.hpp"

namespace rgbc {

namespace {

bool valid_label(char c) {
    return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z');
}

int axis_index(char c) {
    switch (std::toupper(static_cast<unsigned char>(c))) {
    case 'T': return 0;
    case 'D': return 1;
    case 'A': return 2;
    case 'B': return 3;
    default: return -1;
    }
}

} // namespace

std::string IrmaCode::to_string() const {
    std::string out;
    for (std::size_t a = 0; a < axes.size(); ++a) {
        if (a) out += '-';
        out += axes[a];
    }
    return out;
}

bool IrmaCode::has_wildcard() const {
    for (const auto& axis : axes)
        if (axis.find('*') != std::string::npos) return true;
    return false;
}

IrmaCode parse_irma(const std::string& text) {
    IrmaCode code;
    std::size_t pos = 0;
    for (std::size_t a = 0; a < 4; ++a) {
        if (a) {
            if (pos >= text.size() || text[pos] != '-')
                throw FormatError("code '" + text + "': expected '-' separator");
            ++pos;
        }
        std::string& axis = code.axes[a];
        for (std::size_t i = 0; i < IrmaCode::kAxisLengths[a]; ++i, ++pos) {
            if (pos >= text.size())
                throw FormatError("code '" + text + "': too short");
            char c = static_cast<char>(std::tolower(static_cast<unsigned char>(text[pos])));
            if (c != '*' && !valid_label(c))
                throw FormatError("code '" + text + "': invalid character '" +
                                  std::string(1, text[pos]) + "'");
            axis += c;
        }
    }
    if (pos != text.size())
        throw FormatError("code '" + text + "': trailing characters");
    return code;
}

std::size_t AxisStats::b(const std::string& prefix, bool* known) const {
    auto it = branch_counts.find(prefix);
    if (it == branch_counts.end()) {
        if (known) *known = false;
        return 1;
    }
    if (known) *known = true;
    return it->second;
}

HierarchyStats build_hierarchy(const std::vector<IrmaCode>& codes) {
    if (codes.empty()) throw ConfigError("hierarchy: no codes given");
    // Distinct successor labels per prefix, as 36-bit masks.
    std::array<std::unordered_map<std::string, std::uint64_t>, 4> masks;
    for (const auto& code : codes) {
        if (code.has_wildcard())
            throw ConfigError("hierarchy: ground-truth code '" + code.to_string() +
                              "' contains '*'");
        for (std::size_t a = 0; a < 4; ++a) {
            const std::string& axis = code.axes[a];
            for (std::size_t i = 0; i < axis.size(); ++i) {
                char c = axis[i];
                int slot = (c <= '9') ? c - '0' : c - 'a' + 10;
                masks[a][axis.substr(0, i)] |= std::uint64_t{1} << slot;
            }
        }
    }
    HierarchyStats stats;
    for (std::size_t a = 0; a < 4; ++a)
        for (const auto& [prefix, mask] : masks[a])
            stats.axes[a].branch_counts[prefix] =
                static_cast<std::uint32_t>(std::popcount(mask));
    return stats;
}

HierarchyStats load_hierarchy(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open hierarchy file '" + path + "'");
    HierarchyStats stats;
    std::string line;
    std::size_t line_no = 0;
    std::size_t records = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream row(line);
        std::string axis, prefix;
        long long b = 0;
        if (!(row >> axis)) continue; // blank line
        auto fail = [&](const std::string& what) {
            throw FormatError("hierarchy '" + path + "' line " + std::to_string(line_no) +
                              ": " + what);
        };
        if (axis.size() != 1 || axis_index(axis[0]) < 0) fail("unknown axis '" + axis + "'");
        if (!(row >> prefix >> b)) fail("expected '<axis> <prefix> <b>'");
        std::string rest;
        if (row >> rest) fail("trailing field '" + rest + "'");
        if (prefix == "-") prefix.clear();
        for (char& c : prefix) {
            c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
            if (!valid_label(c)) fail("invalid prefix character");
        }
        std::size_t a = static_cast<std::size_t>(axis_index(axis[0]));
        if (prefix.size() >= IrmaCode::kAxisLengths[a]) fail("prefix too long for axis");
        if (b < 1 || b > 36) fail("b out of range");
        stats.axes[a].branch_counts[prefix] = static_cast<std::uint32_t>(b);
        ++records;
    }
    if (records == 0) throw FormatError("hierarchy '" + path + "': no records");
    return stats;
}

double axis_error(const std::string& truth, const std::string& pred, const AxisStats& stats,
                  std::size_t* unknown_prefix_count) {
    if (truth.size() != pred.size())
        throw ConfigError("axis length mismatch: '" + truth + "' vs '" + pred + "'");
    // An unspecified truth position truncates the comparable part.
    std::size_t eff = truth.find('*');
    if (eff == std::string::npos) eff = truth.size();
    if (eff == 0) return 0.0;

    enum class State { Ok, Wild, Wrong };
    State state = State::Ok;
    double raw = 0.0;
    double raw_max = 0.0;
    for (std::size_t i = 1; i <= eff; ++i) {
        bool known = true;
        double b = static_cast<double>(stats.b(truth.substr(0, i - 1), &known));
        if (!known && unknown_prefix_count) ++*unknown_prefix_count;
        double w = 1.0 / (b * static_cast<double>(i));
        raw_max += w;
        if (state == State::Ok) {
            char p = pred[i - 1];
            if (p == '*')
                state = State::Wild;
            else if (p != truth[i - 1])
                state = State::Wrong;
        }
        if (state == State::Wild)
            raw += 0.5 * w;
        else if (state == State::Wrong)
            raw += w;
    }
    return 0.25 * raw / raw_max;
}

double total_error(const IrmaCode& truth, const IrmaCode& pred, const HierarchyStats& stats,
                   std::size_t* unknown_prefix_count) {
    double sum = 0.0;
    for (std::size_t a = 0; a < 4; ++a)
        sum += axis_error(truth.axes[a], pred.axes[a], stats.axes[a], unknown_prefix_count);
    return sum;
}

EvaluationReport evaluate(const BarcodeArchive& archive, const std::vector<QueryItem>& queries,
                          const HierarchyStats& stats, std::size_t n_threads) {
    if (queries.empty()) throw ConfigError("evaluate: no queries");
    if (archive.entries.empty()) throw ConfigError("evaluate: empty archive");

    struct Slot {
        EvaluationReport::PerQuery row;
        double best3 = 0.0;
        double best5 = 0.0;
        double seconds = 0.0;
        std::size_t misses = 0;
        std::string error; // deferred so workers never throw
    };
    std::vector<Slot> slots(queries.size());

    parallel_for(queries.size(), n_threads, [&](std::size_t q) {
        Slot& slot = slots[q];
        const QueryItem& item = queries[q];
        try {
            auto t0 = std::chrono::steady_clock::now();
            Barcode bc = encode(archive.method, item.image, archive.config);
            RetrievalResult res = search(bc, archive, 5, item.id, item.id);
            auto t1 = std::chrono::steady_clock::now();
            slot.seconds = std::chrono::duration<double>(t1 - t0).count();
            if (res.hits.empty())
                throw ConfigError("evaluate: no candidates for query '" + item.id + "'");
            if (res.hits.front().irma_code.empty())
                throw ConfigError("evaluate: archive entry '" + res.hits.front().id +
                                  "' carries no code");
            double best3 = -1.0, best5 = -1.0;
            for (std::size_t h = 0; h < res.hits.size(); ++h) {
                const auto& hit = res.hits[h];
                if (hit.irma_code.empty()) continue; // unratable beyond the first hit
                double e = total_error(item.truth, parse_irma(hit.irma_code), stats,
                                       &slot.misses);
                if (h == 0) slot.row.error = e;
                if (h < 3 && (best3 < 0.0 || e < best3)) best3 = e;
                if (h < 5 && (best5 < 0.0 || e < best5)) best5 = e;
            }
            slot.best3 = best3;
            slot.best5 = best5;
            slot.row.id = item.id;
            slot.row.hit_id = res.hits.front().id;
            slot.row.similarity = res.hits.front().similarity;
        } catch (const std::exception& e) {
            slot.error = e.what();
        }
    });

    for (const Slot& slot : slots)
        if (!slot.error.empty()) throw ConfigError(slot.error);

    EvaluationReport report;
    report.method = method_name(archive.method);
    report.l_code = archive.n_bits;
    report.n_queries = queries.size();
    double seconds = 0.0;
    for (const Slot& slot : slots) {
        report.queries.push_back(slot.row);
        report.e_total += slot.row.error;
        report.e_total_top3 += slot.best3;
        report.e_total_top5 += slot.best5;
        seconds += slot.seconds;
        report.unknown_prefix_lookups += slot.misses;
    }
    report.accuracy = 1.0 - report.e_total / static_cast<double>(queries.size());
    report.mean_query_seconds = seconds / static_cast<double>(queries.size());
    return report;
}

std::vector<double> suitability(const std::vector<std::pair<double, double>>& rows) {
    if (rows.empty()) throw ConfigError("suitability: no rows");
    double max_e = 0.0, max_l = 0.0;
    for (const auto& [e, l] : rows) {
        if (e <= 0.0) throw ConfigError("suitability: error totals must be positive");
        if (l <= 0.0) throw ConfigError("suitability: code lengths must be positive");
        max_e = std::max(max_e, e);
        max_l = std::max(max_l, l);
    }
    std::vector<double> eta;
    eta.reserve(rows.size());
    for (const auto& [e, l] : rows) eta.push_back((max_e * max_l) / (e * l));
    return eta;
}

} // namespace rgbc
