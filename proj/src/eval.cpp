#include "fsitm/eval.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fmt/format.h>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>

#include <json.hpp>

#include "fsitm/image_io.hpp"

namespace fsitm {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string_view strip_cr(std::string_view line) {
    if (!line.empty() && line.back() == '\r') {
        line.remove_suffix(1);
    }
    return line;
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

std::filesystem::path resolve(std::string_view field, const std::filesystem::path& base) {
    std::filesystem::path p{std::string(field)};
    return p.is_absolute() ? p : base / p;
}

} // namespace

RankManifest read_manifest(const std::filesystem::path& csv_path) {
    std::ifstream in(csv_path);
    if (!in) {
        throw ManifestError(fmt::format("cannot open manifest '{}'", csv_path.string()));
    }
    const std::filesystem::path base = csv_path.parent_path();

    RankManifest manifest;
    std::string line;
    int line_no = 0;
    bool saw_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view view = strip_cr(line);
        if (line_no == 1 && view.starts_with("\xEF\xBB\xBF")) {
            view.remove_prefix(3);
        }
        if (view.empty()) {
            continue;
        }
        if (!saw_header) {
            if (view != "hdr_path,ldr_path,rank") {
                throw ManifestError(fmt::format(
                    "line {}: expected header 'hdr_path,ldr_path,rank', got '{}'", line_no, view));
            }
            saw_header = true;
            continue;
        }
        const auto fields = split_fields(view);
        if (fields.size() != 3) {
            throw ManifestError(
                fmt::format("line {}: expected 3 fields, got {}", line_no, fields.size()));
        }
        if (fields[0].empty() || fields[1].empty()) {
            throw ManifestError(fmt::format("line {}: empty path field", line_no));
        }
        double rank = 0.0;
        const auto* first = fields[2].data();
        const auto* last = fields[2].data() + fields[2].size();
        const auto [ptr, ec] = std::from_chars(first, last, rank);
        if (ec != std::errc{} || ptr != last || !std::isfinite(rank)) {
            throw ManifestError(
                fmt::format("line {}: bad rank '{}'", line_no, fields[2]));
        }
        manifest.entries.push_back(
            ManifestEntry{resolve(fields[0], base), resolve(fields[1], base), rank});
    }
    if (!saw_header) {
        throw ManifestError(fmt::format("manifest '{}' is empty", csv_path.string()));
    }
    if (manifest.entries.empty()) {
        throw ManifestError(fmt::format("manifest '{}' has no rows", csv_path.string()));
    }

    std::map<std::string, int> set_sizes;
    for (const auto& e : manifest.entries) {
        ++set_sizes[e.hdr_path.string()];
    }
    for (const auto& [hdr, count] : set_sizes) {
        if (count < 3) {
            throw ManifestError(fmt::format(
                "set '{}' has only {} entries; rank correlation needs at least 3", hdr, count));
        }
    }
    return manifest;
}

namespace {

void check_lengths(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        throw LengthMismatch(fmt::format("{} vs {} values", a.size(), b.size()));
    }
    if (a.size() < 3) {
        throw LengthMismatch(fmt::format("{} values; need at least 3", a.size()));
    }
}

// 1-based ranks; tied values share the average of their positions.
std::vector<double> average_ranks(std::span<const double> values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::ranges::sort(order, [&](std::size_t i, std::size_t j) { return values[i] < values[j]; });

    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) {
            ++j;
        }
        const double shared = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
        for (std::size_t k = i; k <= j; ++k) {
            ranks[order[k]] = shared;
        }
        i = j + 1;
    }
    return ranks;
}

} // namespace

double srcc(std::span<const double> a, std::span<const double> b) {
    check_lengths(a, b);
    const auto ra = average_ranks(a);
    const auto rb = average_ranks(b);
    const std::size_t n = ra.size();
    const double mean = (n + 1) / 2.0; // ranks always average to (n+1)/2

    double num = 0.0, va = 0.0, vb = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double da = ra[i] - mean;
        const double db = rb[i] - mean;
        num += da * db;
        va += da * da;
        vb += db * db;
    }
    if (va == 0.0 || vb == 0.0) {
        throw DegenerateInput("constant vector has no rank ordering");
    }
    return num / std::sqrt(va * vb);
}

double krcc(std::span<const double> a, std::span<const double> b, KendallVariant variant) {
    check_lengths(a, b);
    const std::size_t n = a.size();

    long long concordant = 0, discordant = 0;
    long long ties_a = 0, ties_b = 0; // tied pairs per vector
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const auto sa = (a[i] < a[j]) - (a[i] > a[j]);
            const auto sb = (b[i] < b[j]) - (b[i] > b[j]);
            ties_a += sa == 0;
            ties_b += sb == 0;
            concordant += sa * sb > 0;
            discordant += sa * sb < 0;
        }
    }
    const long long pairs = static_cast<long long>(n) * (n - 1) / 2;
    if (ties_a == pairs || ties_b == pairs) {
        throw DegenerateInput("constant vector has no rank ordering");
    }
    const double net = static_cast<double>(concordant - discordant);
    if (variant == KendallVariant::TauA) {
        return net / static_cast<double>(pairs);
    }
    return net / std::sqrt(static_cast<double>(pairs - ties_a) *
                           static_cast<double>(pairs - ties_b));
}

namespace {

AggregateStats aggregate(std::vector<double> values) {
    std::erase_if(values, [](double v) { return !std::isfinite(v); });
    if (values.empty()) {
        return AggregateStats{kNaN, kNaN, kNaN, kNaN};
    }
    std::ranges::sort(values);
    const std::size_t n = values.size();
    AggregateStats s;
    s.min = values.front();
    s.median = n % 2 == 1 ? values[n / 2] : (values[n / 2 - 1] + values[n / 2]) / 2.0;
    s.average = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(n);
    double var = 0.0;
    for (double v : values) {
        var += (v - s.average) * (v - s.average);
    }
    s.std = std::sqrt(var / static_cast<double>(n));
    return s;
}

} // namespace

CorrelationReport evaluate(const RankManifest& manifest, const MetricFn& metric, ChannelId c) {
    // Group rows by HDR source, ordered by id for a canonical report.
    std::map<std::string, std::vector<const ManifestEntry*>> sets;
    for (const auto& e : manifest.entries) {
        sets[e.hdr_path.string()].push_back(&e);
    }

    CorrelationReport report;
    for (const auto& [hdr_id, entries] : sets) {
        SetResult result;
        result.hdr_id = hdr_id;

        std::optional<HdrImage> hdr;
        try {
            hdr = load_hdr(entries.front()->hdr_path);
        } catch (const std::exception& e) {
            result.entry_errors.push_back(fmt::format("{}: {}", hdr_id, e.what()));
        }

        std::vector<double> scores, neg_ranks;
        if (hdr) {
            for (const ManifestEntry* entry : entries) {
                try {
                    const LdrImage ldr = load_ldr(entry->ldr_path);
                    scores.push_back(metric(*hdr, ldr, c));
                    neg_ranks.push_back(-entry->rank);
                } catch (const std::exception& e) {
                    result.entry_errors.push_back(
                        fmt::format("{}: {}", entry->ldr_path.string(), e.what()));
                }
            }
        }

        result.n = static_cast<int>(scores.size());
        if (scores.size() < 3) {
            result.skipped = true;
            result.srcc = kNaN;
            result.krcc = kNaN;
        } else {
            try {
                result.srcc = srcc(scores, neg_ranks);
            } catch (const DegenerateInput&) {
                result.srcc = kNaN;
            }
            try {
                result.krcc = krcc(scores, neg_ranks);
            } catch (const DegenerateInput&) {
                result.krcc = kNaN;
            }
        }
        report.per_set.push_back(std::move(result));
    }

    std::vector<double> srcc_values, krcc_values;
    for (const auto& s : report.per_set) {
        srcc_values.push_back(s.srcc);
        krcc_values.push_back(s.krcc);
    }
    report.srcc_agg = aggregate(std::move(srcc_values));
    report.krcc_agg = aggregate(std::move(krcc_values));
    return report;
}

std::string report_to_json(const CorrelationReport& report) {
    nlohmann::json per_set = nlohmann::json::array();
    for (const auto& s : report.per_set) {
        nlohmann::json row{
            {"hdr_id", s.hdr_id}, {"srcc", s.srcc}, {"krcc", s.krcc}, {"n", s.n}};
        if (!s.entry_errors.empty()) {
            row["errors"] = s.entry_errors;
        }
        per_set.push_back(std::move(row));
    }
    auto stats = [](const AggregateStats& a) {
        return nlohmann::json{
            {"min", a.min}, {"median", a.median}, {"average", a.average}, {"std", a.std}};
    };
    const nlohmann::json doc{
        {"per_set", std::move(per_set)},
        {"aggregates",
         nlohmann::json{{"srcc", stats(report.srcc_agg)}, {"krcc", stats(report.krcc_agg)}}}};
    return doc.dump(2) + "\n";
}

std::string report_to_text(const CorrelationReport& report) {
    std::size_t id_width = std::string_view("set").size();
    for (const auto& s : report.per_set) {
        id_width = std::max(id_width, s.hdr_id.size());
    }

    std::ostringstream out;
    auto value = [](double v) {
        return std::isfinite(v) ? fmt::format("{:7.4f}", v) : fmt::format("{:>7}", "nan");
    };
    out << fmt::format("{:<{}}  {:>7}  {:>7}  {:>3}\n", "set", id_width, "srcc", "krcc", "n");
    for (const auto& s : report.per_set) {
        out << fmt::format("{:<{}}  {}  {}  {:>3}{}\n", s.hdr_id, id_width, value(s.srcc),
                           value(s.krcc), s.n, s.skipped ? "  (skipped)" : "");
        for (const auto& err : s.entry_errors) {
            out << fmt::format("{:<{}}  ! {}\n", "", id_width, err);
        }
    }
    const auto row = [&](std::string_view label, double sv, double kv) {
        out << fmt::format("{:<{}}  {}  {}\n", label, id_width, value(sv), value(kv));
    };
    out << '\n';
    row("min", report.srcc_agg.min, report.krcc_agg.min);
    row("median", report.srcc_agg.median, report.krcc_agg.median);
    row("average", report.srcc_agg.average, report.krcc_agg.average);
    row("std", report.srcc_agg.std, report.krcc_agg.std);
    return std::move(out).str();
}

} // namespace fsitm
