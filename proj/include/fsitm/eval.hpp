#pragma once

#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "fsitm/image.hpp"

namespace fsitm {

/// One manifest row: an LDR rendition of an HDR source plus its subjective
/// rank (1 = best quality; larger = worse; ties permitted).
struct ManifestEntry {
    std::filesystem::path hdr_path;
    std::filesystem::path ldr_path;
    double rank = 0.0;
};

/// Rows grouped implicitly by hdr_path; every group must have at least 3
/// entries for rank correlation to be meaningful.
struct RankManifest {
    std::vector<ManifestEntry> entries;
};

/// Parses a CSV with header `hdr_path,ldr_path,rank`. Relative image paths
/// are resolved against the manifest's directory. Throws ManifestError on
/// malformed rows, non-finite ranks, or groups smaller than 3.
RankManifest read_manifest(const std::filesystem::path& csv_path);

/// Spearman rank-order correlation: Pearson correlation of the two rank
/// vectors, ties receiving average ranks. Throws LengthMismatch when the
/// vectors differ in length or hold fewer than 3 values, DegenerateInput
/// when either vector is constant (correlation undefined — never silently 0).
double srcc(std::span<const double> a, std::span<const double> b);

enum class KendallVariant {
    TauA, // plain pair counting, no tie correction
    TauB, // tie-corrected denominator
};

/// Kendall rank-order correlation: (concordant - discordant) pairs over
/// n(n-1)/2 (tau-a, the default) or over the tie-corrected denominator
/// (tau-b). Same error contract as srcc.
double krcc(std::span<const double> a, std::span<const double> b,
            KendallVariant variant = KendallVariant::TauA);

/// Scores one LDR rendition against its HDR source on one channel.
using MetricFn = std::function<double(const HdrImage&, const LdrImage&, ChannelId)>;

/// Correlation results of one HDR set. `srcc`/`krcc` are NaN when the set
/// was degenerate (constant scores) or skipped; `entry_errors` lists
/// per-file failures as "path: reason" strings.
struct SetResult {
    std::string hdr_id;
    double srcc = 0.0;
    double krcc = 0.0;
    int n = 0; // entries actually scored
    bool skipped = false;
    std::vector<std::string> entry_errors;
};

/// Min / median / average / std over the per-set values of one coefficient.
struct AggregateStats {
    double min = 0.0;
    double median = 0.0;
    double average = 0.0;
    double std = 0.0;
};

struct CorrelationReport {
    std::vector<SetResult> per_set; // ordered by hdr_id
    AggregateStats srcc_agg;
    AggregateStats krcc_agg;
};

/// Scores every manifest entry with `metric`, correlates scores against
/// negated subjective ranks per set (so a perfect metric yields +1), and
/// aggregates across sets. Per-file load or scoring errors are collected on
/// the set; a set with fewer than 3 scoreable entries is skipped. Aggregates
/// cover sets with finite coefficients; they are NaN when no set qualifies.
CorrelationReport evaluate(const RankManifest& manifest, const MetricFn& metric, ChannelId c);

/// Serializes as {per_set:[{hdr_id,srcc,krcc,n}], aggregates:{srcc:{min,
/// median,average,std}, krcc:{...}}}. NaN renders as null; rows that
/// collected errors carry an additional "errors" array.
std::string report_to_json(const CorrelationReport& report);

/// Aligned-column table with one row per set plus aggregate rows.
std::string report_to_text(const CorrelationReport& report);

} // namespace fsitm
