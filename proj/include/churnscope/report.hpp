#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "churnscope/change_model.hpp"

namespace churnscope {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// One inserted source annotation: where it anchors and what it says.
struct Annotation {
    std::string file_path;
    int anchor_line = 0;  // 1-based line of the method signature
    std::string label;    // "N changes in last D days"
    std::vector<int64_t> histogram;  // per window day, oldest first, zero-filled
};

/// Maps an identity to its current 1-based line in the working tree, or 0
/// when the method no longer exists there. Reports stay renderable even
/// for methods deleted since their last change.
using LineResolver = std::function<int(const MethodIdentity&)>;

/// In-window per-day counts, oldest day first, zero-filled to window.days.
std::vector<int64_t> window_histogram(const MethodStats& stats, const ReportWindow& window);
int64_t window_total(const MethodStats& stats, const ReportWindow& window);

std::string format_label(int64_t total, int64_t days);

/// One cell per day: '·' for zero, eighth-block glyphs scaled against the
/// row's own maximum otherwise. Wrapped in brackets.
std::string render_sparkline(const std::vector<int64_t>& histogram);

struct AnnotateResult {
    std::string text;
    std::vector<Annotation> annotations;
    bool degraded = false;  // source did not parse; text is the input verbatim
};

/// Inserts a comment line with the label and sparkline above each method
/// that has in-window changes. Original bytes pass through untouched;
/// methods without recorded changes get nothing.
AnnotateResult annotate_file(const std::string& source, const std::string& file_path,
                             const std::vector<MethodStats>& stats, const ReportWindow& window);

/// Plain-text table: rank, in-window total, identity, file:line.
std::string render_hotspots(const std::vector<MethodStats>& ranked, const LineResolver& resolve,
                            const ReportWindow& window);

/// Deterministic JSON document (serialized, newline-terminated):
/// { "window_days", "generated_at", "methods": [ {id, file, line, total,
/// daily[window_days]} ] }, methods ordered by id.
std::string render_json(const std::vector<MethodStats>& stats, const LineResolver& resolve,
                        const ReportWindow& window);

/// Parses a render_json document back into stats + window (round-trip
/// support and a convenience for external consumers).
struct JsonImport {
    int64_t window_days = 0;
    std::string generated_at;
    std::vector<MethodStats> methods;
};
JsonImport parse_json_report(const std::string& text);

/// Writes a static self-contained report: index.html with the hotspot
/// table plus one page per file with inline SVG bar charts. No network
/// resources. Throws IoError when the directory is not writable.
void render_html(const std::vector<MethodStats>& stats, const LineResolver& resolve,
                 const ReportWindow& window, const std::string& out_dir);

}  // namespace churnscope
