#include "churnscope/report.hpp"

#include <algorithm>
#include <array>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "churnscope/java_parser.hpp"
#include "churnscope/text_util.hpp"

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace churnscope {

std::vector<int64_t> window_histogram(const MethodStats& stats, const ReportWindow& window) {
    std::vector<int64_t> hist(static_cast<size_t>(window.days), 0);
    for (const auto& [day, count] : stats.daily) {
        if (window.contains(day)) hist[static_cast<size_t>(day - window.start_day)] += count;
    }
    return hist;
}

int64_t window_total(const MethodStats& stats, const ReportWindow& window) {
    int64_t total = 0;
    for (const auto& [day, count] : stats.daily)
        if (window.contains(day)) total += count;
    return total;
}

std::string format_label(int64_t total, int64_t days) {
    return std::to_string(total) + " changes in last " + std::to_string(days) + " days";
}

std::string render_sparkline(const std::vector<int64_t>& histogram) {
    int64_t max = 0;
    for (int64_t v : histogram) max = std::max(max, v);

    std::string out = "[";
    for (int64_t v : histogram) {
        if (v <= 0) {
            out += "\xC2\xB7";  // U+00B7 middle dot: a visible zero
        } else {
            // eighth blocks U+2581..U+2588, level = ceil(8v/max)
            int level = static_cast<int>((v * 8 + max - 1) / max);
            out += '\xE2';
            out += '\x96';
            out += static_cast<char>(0x80 + level);
        }
    }
    out += ']';
    return out;
}

AnnotateResult annotate_file(const std::string& source, const std::string& file_path,
                             const std::vector<MethodStats>& stats, const ReportWindow& window) {
    AnnotateResult result;
    ParseResult parsed = extract_methods(source, file_path);
    if (parsed.degraded) {
        result.text = source;
        result.degraded = true;
        return result;
    }

    std::map<std::string, const MethodStats*> by_id;
    for (const auto& s : stats) by_id[s.identity.canonical()] = &s;

    // Byte offsets where each 1-based line starts, so insertion preserves
    // the original bytes (line endings included) exactly.
    std::vector<size_t> line_starts = {0};
    for (size_t i = 0; i < source.size(); ++i)
        if (source[i] == '\n') line_starts.push_back(i + 1);

    auto line_indent = [&](int line) -> std::string {
        if (line < 1 || static_cast<size_t>(line) > line_starts.size()) return "";
        size_t begin = line_starts[static_cast<size_t>(line - 1)];
        size_t i = begin;
        while (i < source.size() && (source[i] == ' ' || source[i] == '\t')) ++i;
        return source.substr(begin, i - begin);
    };

    // Insertions keyed by anchor line, in method source order.
    std::map<int, std::vector<std::string>> inserts;
    for (const MethodDecl& m : parsed.methods) {
        auto it = by_id.find(m.identity().canonical());
        if (it == by_id.end()) continue;
        int64_t total = window_total(*it->second, window);
        if (total <= 0) continue;

        Annotation ann;
        ann.file_path = file_path;
        ann.anchor_line = m.start_line;
        ann.label = format_label(total, window.days);
        ann.histogram = window_histogram(*it->second, window);
        inserts[m.start_line].push_back(line_indent(m.start_line) + "// " + ann.label + " " +
                                        render_sparkline(ann.histogram) + "\n");
        result.annotations.push_back(std::move(ann));
    }

    if (inserts.empty()) {
        result.text = source;  // byte-identical passthrough
        return result;
    }

    std::string out;
    out.reserve(source.size() + inserts.size() * 64);
    size_t consumed = 0;
    for (const auto& [line, additions] : inserts) {
        size_t offset = line_starts[static_cast<size_t>(line - 1)];
        out.append(source, consumed, offset - consumed);
        for (const std::string& a : additions) out += a;
        consumed = offset;
    }
    out.append(source, consumed, source.size() - consumed);
    result.text = std::move(out);
    return result;
}

namespace {

std::string identity_display(const MethodIdentity& id) {
    std::string s = id.qualified_name;
    s += '(';
    for (size_t i = 0; i < id.param_types.size(); ++i) {
        if (i) s += ',';
        s += id.param_types[i];
    }
    s += ')';
    return s;
}

std::string location_display(const MethodIdentity& id, const LineResolver& resolve) {
    int line = resolve ? resolve(id) : 0;
    if (line > 0) return id.file_path + ":" + std::to_string(line);
    return id.file_path;
}

}  // namespace

std::string render_hotspots(const std::vector<MethodStats>& ranked, const LineResolver& resolve,
                            const ReportWindow& window) {
    std::ostringstream out;
    out << "Top methods by changes in last " << window.days << " days\n\n";

    std::vector<std::array<std::string, 4>> rows;
    rows.push_back({"rank", "changes", "method", "location"});
    for (size_t i = 0; i < ranked.size(); ++i) {
        rows.push_back({std::to_string(i + 1), std::to_string(window_total(ranked[i], window)),
                        identity_display(ranked[i].identity),
                        location_display(ranked[i].identity, resolve)});
    }

    size_t widths[4] = {0, 0, 0, 0};
    for (const auto& r : rows)
        for (int c = 0; c < 4; ++c) widths[c] = std::max(widths[c], r[c].size());

    for (size_t ri = 0; ri < rows.size(); ++ri) {
        const auto& r = rows[ri];
        // right-align the numeric columns, left-align the rest
        for (int c = 0; c < 4; ++c) {
            if (c) out << "  ";
            if (c < 2) out << std::string(widths[c] - r[c].size(), ' ') << r[c];
            else if (c == 2) out << r[c] << std::string(widths[c] - r[c].size(), ' ');
            else out << r[c];
        }
        out << "\n";
        if (ri == 0) {
            for (int c = 0; c < 4; ++c) {
                if (c) out << "  ";
                out << std::string(widths[c], '-');
            }
            out << "\n";
        }
    }
    return out.str();
}

std::string render_json(const std::vector<MethodStats>& stats, const LineResolver& resolve,
                        const ReportWindow& window) {
    std::vector<const MethodStats*> ordered;
    ordered.reserve(stats.size());
    for (const auto& s : stats) ordered.push_back(&s);
    std::sort(ordered.begin(), ordered.end(), [](const MethodStats* a, const MethodStats* b) {
        return a->identity.canonical() < b->identity.canonical();
    });

    ordered_json doc;
    doc["window_days"] = window.days;
    doc["generated_at"] = iso8601_from_unix(window.end_time);
    doc["methods"] = ordered_json::array();
    for (const MethodStats* s : ordered) {
        int64_t total = window_total(*s, window);
        if (total <= 0) continue;
        ordered_json m;
        m["id"] = s->identity.canonical();
        m["file"] = s->identity.file_path;
        m["line"] = resolve ? resolve(s->identity) : 0;
        m["total"] = total;
        m["daily"] = window_histogram(*s, window);
        doc["methods"].push_back(std::move(m));
    }
    return doc.dump(2) + "\n";
}

JsonImport parse_json_report(const std::string& text) {
    ordered_json doc = ordered_json::parse(text);
    JsonImport imported;
    imported.window_days = doc.at("window_days").get<int64_t>();
    imported.generated_at = doc.at("generated_at").get<std::string>();

    auto end_day = day_number_from_string(imported.generated_at.substr(0, 10));
    if (!end_day) throw IoError("bad generated_at in report: " + imported.generated_at);
    int64_t start_day = *end_day - (imported.window_days - 1);

    for (const auto& m : doc.at("methods")) {
        auto identity = identity_from_canonical(m.at("id").get<std::string>());
        if (!identity) throw IoError("bad identity in report: " + m.at("id").get<std::string>());
        MethodStats stats;
        stats.identity = *identity;
        const auto& daily = m.at("daily");
        for (size_t i = 0; i < daily.size(); ++i) {
            int64_t count = daily[i].get<int64_t>();
            if (count > 0) stats.daily[start_day + static_cast<int64_t>(i)] = count;
            stats.total_changes += count;
        }
        imported.methods.push_back(std::move(stats));
    }
    return imported;
}

namespace {

std::string html_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&#39;"; break;
            default: out += c;
        }
    }
    return out;
}

constexpr const char* kHtmlStyle = R"(
  body { font-family: system-ui, sans-serif; margin: 2rem; color: #222; }
  table { border-collapse: collapse; }
  th, td { padding: 0.3rem 0.8rem; border-bottom: 1px solid #ccc; text-align: left; }
  th { background: #f0f0f0; }
  td.num { text-align: right; }
  .chart { margin: 0.5rem 0 2rem; }
  .chart rect { fill: #4878b0; }
  .chart text { font-size: 9px; fill: #555; }
  h2 { margin-top: 2rem; font-size: 1.05rem; font-family: monospace; }
  footer { margin-top: 3rem; color: #888; font-size: 0.85rem; }
)";

void write_file_or_throw(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot write " + path);
    f << content;
    if (!f) throw IoError("write failed for " + path);
}

// One SVG bar chart for a method's in-window histogram. Bars carry
// data-day/data-count attributes so the values are machine-checkable.
std::string svg_chart(const std::vector<int64_t>& hist, const ReportWindow& window) {
    const int bar_w = 14, gap = 2, chart_h = 100, label_h = 14;
    int64_t max = 1;
    for (int64_t v : hist) max = std::max(max, v);

    std::ostringstream svg;
    int width = static_cast<int>(hist.size()) * (bar_w + gap) + gap;
    svg << "<svg class=\"chart\" width=\"" << width << "\" height=\"" << (chart_h + label_h)
        << "\" role=\"img\">\n";
    for (size_t i = 0; i < hist.size(); ++i) {
        int64_t day = window.start_day + static_cast<int64_t>(i);
        std::string day_str = day_string_from_day_number(day);
        int h = static_cast<int>(hist[i] * chart_h / max);
        if (hist[i] > 0 && h == 0) h = 1;
        int x = gap + static_cast<int>(i) * (bar_w + gap);
        svg << "  <rect x=\"" << x << "\" y=\"" << (chart_h - h) << "\" width=\"" << bar_w
            << "\" height=\"" << h << "\" data-day=\"" << day_str << "\" data-count=\""
            << hist[i] << "\"><title>" << day_str << ": " << hist[i] << "</title></rect>\n";
        if (i == 0 || i + 1 == hist.size()) {
            svg << "  <text x=\"" << x << "\" y=\"" << (chart_h + label_h - 3) << "\">"
                << day_str.substr(5) << "</text>\n";
        }
    }
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace

void render_html(const std::vector<MethodStats>& stats, const LineResolver& resolve,
                 const ReportWindow& window, const std::string& out_dir) {
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create " + out_dir + ": " + ec.message());

    // Group in-window stats per file; files get stable page numbers.
    std::map<std::string, std::vector<const MethodStats*>> by_file;
    for (const auto& s : stats) {
        if (window_total(s, window) > 0) by_file[s.identity.file_path].push_back(&s);
    }
    std::map<std::string, std::string> page_of;
    int page_no = 0;
    for (const auto& [file, _] : by_file)
        page_of[file] = "file-" + std::to_string(page_no++) + ".html";

    std::string generated = iso8601_from_unix(window.end_time);
    auto page_head = [&](const std::string& title) {
        std::string h = "<!doctype html>\n<html lang=\"en\">\n<head>\n<meta charset=\"utf-8\">\n";
        h += "<title>" + html_escape(title) + "</title>\n<style>" + std::string(kHtmlStyle) +
             "</style>\n</head>\n<body>\n";
        return h;
    };
    auto page_foot = [&]() {
        return "<footer>window: " + std::to_string(window.days) + " days, generated at " +
               generated + "</footer>\n</body>\n</html>\n";
    };

    // Index: hotspot table, linked to the per-file pages.
    std::vector<const MethodStats*> ranked;
    for (const auto& s : stats)
        if (window_total(s, window) > 0) ranked.push_back(&s);
    std::sort(ranked.begin(), ranked.end(), [&](const MethodStats* a, const MethodStats* b) {
        int64_t ta = window_total(*a, window), tb = window_total(*b, window);
        if (ta != tb) return ta > tb;
        return a->identity.canonical() < b->identity.canonical();
    });

    std::string index = page_head("method change frequency");
    index += "<h1>Most frequently changed methods</h1>\n<table>\n";
    index += "<tr><th>rank</th><th>changes</th><th>method</th><th>location</th></tr>\n";
    for (size_t i = 0; i < ranked.size(); ++i) {
        const MethodIdentity& id = ranked[i]->identity;
        index += "<tr><td class=\"num\">" + std::to_string(i + 1) + "</td>";
        index += "<td class=\"num\">" + std::to_string(window_total(*ranked[i], window)) + "</td>";
        index += "<td><a href=\"" + page_of[id.file_path] + "\">" +
                 html_escape(identity_display(id)) + "</a></td>";
        index += "<td>" + html_escape(location_display(id, resolve)) + "</td></tr>\n";
    }
    index += "</table>\n" + page_foot();
    write_file_or_throw(out_dir + "/index.html", index);

    for (const auto& [file, methods] : by_file) {
        std::string page = page_head(file);
        page += "<h1>" + html_escape(file) + "</h1>\n<p><a href=\"index.html\">back to index</a></p>\n";
        std::vector<const MethodStats*> ordered = methods;
        std::sort(ordered.begin(), ordered.end(), [](const MethodStats* a, const MethodStats* b) {
            return a->identity.canonical() < b->identity.canonical();
        });
        for (const MethodStats* s : ordered) {
            page += "<h2>" + html_escape(identity_display(s->identity)) + "</h2>\n";
            page += "<p>" + format_label(window_total(*s, window), window.days) + "</p>\n";
            page += svg_chart(window_histogram(*s, window), window);
        }
        page += page_foot();
        write_file_or_throw(out_dir + "/" + page_of[file], page);
    }
}

}  // namespace churnscope
