// churnscope: mines a Git repository's history and reports how often each
// Java method changed inside a time window, keeping method identity stable
// across renames, moves, extractions, and inlines.

#include <cstdio>
#include <cstring>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "churnscope/pipeline.hpp"
#include "churnscope/text_util.hpp"

using namespace churnscope;

namespace {

constexpr const char* kUsage = R"(churnscope: track how often each Java method changes

usage: churnscope <command> [options]

commands:
  scan            process new commits in the window, update the database
  annotate FILE   print FILE with change labels above its methods
  hotspots        print the most frequently changed methods
  export-json     write the window's statistics as JSON
  export-html     write a static HTML report
  prune           drop statistics older than the window

options:
  --repo PATH           repository to analyze (default: .)
  --days N              window length in days (default: 7)
  --db PATH             database file (default: <repo>/.churnscope/stats.db)
  --top N               hotspot list size (default: 10)
  --until WHEN          window end, unix seconds or YYYY-MM-DD (default: now)
  --out PATH            output file (export-json) or directory (export-html)
  --format FMT          hotspots output: text or json (default: text)
  --rename-threshold R  body similarity for rename detection (default: 0.75)
  --move-threshold R    body similarity for move detection (default: 0.60)
  --containment R       token containment for extract/inline (default: 0.50)
  --no-count-renames    do not count a rename/move as a change
  --rebuild             discard the database and re-scan (with scan)
  -h, --help            show this help

exit codes: 0 ok, 1 usage error, 2 no repository, 3 database corrupt,
            4 repository or output error
)";

enum class Command { Scan, Annotate, Hotspots, ExportJson, ExportHtml, Prune };

struct CliOptions {
    Command command = Command::Scan;
    std::string annotate_target;
    RunConfig run;
    std::string out_path;
    std::string format = "text";
};

int usage_error(const std::string& message) {
    std::cerr << "churnscope: " << message << "\n";
    std::cerr << "try 'churnscope --help'\n";
    return 1;
}

bool parse_int(const std::string& text, int64_t& out) {
    try {
        size_t used = 0;
        out = std::stoll(text, &used);
        return used == text.size();
    } catch (...) {
        return false;
    }
}

bool parse_real(const std::string& text, double& out) {
    try {
        size_t used = 0;
        out = std::stod(text, &used);
        return used == text.size();
    } catch (...) {
        return false;
    }
}

// --until accepts a raw unix timestamp or a calendar date; a date means
// "through the end of that day".
bool parse_until(const std::string& text, int64_t& out) {
    if (auto day = day_number_from_string(text)) {
        out = (*day + 1) * 86400 - 1;
        return true;
    }
    return parse_int(text, out);
}

int run_scan(const CliOptions& opts, RepoHandle& repo, StatsStore& store) {
    ProcessSummary s = process_window(opts.run, repo, store);
    std::cout << "scanned " << repo.root() << "\n";
    std::cout << "commits: " << s.commits_seen << " in window, " << s.commits_processed
              << " processed, " << s.commits_skipped_cached << " already done\n";
    std::cout << "files:   " << s.files_parsed << " parsed";
    if (s.parse_failures) std::cout << ", " << s.parse_failures << " skipped (parse errors)";
    std::cout << "\n";
    if (!s.events_by_kind.empty()) {
        std::cout << "events: ";
        bool first = true;
        for (const auto& [kind, count] : s.events_by_kind) {
            std::cout << (first ? " " : ", ") << count << " " << kind;
            first = false;
        }
        std::cout << "\n";
    }
    return 0;
}

int run_annotate(const CliOptions& opts, RepoHandle& repo, StatsStore& store) {
    auto rel = repo_relative_path(repo, opts.annotate_target);
    if (!rel) return usage_error("file is not inside the repository: " + opts.annotate_target);

    std::ifstream f(repo.root() + "/" + *rel, std::ios::binary);
    if (!f) throw IoError("cannot read " + opts.annotate_target);
    std::string source((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());

    ReportWindow window = ReportWindow::make(opts.run.days, effective_end_time(opts.run));
    std::vector<MethodStats> stats = store.load_file_stats(*rel, window);
    AnnotateResult result = annotate_file(sanitize_utf8(source), *rel, stats, window);
    if (result.degraded)
        std::cerr << "churnscope: warning: " << *rel << " did not parse; emitted unannotated\n";
    std::cout << result.text;
    return 0;
}

int run_hotspots(const CliOptions& opts, RepoHandle& repo, StatsStore& store) {
    ReportWindow window = ReportWindow::make(opts.run.days, effective_end_time(opts.run));
    std::vector<MethodStats> ranked = store.top_hotspots(opts.run.top_n, window);
    LineResolver resolve = working_tree_resolver(repo);
    if (opts.format == "json") std::cout << render_json(ranked, resolve, window);
    else std::cout << render_hotspots(ranked, resolve, window);
    return 0;
}

int run_export_json(const CliOptions& opts, RepoHandle& repo, StatsStore& store) {
    ReportWindow window = ReportWindow::make(opts.run.days, effective_end_time(opts.run));
    std::string doc = render_json(store.all_stats(window), working_tree_resolver(repo), window);
    if (opts.out_path.empty()) {
        std::cout << doc;
    } else {
        std::ofstream out(opts.out_path, std::ios::binary);
        if (!out) throw IoError("cannot write " + opts.out_path);
        out << doc;
    }
    return 0;
}

int run_export_html(const CliOptions& opts, RepoHandle& repo, StatsStore& store) {
    ReportWindow window = ReportWindow::make(opts.run.days, effective_end_time(opts.run));
    std::string dir = opts.out_path.empty() ? "churnscope-report" : opts.out_path;
    render_html(store.all_stats(window), working_tree_resolver(repo), window, dir);
    std::cout << "wrote report to " << dir << "\n";
    return 0;
}

int run_prune(const CliOptions& opts, RepoHandle&, StatsStore& store) {
    ReportWindow window = ReportWindow::make(opts.run.days, effective_end_time(opts.run));
    StatsStore::PruneResult r = store.prune(window);
    std::cout << "pruned " << r.daily_rows_deleted << " day rows, dropped " << r.methods_deleted
              << " methods with no remaining changes\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    if (args.empty()) return usage_error("missing command");

    CliOptions opts;
    const std::string& cmd = args[0];
    if (cmd == "-h" || cmd == "--help") {
        std::cout << kUsage;
        return 0;
    }
    if (cmd == "scan") opts.command = Command::Scan;
    else if (cmd == "annotate") opts.command = Command::Annotate;
    else if (cmd == "hotspots") opts.command = Command::Hotspots;
    else if (cmd == "export-json") opts.command = Command::ExportJson;
    else if (cmd == "export-html") opts.command = Command::ExportHtml;
    else if (cmd == "prune") opts.command = Command::Prune;
    else return usage_error("unknown command: " + cmd);

    for (size_t i = 1; i < args.size(); ++i) {
        const std::string& arg = args[i];
        auto value = [&](const char* flag) -> const std::string* {
            if (i + 1 >= args.size()) return nullptr;
            (void)flag;
            return &args[++i];
        };

        if (arg == "-h" || arg == "--help") {
            std::cout << kUsage;
            return 0;
        } else if (arg == "--repo") {
            const std::string* v = value("--repo");
            if (!v) return usage_error("--repo needs a path");
            opts.run.repo_path = *v;
        } else if (arg == "--days") {
            const std::string* v = value("--days");
            int64_t n = 0;
            if (!v || !parse_int(*v, n) || n < 1) return usage_error("--days needs a positive integer");
            opts.run.days = n;
        } else if (arg == "--db") {
            const std::string* v = value("--db");
            if (!v) return usage_error("--db needs a path");
            opts.run.db_path = *v;
        } else if (arg == "--top") {
            const std::string* v = value("--top");
            int64_t n = 0;
            if (!v || !parse_int(*v, n) || n < 1) return usage_error("--top needs a positive integer");
            opts.run.top_n = static_cast<int>(n);
        } else if (arg == "--until") {
            const std::string* v = value("--until");
            int64_t t = 0;
            if (!v || !parse_until(*v, t) || t <= 0)
                return usage_error("--until needs unix seconds or YYYY-MM-DD");
            opts.run.end_time = t;
        } else if (arg == "--out") {
            const std::string* v = value("--out");
            if (!v) return usage_error("--out needs a path");
            opts.out_path = *v;
        } else if (arg == "--format") {
            const std::string* v = value("--format");
            if (!v || (*v != "text" && *v != "json")) return usage_error("--format needs text or json");
            opts.format = *v;
        } else if (arg == "--rename-threshold") {
            const std::string* v = value("--rename-threshold");
            double r = 0;
            if (!v || !parse_real(*v, r) || r <= 0 || r > 1)
                return usage_error("--rename-threshold needs a value in (0,1]");
            opts.run.detector.rename_threshold = r;
        } else if (arg == "--move-threshold") {
            const std::string* v = value("--move-threshold");
            double r = 0;
            if (!v || !parse_real(*v, r) || r <= 0 || r > 1)
                return usage_error("--move-threshold needs a value in (0,1]");
            opts.run.detector.move_threshold = r;
        } else if (arg == "--containment") {
            const std::string* v = value("--containment");
            double r = 0;
            if (!v || !parse_real(*v, r) || r <= 0 || r > 1)
                return usage_error("--containment needs a value in (0,1]");
            opts.run.detector.containment_threshold = r;
        } else if (arg == "--no-count-renames") {
            opts.run.detector.count_renames = false;
        } else if (arg == "--rebuild") {
            opts.run.rebuild = true;
        } else if (opts.command == Command::Annotate && opts.annotate_target.empty() &&
                   !arg.empty() && arg[0] != '-') {
            opts.annotate_target = arg;
        } else {
            return usage_error("unknown option: " + arg);
        }
    }
    if (opts.command == Command::Annotate && opts.annotate_target.empty())
        return usage_error("annotate needs a file argument");

    try {
        RepoHandle repo = RepoHandle::open(opts.run.repo_path);
        StatsStore store = StatsStore::open(effective_db_path(opts.run, repo));
        switch (opts.command) {
            case Command::Scan: return run_scan(opts, repo, store);
            case Command::Annotate: return run_annotate(opts, repo, store);
            case Command::Hotspots: return run_hotspots(opts, repo, store);
            case Command::ExportJson: return run_export_json(opts, repo, store);
            case Command::ExportHtml: return run_export_html(opts, repo, store);
            case Command::Prune: return run_prune(opts, repo, store);
        }
        return 0;
    } catch (const NoVcsRoot& e) {
        std::cerr << "churnscope: warning: " << e.what() << "\n";
        return 2;
    } catch (const StoreCorrupt& e) {
        std::cerr << "churnscope: database error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "churnscope: error: " << e.what() << "\n";
        return 4;
    }
}
