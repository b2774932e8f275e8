#include <gtest/gtest.h>

#include <filesystem>

#include "churnscope/report.hpp"
#include "churnscope/text_util.hpp"
#include "testutil.hpp"

namespace tu = churnscope::testutil;
namespace fs = std::filesystem;

namespace {

// Noon on an absolute UTC day number.
int64_t ts(int64_t day) { return day * 86400 + 43200; }

tu::RunResult cli(const std::string& args) {
    return tu::run(tu::shell_quote(tu::churnscope_bin()) + " " + args);
}

std::string q(const std::string& s) { return tu::shell_quote(s); }

// A repo with one method edited once inside the window.
tu::GitFixture simple_repo(const std::string& tag) {
    tu::GitFixture g(tag);
    g.write("A.java",
            "class A {\n"
            "    void f() { base(); }\n"
            "    void g() { other(); }\n"
            "}\n");
    g.commit("add", ts(20000));
    g.write("A.java",
            "class A {\n"
            "    void f() { base(); tweak(); }\n"
            "    void g() { other(); }\n"
            "}\n");
    g.commit("edit f", ts(20002));
    return g;
}

std::string scan_args(const tu::GitFixture& g, int64_t until_day, const std::string& extra = "") {
    return "scan --repo " + q(g.root()) + " --days 30 --until " +
           std::to_string(ts(until_day)) + (extra.empty() ? "" : " " + extra);
}

}  // namespace

TEST(CliHelp, PrintsUsageAndExitsOk) {
    tu::RunResult r = cli("--help");
    EXPECT_EQ(r.exit_code, 0);
    EXPECT_NE(r.output.find("usage: churnscope"), std::string::npos);
    for (const char* cmd : {"scan", "annotate", "hotspots", "export-json", "export-html",
                            "prune"}) {
        EXPECT_NE(r.output.find(cmd), std::string::npos) << cmd;
    }
    EXPECT_NE(r.output.find("exit codes"), std::string::npos);

    tu::RunResult sub = cli("scan --help");
    EXPECT_EQ(sub.exit_code, 0);
    EXPECT_NE(sub.output.find("usage: churnscope"), std::string::npos);
}

TEST(CliUsage, BadInvocationsExitOne) {
    EXPECT_EQ(cli("").exit_code, 1);

    tu::RunResult unknown = cli("frobnicate");
    EXPECT_EQ(unknown.exit_code, 1);
    EXPECT_NE(unknown.output.find("unknown command: frobnicate"), std::string::npos);

    tu::RunResult option = cli("scan --bogus");
    EXPECT_EQ(option.exit_code, 1);
    EXPECT_NE(option.output.find("unknown option: --bogus"), std::string::npos);

    EXPECT_EQ(cli("scan --days 0").exit_code, 1);
    EXPECT_EQ(cli("scan --days x").exit_code, 1);
    EXPECT_EQ(cli("scan --days").exit_code, 1);
    EXPECT_EQ(cli("hotspots --top -3").exit_code, 1);
    EXPECT_EQ(cli("scan --until not-a-time").exit_code, 1);
    EXPECT_EQ(cli("hotspots --format xml").exit_code, 1);
    EXPECT_EQ(cli("scan --rename-threshold 1.5").exit_code, 1);
    EXPECT_EQ(cli("scan --containment 0").exit_code, 1);
    EXPECT_EQ(cli("annotate").exit_code, 1);
}

TEST(CliExitCodes, MissingRepositoryIsTwo) {
    tu::TempDir plain("cli-norepo");
    tu::RunResult r = cli("scan --repo " + q(plain.path()));
    EXPECT_EQ(r.exit_code, 2);
    EXPECT_NE(r.output.find("warning"), std::string::npos);
}

TEST(CliExitCodes, CorruptDatabaseIsThree) {
    tu::GitFixture g = simple_repo("cli-baddb");
    std::string db = g.root() + "/not-a-db";
    tu::write_file(db, "just some text\n");
    tu::RunResult r = cli(scan_args(g, 20004, "--db " + q(db)));
    EXPECT_EQ(r.exit_code, 3);
    EXPECT_NE(r.output.find("database error"), std::string::npos);
}

TEST(CliExitCodes, UnwritableOutputIsFour) {
    tu::GitFixture g = simple_repo("cli-badout");
    std::string blocker = g.root() + "/blocker.txt";
    tu::write_file(blocker, "a file, not a directory\n");
    tu::RunResult r = cli("export-json --repo " + q(g.root()) + " --out " +
                          q(blocker + "/nested/out.json"));
    EXPECT_EQ(r.exit_code, 4);
    EXPECT_NE(r.output.find("error"), std::string::npos);
}

TEST(CliAnnotate, RejectsFilesOutsideTheRepo) {
    tu::GitFixture g = simple_repo("cli-outside");
    tu::TempDir other("cli-otherdir");
    tu::write_file(other.path() + "/Foreign.java", "class Foreign {}\n");
    tu::RunResult r = cli("annotate " + q(other.path() + "/Foreign.java") + " --repo " +
                          q(g.root()));
    EXPECT_EQ(r.exit_code, 1);
    EXPECT_NE(r.output.find("not inside the repository"), std::string::npos);
}

TEST(CliAnnotate, MissingFileIsARepositoryError) {
    tu::GitFixture g = simple_repo("cli-missingfile");
    tu::RunResult r = cli("annotate " + q(g.root() + "/NoSuch.java") + " --repo " + q(g.root()));
    EXPECT_EQ(r.exit_code, 4);
    EXPECT_NE(r.output.find("error"), std::string::npos);
}

TEST(CliScan, PrintsCountsAndCachesWork) {
    tu::GitFixture g = simple_repo("cli-scan");
    tu::RunResult first = cli(scan_args(g, 20004));
    ASSERT_EQ(first.exit_code, 0) << first.output;
    EXPECT_NE(first.output.find("commits: 2 in window, 2 processed, 0 already done"),
              std::string::npos)
        << first.output;
    EXPECT_NE(first.output.find("files:   2 parsed"), std::string::npos);

    tu::RunResult second = cli(scan_args(g, 20004));
    ASSERT_EQ(second.exit_code, 0);
    EXPECT_NE(second.output.find("commits: 2 in window, 0 processed, 2 already done"),
              std::string::npos)
        << second.output;
}

TEST(CliScan, ReportsDetectedEvents) {
    tu::GitFixture g("cli-events");
    g.write("A.java",
            "class A {\n"
            "    void oldName() { total += amount; log(total); }\n"
            "    void anchor() { keep(); }\n"
            "}\n");
    g.commit("add", ts(20000));
    g.write("A.java",
            "class A {\n"
            "    void newName() { total += amount; log(total); }\n"
            "    void anchor() { keep(); }\n"
            "}\n");
    g.commit("rename", ts(20001));

    tu::RunResult r = cli(scan_args(g, 20004));
    ASSERT_EQ(r.exit_code, 0) << r.output;
    EXPECT_NE(r.output.find("events:  1 rename"), std::string::npos) << r.output;
}

TEST(CliAnnotate, EmitsLabelsAfterAScan) {
    tu::GitFixture g = simple_repo("cli-annotate");
    ASSERT_EQ(cli(scan_args(g, 20004)).exit_code, 0);

    tu::RunResult r = cli("annotate " + q(g.root() + "/A.java") + " --repo " + q(g.root()) +
                          " --days 30 --until " + std::to_string(ts(20004)));
    ASSERT_EQ(r.exit_code, 0) << r.output;
    EXPECT_NE(r.output.find("// 1 changes in last 30 days ["), std::string::npos) << r.output;
    EXPECT_NE(r.output.find("void f() { base(); tweak(); }"), std::string::npos);
    EXPECT_NE(r.output.find("void g() { other(); }"), std::string::npos);
}

TEST(CliHotspots, TextTableAndJsonAgree) {
    tu::GitFixture g = simple_repo("cli-hotspots");
    ASSERT_EQ(cli(scan_args(g, 20004)).exit_code, 0);
    std::string common = " --repo " + q(g.root()) + " --days 30 --until " +
                         std::to_string(ts(20004));

    tu::RunResult text = cli("hotspots" + common);
    ASSERT_EQ(text.exit_code, 0);
    EXPECT_NE(text.output.find("Top methods by changes in last 30 days"), std::string::npos);
    EXPECT_NE(text.output.find("A#f()"), std::string::npos);
    EXPECT_NE(text.output.find("A.java:2"), std::string::npos)
        << "the hotspot should resolve to its current line\n"
        << text.output;

    tu::RunResult json = cli("hotspots --format json" + common);
    ASSERT_EQ(json.exit_code, 0);
    churnscope::JsonImport imported = churnscope::parse_json_report(json.output);
    ASSERT_EQ(imported.methods.size(), 1u);
    EXPECT_EQ(imported.methods[0].identity.canonical(), "A.java::A#f()");
    EXPECT_EQ(imported.methods[0].total_changes, 1);
    EXPECT_EQ(imported.window_days, 30);
}

TEST(CliHotspots, TopLimitsTheRowCount) {
    tu::GitFixture g("cli-top");
    g.write("A.java",
            "class A {\n"
            "    void a() { s1(); }\n"
            "    void b() { s2(); }\n"
            "    void c() { s3(); }\n"
            "}\n");
    g.commit("add", ts(20000));
    g.write("A.java",
            "class A {\n"
            "    void a() { s1(); x(); }\n"
            "    void b() { s2(); y(); }\n"
            "    void c() { s3(); z(); }\n"
            "}\n");
    g.commit("edit all", ts(20001));
    ASSERT_EQ(cli(scan_args(g, 20004)).exit_code, 0);

    tu::RunResult r = cli("hotspots --format json --top 2 --repo " + q(g.root()) +
                          " --days 30 --until " + std::to_string(ts(20004)));
    ASSERT_EQ(r.exit_code, 0);
    EXPECT_EQ(churnscope::parse_json_report(r.output).methods.size(), 2u);
}

TEST(CliExport, JsonDefaultsToASevenDayWindow) {
    tu::GitFixture g = simple_repo("cli-defaultdays");
    tu::RunResult r = cli("export-json --repo " + q(g.root()));
    ASSERT_EQ(r.exit_code, 0) << r.output;
    EXPECT_EQ(churnscope::parse_json_report(r.output).window_days, 7);
}

TEST(CliExport, OutFileMatchesStdout) {
    tu::GitFixture g = simple_repo("cli-outfile");
    ASSERT_EQ(cli(scan_args(g, 20004)).exit_code, 0);
    std::string common = " --repo " + q(g.root()) + " --days 30 --until " +
                         std::to_string(ts(20004));

    tu::RunResult to_stdout = cli("export-json" + common);
    ASSERT_EQ(to_stdout.exit_code, 0);

    std::string out_path = g.root() + "/export.json";
    tu::RunResult to_file = cli("export-json" + common + " --out " + q(out_path));
    ASSERT_EQ(to_file.exit_code, 0);
    EXPECT_EQ(tu::read_file(out_path), to_stdout.output);

    churnscope::JsonImport imported = churnscope::parse_json_report(to_stdout.output);
    ASSERT_EQ(imported.methods.size(), 1u);
    EXPECT_EQ(imported.methods[0].identity.canonical(), "A.java::A#f()");
}

TEST(CliExport, HtmlWritesAReportDirectory) {
    tu::GitFixture g = simple_repo("cli-html");
    ASSERT_EQ(cli(scan_args(g, 20004)).exit_code, 0);
    std::string out_dir = g.root() + "/report";
    tu::RunResult r = cli("export-html --repo " + q(g.root()) + " --days 30 --until " +
                          std::to_string(ts(20004)) + " --out " + q(out_dir));
    ASSERT_EQ(r.exit_code, 0) << r.output;
    EXPECT_NE(r.output.find("wrote report to"), std::string::npos);
    EXPECT_TRUE(fs::exists(out_dir + "/index.html"));
    EXPECT_TRUE(fs::exists(out_dir + "/file-0.html"));
}

TEST(CliUntil, DateFormMeansEndOfThatDay) {
    tu::GitFixture g = simple_repo("cli-until");
    ASSERT_EQ(cli(scan_args(g, 20004)).exit_code, 0);

    std::string date = churnscope::day_string_from_day_number(20004);
    int64_t last_second = (20004 + 1) * 86400 - 1;
    std::string base = "export-json --repo " + q(g.root()) + " --days 30 --until ";

    tu::RunResult by_date = cli(base + date);
    tu::RunResult by_seconds = cli(base + std::to_string(last_second));
    ASSERT_EQ(by_date.exit_code, 0);
    ASSERT_EQ(by_seconds.exit_code, 0);
    EXPECT_EQ(by_date.output, by_seconds.output);
}

TEST(CliPrune, DropsAgedRowsAndSaysSo) {
    tu::GitFixture g("cli-prune");
    g.write("A.java",
            "class A {\n"
            "    void old() { ancient(); }\n"
            "    void fresh() { current(); }\n"
            "}\n");
    g.commit("add", ts(20000));
    g.write("A.java",
            "class A {\n"
            "    void old() { ancient(); e1(); }\n"
            "    void fresh() { current(); }\n"
            "}\n");
    g.commit("edit old", ts(20001));
    g.write("A.java",
            "class A {\n"
            "    void old() { ancient(); e1(); e2(); }\n"
            "    void fresh() { current(); }\n"
            "}\n");
    g.commit("edit old again", ts(20002));
    g.write("A.java",
            "class A {\n"
            "    void old() { ancient(); e1(); e2(); }\n"
            "    void fresh() { current(); now(); }\n"
            "}\n");
    g.commit("edit fresh", ts(20009));

    ASSERT_EQ(cli(scan_args(g, 20010)).exit_code, 0);

    tu::RunResult r = cli("prune --repo " + q(g.root()) + " --days 7 --until " +
                          std::to_string(ts(20010)));
    ASSERT_EQ(r.exit_code, 0);
    EXPECT_NE(r.output.find("pruned 2 day rows, dropped 1 methods"), std::string::npos)
        << r.output;

    tu::RunResult after = cli("export-json --repo " + q(g.root()) + " --days 30 --until " +
                              std::to_string(ts(20010)));
    churnscope::JsonImport imported = churnscope::parse_json_report(after.output);
    ASSERT_EQ(imported.methods.size(), 1u);
    EXPECT_EQ(imported.methods[0].identity.canonical(), "A.java::A#fresh()");
}

TEST(CliDeterminism, IndependentScansExportIdenticalBytes) {
    tu::GitFixture g("cli-determinism");
    g.write("A.java",
            "class A {\n"
            "    void oldName() { total += amount; log(total); }\n"
            "    void busy() { step1(); }\n"
            "}\n");
    g.commit("add", ts(20000));
    g.write("A.java",
            "class A {\n"
            "    void oldName() { total += amount; log(total); }\n"
            "    void busy() { step1(); step2(); }\n"
            "}\n");
    g.commit("edit busy", ts(20001));
    g.write("A.java",
            "class A {\n"
            "    void newName() { total += amount; log(total); }\n"
            "    void busy() { step1(); step2(); step3(); }\n"
            "}\n");
    g.commit("rename and edit", ts(20002));

    std::string until = std::to_string(ts(20004));
    auto run_pass = [&](const std::string& db) {
        tu::RunResult s = cli("scan --repo " + q(g.root()) + " --days 30 --until " + until +
                              " --db " + q(db));
        EXPECT_EQ(s.exit_code, 0) << s.output;
        tu::RunResult e = cli("export-json --repo " + q(g.root()) + " --days 30 --until " +
                              until + " --db " + q(db));
        EXPECT_EQ(e.exit_code, 0) << e.output;
        return e.output;
    };

    std::string first = run_pass(g.root() + "/db1.sqlite");
    std::string second = run_pass(g.root() + "/db2.sqlite");
    EXPECT_EQ(first, second);
    EXPECT_NE(first.find("A.java::A#newName()"), std::string::npos) << first;
}
