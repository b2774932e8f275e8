#include "churnscope/change_model.hpp"

#include <gtest/gtest.h>

#include <random>

#include "testutil.hpp"

using namespace churnscope;

namespace {

MethodIdentity ident(const std::string& file, const std::string& qualified,
                     std::vector<std::string> params = {}) {
    return {file, qualified, std::move(params)};
}

const MethodIdentity kF = ident("A.java", "A#f");
const MethodIdentity kG = ident("A.java", "A#g");
const MethodIdentity kH = ident("A.java", "A#h");
const MethodIdentity kOther = ident("B.java", "B#m", {"int"});

RefactoringEvent rename_event(const MethodIdentity& from, const MethodIdentity& to) {
    return {RefactoringKind::RenameMethod, from, to, std::nullopt};
}

}  // namespace

TEST(Window, MakeComputesInclusiveDayRange) {
    // 2024-03-10 12:00:00 UTC is day 19792.
    ReportWindow w = ReportWindow::make(7, 19792 * 86400 + 43200);
    EXPECT_EQ(w.days, 7);
    EXPECT_EQ(w.end_day, 19792);
    EXPECT_EQ(w.start_day, 19786) << "seven days including the end day";
    EXPECT_TRUE(w.contains(19786));
    EXPECT_TRUE(w.contains(19792));
    EXPECT_FALSE(w.contains(19785));
    EXPECT_FALSE(w.contains(19793));
}

TEST(Window, SingleDayWindow) {
    ReportWindow w = ReportWindow::make(1, 86400 * 100);
    EXPECT_EQ(w.start_day, 100);
    EXPECT_EQ(w.end_day, 100);
    EXPECT_TRUE(w.contains(100));
    EXPECT_FALSE(w.contains(99));
    EXPECT_FALSE(w.contains(101));
}

TEST(Window, EndTimeAtMidnightBelongsToThatDay) {
    ReportWindow w = ReportWindow::make(30, 86400 * 200);
    EXPECT_EQ(w.end_day, 200);
    ReportWindow just_before = ReportWindow::make(30, 86400 * 200 - 1);
    EXPECT_EQ(just_before.end_day, 199);
}

TEST(Model, IncrementCreatesAndAccumulates) {
    ChangeModel m;
    EXPECT_EQ(m.find(kF), nullptr);

    m.increment(kF, 10, 1);
    const MethodStats* s = m.find(kF);
    ASSERT_NE(s, nullptr);
    EXPECT_EQ(s->identity, kF);
    EXPECT_EQ(s->total_changes, 1);
    ASSERT_EQ(s->daily.size(), 1u);
    EXPECT_EQ(s->daily.at(10), 1);

    m.increment(kF, 10, 1);
    m.increment(kF, 12, 3);
    s = m.find(kF);
    EXPECT_EQ(s->total_changes, 5);
    EXPECT_EQ(s->daily.at(10), 2);
    EXPECT_EQ(s->daily.at(12), 3);
}

TEST(Model, IncrementByZeroIsANoOp) {
    ChangeModel m;
    m.increment(kF, 10, 0);
    EXPECT_EQ(m.find(kF), nullptr);
    EXPECT_EQ(m.total_sum(), 0);
}

TEST(Model, RekeyMovesHistoryIntact) {
    ChangeModel m;
    m.increment(kF, 10, 2);
    m.increment(kF, 11, 1);

    m.rekey(kF, kG);
    EXPECT_EQ(m.find(kF), nullptr);
    const MethodStats* s = m.find(kG);
    ASSERT_NE(s, nullptr);
    EXPECT_EQ(s->identity, kG);
    EXPECT_EQ(s->total_changes, 3);
    EXPECT_EQ(s->daily.at(10), 2);
    EXPECT_EQ(s->daily.at(11), 1);
}

TEST(Model, RekeyMergesAdditivelyIntoExistingTarget) {
    ChangeModel m;
    m.increment(kF, 10, 2);
    m.increment(kG, 10, 3);
    m.increment(kG, 11, 1);

    m.rekey(kF, kG);
    const MethodStats* s = m.find(kG);
    ASSERT_NE(s, nullptr);
    EXPECT_EQ(s->total_changes, 6);
    EXPECT_EQ(s->daily.at(10), 5);
    EXPECT_EQ(s->daily.at(11), 1);
    EXPECT_EQ(m.find(kF), nullptr);
}

TEST(Model, RekeyOfMissingSourceIsANoOp) {
    ChangeModel m;
    m.increment(kG, 10, 1);
    m.rekey(kF, kG);
    EXPECT_EQ(m.find(kG)->total_changes, 1);
    m.rekey(kH, ident("C.java", "C#x"));
    EXPECT_EQ(m.total_sum(), 1);
}

TEST(Model, RekeyAcrossFilesMovesBuckets) {
    ChangeModel m;
    m.increment(kF, 10, 2);
    m.rekey(kF, kOther);
    EXPECT_TRUE(m.file_stats("A.java").empty());
    ASSERT_EQ(m.file_stats("B.java").size(), 1u);
    EXPECT_EQ(m.file_stats("B.java")[0].total_changes, 2);
}

TEST(Model, RemoveDropsOnlyTheTarget) {
    ChangeModel m;
    m.increment(kF, 10, 1);
    m.increment(kG, 10, 1);
    m.remove(kF);
    EXPECT_EQ(m.find(kF), nullptr);
    EXPECT_NE(m.find(kG), nullptr);
    m.remove(kF);  // second removal is harmless
    EXPECT_EQ(m.total_sum(), 1);
}

TEST(Model, AllStatsOrderedByCanonicalAcrossFiles) {
    ChangeModel m;
    m.increment(ident("z.java", "Z#a"), 1, 1);
    m.increment(ident("a.java", "A#z"), 1, 1);
    m.increment(ident("a.java", "A#b", {"int"}), 1, 1);

    auto all = m.all_stats();
    ASSERT_EQ(all.size(), 3u);
    EXPECT_EQ(all[0].identity.canonical(), "a.java::A#b(int)");
    EXPECT_EQ(all[1].identity.canonical(), "a.java::A#z()");
    EXPECT_EQ(all[2].identity.canonical(), "z.java::Z#a()");
}

TEST(Model, FileStatsSeesOnlyThatFile) {
    ChangeModel m;
    m.increment(kF, 10, 1);
    m.increment(kOther, 10, 4);
    ASSERT_EQ(m.file_stats("A.java").size(), 1u);
    EXPECT_EQ(m.file_stats("A.java")[0].identity, kF);
    EXPECT_TRUE(m.file_stats("missing.java").empty());
    EXPECT_EQ(m.total_sum(), 5);
}

TEST(ApplyEvents, EmptyEventListChangesNothing) {
    ChangeModel m;
    m.increment(kF, 10, 2);
    apply_refactorings(m, {}, 20, true);
    EXPECT_EQ(m.total_sum(), 2);
    EXPECT_EQ(m.find(kF)->total_changes, 2);
}

TEST(ApplyEvents, RenameKeepsAccumulatedTotal) {
    // A method changed four times and then renamed still reports four
    // lifetime changes under its new name (plus the rename itself when
    // renames count as changes).
    ChangeModel m;
    m.increment(kF, 10, 2);
    m.increment(kF, 11, 2);
    ASSERT_EQ(m.find(kF)->total_changes, 4);

    apply_refactorings(m, {rename_event(kF, kG)}, 12, /*count_renames=*/false);
    EXPECT_EQ(m.find(kF), nullptr);
    ASSERT_NE(m.find(kG), nullptr);
    EXPECT_EQ(m.find(kG)->total_changes, 4);
    EXPECT_EQ(m.find(kG)->daily.count(12), 0u);
}

TEST(ApplyEvents, RenameCountsAsAChangeWhenEnabled) {
    ChangeModel m;
    m.increment(kF, 10, 4);
    apply_refactorings(m, {rename_event(kF, kG)}, 12, /*count_renames=*/true);
    ASSERT_NE(m.find(kG), nullptr);
    EXPECT_EQ(m.find(kG)->total_changes, 5);
    EXPECT_EQ(m.find(kG)->daily.at(12), 1);
}

TEST(ApplyEvents, RenameOfUntrackedMethodStartsFresh) {
    ChangeModel m;
    apply_refactorings(m, {rename_event(kF, kG)}, 12, true);
    ASSERT_NE(m.find(kG), nullptr);
    EXPECT_EQ(m.find(kG)->total_changes, 1);

    ChangeModel quiet;
    apply_refactorings(quiet, {rename_event(kF, kG)}, 12, false);
    EXPECT_EQ(quiet.find(kG), nullptr);
}

TEST(ApplyEvents, MovePullUpPushDownShareRenameRules) {
    for (RefactoringKind kind : {RefactoringKind::MoveMethod, RefactoringKind::PullUpMethod,
                                 RefactoringKind::PushDownMethod}) {
        ChangeModel m;
        m.increment(kF, 10, 3);
        apply_refactorings(m, {{kind, kF, kOther, std::nullopt}}, 12, true);
        EXPECT_EQ(m.find(kF), nullptr) << to_string(kind);
        ASSERT_NE(m.find(kOther), nullptr) << to_string(kind);
        EXPECT_EQ(m.find(kOther)->total_changes, 4) << to_string(kind);
    }
}

TEST(ApplyEvents, ExtractStartsTheNewMethodAtOne) {
    ChangeModel m;
    m.increment(kF, 10, 6);
    RefactoringEvent e{RefactoringKind::ExtractMethod, std::nullopt, kG, kF};
    apply_refactorings(m, {e}, 12, true);

    ASSERT_NE(m.find(kG), nullptr);
    EXPECT_EQ(m.find(kG)->total_changes, 1);
    EXPECT_EQ(m.find(kG)->daily.at(12), 1);
    // The host's history is untouched by the event itself; its own +1 for
    // being modified comes from the normal change pass.
    EXPECT_EQ(m.find(kF)->total_changes, 6);
}

TEST(ApplyEvents, ExtractAndMoveBehavesLikeExtract) {
    ChangeModel m;
    RefactoringEvent e{RefactoringKind::ExtractAndMove, std::nullopt, kOther, kF};
    apply_refactorings(m, {e}, 12, true);
    ASSERT_NE(m.find(kOther), nullptr);
    EXPECT_EQ(m.find(kOther)->total_changes, 1);
}

TEST(ApplyEvents, InlineFoldsHelperIntoHost) {
    // f carries 2 changes, h carries 1. Inlining f into h deletes f's row
    // and charges the inline to h on the commit day.
    ChangeModel m;
    m.increment(kF, 10, 2);
    m.increment(kH, 10, 1);

    RefactoringEvent e{RefactoringKind::InlineMethod, kF, kF, kH};
    apply_refactorings(m, {e}, 12, true);

    EXPECT_EQ(m.find(kF), nullptr) << "inlined method's stats are deleted, not merged";
    ASSERT_NE(m.find(kH), nullptr);
    EXPECT_EQ(m.find(kH)->total_changes, 2);
    EXPECT_EQ(m.find(kH)->daily.at(12), 1);
}

TEST(ApplyEvents, InlineIgnoresCountRenamesFlag) {
    ChangeModel m;
    m.increment(kF, 10, 2);
    m.increment(kH, 10, 1);
    RefactoringEvent e{RefactoringKind::InlineMethod, kF, kF, kH};
    apply_refactorings(m, {e}, 12, false);
    EXPECT_EQ(m.find(kF), nullptr);
    EXPECT_EQ(m.find(kH)->total_changes, 2);
}

TEST(ApplyEvents, ChainOfRenamesPreservesTheWholeHistogram) {
    std::mt19937 rng(31);
    ChangeModel m;
    MethodIdentity current = ident("A.java", "A#seed");

    // Scatter some history, then rename repeatedly, sometimes with the
    // rename counted, and keep a running expectation of the histogram.
    std::map<int64_t, int64_t> expected;
    int64_t total = 0;
    for (int day = 100; day < 110; ++day) {
        int64_t by = 1 + static_cast<int64_t>(rng() % 3);
        m.increment(current, day, by);
        expected[day] += by;
        total += by;
    }

    for (int step = 0; step < 12; ++step) {
        MethodIdentity next =
            ident(step % 2 ? "A.java" : "B.java", "A#name" + std::to_string(step));
        bool counted = (rng() % 2) == 0;
        apply_refactorings(m, {rename_event(current, next)}, 200 + step, counted);
        if (counted) {
            expected[200 + step] += 1;
            total += 1;
        }
        current = next;
    }

    const MethodStats* s = m.find(current);
    ASSERT_NE(s, nullptr);
    EXPECT_EQ(s->total_changes, total);
    EXPECT_EQ(s->daily, expected);
    EXPECT_EQ(m.all_stats().size(), 1u) << "old identities must not linger";
}

TEST(ApplyEvents, EventsTouchOnlyTheirSubjects) {
    ChangeModel m;
    m.increment(kF, 10, 1);
    m.increment(kOther, 10, 7);

    apply_refactorings(m, {rename_event(kF, kG)}, 11, true);
    EXPECT_EQ(m.find(kOther)->total_changes, 7);
    EXPECT_EQ(m.find(kOther)->daily.size(), 1u);
}
