#include "churnscope/method_diff.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <random>

#include "testutil.hpp"

using namespace churnscope;
namespace tu = churnscope::testutil;

namespace {

std::vector<MethodDecl> methods_of(const std::string& src, const std::string& path = "T.java") {
    ParseResult r = extract_methods(src, path);
    EXPECT_FALSE(r.degraded);
    return r.methods;
}

std::map<ChangeKind, int> kind_counts(const std::vector<MethodChange>& changes) {
    std::map<ChangeKind, int> counts;
    for (const auto& c : changes) counts[c.kind]++;
    return counts;
}

}  // namespace

TEST(Matching, EmptyInputs) {
    MethodMatching m = match_methods({}, {});
    EXPECT_TRUE(m.matched_pairs.empty());
    EXPECT_TRUE(m.unmatched_before.empty());
    EXPECT_TRUE(m.unmatched_after.empty());
    EXPECT_TRUE(classify_changes(m).empty());
}

TEST(Matching, SameSignatureDifferentBody) {
    auto before = methods_of("class A { void f() { int x = 1; } }");
    auto after = methods_of("class A { void f() { int x = 2; } }");
    MethodMatching m = match_methods(before, after);
    ASSERT_EQ(m.matched_pairs.size(), 1u);
    EXPECT_TRUE(m.unmatched_before.empty());
    EXPECT_TRUE(m.unmatched_after.empty());

    auto changes = classify_changes(m);
    ASSERT_EQ(changes.size(), 1u);
    EXPECT_EQ(changes[0].kind, ChangeKind::Modified);
}

TEST(Matching, RenameIsNotMatchedHere) {
    auto before = methods_of("class A { void f() { work(); } }");
    auto after = methods_of("class A { void g() { work(); } }");
    MethodMatching m = match_methods(before, after);
    EXPECT_TRUE(m.matched_pairs.empty());
    ASSERT_EQ(m.unmatched_before.size(), 1u);
    ASSERT_EQ(m.unmatched_after.size(), 1u);

    auto changes = classify_changes(m);
    auto counts = kind_counts(changes);
    EXPECT_EQ(counts[ChangeKind::Deleted], 1);
    EXPECT_EQ(counts[ChangeKind::Added], 1);
}

TEST(Matching, ParamTypeChangeIsDeletePlusAdd) {
    auto before = methods_of("class A { void f(int k) { use(k); } }");
    auto after = methods_of("class A { void f(long k) { use(k); } }");
    MethodMatching m = match_methods(before, after);
    EXPECT_TRUE(m.matched_pairs.empty());
    EXPECT_EQ(m.unmatched_before.size(), 1u);
    EXPECT_EQ(m.unmatched_after.size(), 1u);
}

TEST(Classify, IdenticalIsUnchanged) {
    auto before = methods_of("class A { void f() { int x = 1; } }");
    auto changes = classify_changes(match_methods(before, before));
    ASSERT_EQ(changes.size(), 1u);
    EXPECT_EQ(changes[0].kind, ChangeKind::Unchanged);
}

TEST(Classify, CommentOnlyEditIsUnchanged) {
    auto before = methods_of("class A { void f() { int x = 1; } }");
    auto after = methods_of(
        "class A {\n"
        "  // about to compute x\n"
        "  void f() { /* inline */ int x = 1; }\n"
        "}");
    auto changes = classify_changes(match_methods(before, after));
    ASSERT_EQ(changes.size(), 1u);
    EXPECT_EQ(changes[0].kind, ChangeKind::Unchanged);
}

TEST(Classify, SignatureOnlyEditIsModified) {
    // same name and params, but visibility/return type changed
    auto before = methods_of("class A { int f() { return 1; } }");
    auto after = methods_of("class A { public long f() { return 1; } }");
    auto changes = classify_changes(match_methods(before, after));
    ASSERT_EQ(changes.size(), 1u);
    EXPECT_EQ(changes[0].kind, ChangeKind::Modified);
}

TEST(Classify, ThrowsClauseEditIsModified) {
    auto before = methods_of("class A { void f() { go(); } }");
    auto after = methods_of("class A { void f() throws Exception { go(); } }");
    auto changes = classify_changes(match_methods(before, after));
    ASSERT_EQ(changes.size(), 1u);
    EXPECT_EQ(changes[0].kind, ChangeKind::Modified);
}

TEST(Classify, OneOfThreeGainsAStatement) {
    std::string before_src =
        "class A {\n"
        "  void a() { one(); }\n"
        "  void b() { two(); }\n"
        "  void c() { three(); }\n"
        "}";
    std::string after_src =
        "class A {\n"
        "  void a() { one(); }\n"
        "  void b() { two(); extra(); }\n"
        "  void c() { three(); }\n"
        "}";
    auto before = methods_of(before_src);
    auto after = methods_of(after_src);
    auto changes = classify_changes(match_methods(before, after));

    // brute-force oracle: compare token lists pairwise by name
    std::map<std::string, std::vector<std::string>> before_tokens;
    for (const auto& m : before) before_tokens[m.qualified_name] = m.body_tokens;
    int expect_modified = 0;
    for (const auto& m : after)
        if (before_tokens.at(m.qualified_name) != m.body_tokens) ++expect_modified;
    EXPECT_EQ(expect_modified, 1);

    auto counts = kind_counts(changes);
    EXPECT_EQ(counts[ChangeKind::Modified], 1);
    EXPECT_EQ(counts[ChangeKind::Unchanged], 2);
    EXPECT_EQ(counts[ChangeKind::Deleted], 0);
    EXPECT_EQ(counts[ChangeKind::Added], 0);

    for (const auto& c : changes)
        if (c.kind == ChangeKind::Modified) EXPECT_EQ(c.identity.qualified_name, "A#b");
}

TEST(Classify, OverloadsTrackedSeparately) {
    auto before = methods_of(
        "class A { void f(int k) { use(k); } void f(String s) { use(s); } }");
    auto after = methods_of(
        "class A { void f(int k) { use(k + 1); } void f(String s) { use(s); } }");
    auto changes = classify_changes(match_methods(before, after));
    auto counts = kind_counts(changes);
    EXPECT_EQ(counts[ChangeKind::Modified], 1);
    EXPECT_EQ(counts[ChangeKind::Unchanged], 1);
    for (const auto& c : changes)
        if (c.kind == ChangeKind::Modified)
            EXPECT_EQ(c.identity.param_types, std::vector<std::string>{"int"});
}

TEST(Classify, DeletedKeepsBeforeIdentityAddedKeepsAfter) {
    auto before = methods_of("class A { void gone() { a(); } }", "old.java");
    auto after = methods_of("class A { void fresh() { b(); } }", "old.java");
    auto changes = classify_changes(match_methods(before, after));
    ASSERT_EQ(changes.size(), 2u);
    for (const auto& c : changes) {
        if (c.kind == ChangeKind::Deleted) EXPECT_EQ(c.identity.qualified_name, "A#gone");
        if (c.kind == ChangeKind::Added) EXPECT_EQ(c.identity.qualified_name, "A#fresh");
    }
}

TEST(ClassifyProperties, SelfDiffIsAllUnchanged) {
    for (const char* name :
         {"Basic.java", "Inventory.java", "Shapes.java", "Engine.java", "Outer.java"}) {
        auto decls = methods_of(tu::read_file(tu::test_data_dir() + "/java/" + name), name);
        auto changes = classify_changes(match_methods(decls, decls));
        EXPECT_EQ(changes.size(), decls.size()) << name;
        for (const auto& c : changes) EXPECT_EQ(c.kind, ChangeKind::Unchanged) << name;
    }
}

TEST(ClassifyProperties, OrderIndependence) {
    auto before = methods_of(tu::read_file(tu::test_data_dir() + "/java/Inventory.java"),
                             "Inventory.java");
    auto after = before;
    // perturb two bodies, then shuffle both sides
    after[1].body_tokens.push_back("extra");
    after[3].body_tokens.push_back("extra");

    std::mt19937_64 rng(5);
    auto baseline = kind_counts(classify_changes(match_methods(before, after)));
    for (int i = 0; i < 20; ++i) {
        auto b = before;
        auto a = after;
        std::shuffle(b.begin(), b.end(), rng);
        std::shuffle(a.begin(), a.end(), rng);
        EXPECT_EQ(kind_counts(classify_changes(match_methods(b, a))), baseline);
    }
}

TEST(ClassifyProperties, CountsAreConsistent) {
    std::mt19937_64 rng(17);
    tu::JavaGen gen(99);
    for (int iter = 0; iter < 30; ++iter) {
        // random before/after method sets with overlapping names
        std::vector<std::string> before_methods, after_methods;
        for (int i = 0; i < 6; ++i) {
            std::string name = "m" + std::to_string(rng() % 9);
            before_methods.push_back(tu::JavaGen::method_text(name, {}, gen.statements(2)));
        }
        for (int i = 0; i < 6; ++i) {
            std::string name = "m" + std::to_string(rng() % 9);
            after_methods.push_back(tu::JavaGen::method_text(name, {}, gen.statements(2)));
        }
        auto before =
            methods_of(tu::JavaGen::class_text("", "A", "", before_methods), "A.java");
        auto after =
            methods_of(tu::JavaGen::class_text("", "A", "", after_methods), "A.java");

        MethodMatching m = match_methods(before, after);
        EXPECT_EQ(m.matched_pairs.size() + m.unmatched_before.size(), before.size());
        EXPECT_EQ(m.matched_pairs.size() + m.unmatched_after.size(), after.size());

        // injectivity: every before decl appears exactly once
        std::map<std::string, int> seen;
        for (const auto& [b, a] : m.matched_pairs) seen[b.identity().canonical()]++;
        for (const auto& b : m.unmatched_before) seen[b.identity().canonical()]++;
        for (const auto& [k, n] : seen) EXPECT_EQ(n, 1) << k;

        auto counts = kind_counts(classify_changes(m));
        EXPECT_EQ(counts[ChangeKind::Deleted],
                  static_cast<int>(m.unmatched_before.size()));
        EXPECT_EQ(counts[ChangeKind::Added], static_cast<int>(m.unmatched_after.size()));
    }
}

TEST(ChangeKindNames, Stable) {
    EXPECT_STREQ(to_string(ChangeKind::Unchanged), "unchanged");
    EXPECT_STREQ(to_string(ChangeKind::Modified), "modified");
    EXPECT_STREQ(to_string(ChangeKind::Added), "added");
    EXPECT_STREQ(to_string(ChangeKind::Deleted), "deleted");
}
