#include "cfl/branch_sim.hpp"

#include <doctest.h>

#include <cstdlib>

using namespace cfl;

namespace {

std::multiset<std::vector<int>> shape(const AbstractDiagram& d)
{
    std::multiset<std::vector<int>> s;
    for (const auto& c : d.columns) s.insert(c.mults);
    return s;
}

std::vector<std::string> keys(const std::vector<DiagramSequence>& seqs)
{
    std::vector<std::string> out;
    for (const auto& s : seqs) out.push_back(canonical_key(s));
    return out;
}

const AbstractDiagram& find_root(const SequenceEngine& eng, int h, const std::multiset<std::vector<int>>& want,
                                 std::vector<AbstractDiagram>& store)
{
    store = eng.enumerate_root_diagrams(h);
    for (const auto& d : store)
        if (shape(d) == want) return d;
    FAIL("root not found");
    return store.front();
}

} // namespace

TEST_CASE("root diagrams for (g,n) = (4,3)")
{
    SequenceEngine eng(make_params(4, 3), Bounds{4, 3});
    const auto t1 = eng.enumerate_root_diagrams(1);
    std::set<std::multiset<std::vector<int>>> got;
    for (const auto& d : t1) got.insert(shape(d));
    const std::set<std::multiset<std::vector<int>>> want = {
        {{3}, {3}, {3}}, {{3}, {3, 3}}, {{3}, {4, 3}}, {{3, 3, 3}}, {{4, 4, 3}}};
    CHECK(t1.size() == 5);
    CHECK(got == want);

    int c2 = 0, c0 = 0;
    for (const auto& d : eng.enumerate_root_diagrams(0)) {
        c2 += d.c() == 2;
        c0 += d.c() == 0;
        CHECK(d.t == 6);
        CHECK(validate_diagram(d, 3).empty());
    }
    CHECK(c2 == 2);
    CHECK(c0 == 11);  // partitions of 6
}

TEST_CASE("fork options")
{
    SequenceEngine eng(make_params(4, 3), Bounds{4, 3});
    std::vector<AbstractDiagram> store;

    SUBCASE("a triple point off the branch locus")
    {
        const auto& root = find_root(eng, 0, {{3}, {}, {}, {}}, store);
        DiagramSequence s;
        s.diagrams.push_back(root);
        int col = -1;
        for (int i = 0; i < static_cast<int>(root.columns.size()); ++i)
            if (root.columns[i].height() > 0) col = i;
        std::set<std::multiset<int>> parts;
        for (const auto& d : eng.fork_options(s, 0, col)) {
            CHECK(d.t == 3);
            CHECK(d.host_type == 0);
            std::multiset<int> p;
            for (const auto& c : d.columns) p.insert(contact_sum(c.profile));
            parts.insert(p);
        }
        CHECK(parts == std::set<std::multiset<int>>{{1, 1, 1}, {1, 2}, {3}});
    }

    SUBCASE("the 4-point of [4,3] carries the 3 above it")
    {
        const auto& root = find_root(eng, 1, {{3}, {4, 3}}, store);
        DiagramSequence s;
        s.diagrams.push_back(root);
        int col = root.columns[0].mults.size() == 2 ? 0 : 1;
        const auto opts = eng.fork_options(s, 0, col);
        CHECK(opts.size() == 2);
        for (const auto& d : opts) {
            CHECK(d.t == 4);
            CHECK(d.host_type == 1);
            int parents = 0;
            for (const auto& c : d.columns)
                if (c.origin == Origin::parent) {
                    ++parents;
                    CHECK(c.mults.front() == 3);
                }
            CHECK(parents == 1);
        }
    }

    SUBCASE("a column with a top annotation keeps the tangency")
    {
        const auto& root = find_root(eng, 0, {{3}}, store);
        REQUIRE(root.columns[0].top_annotation == 3);
        DiagramSequence s;
        s.diagrams.push_back(root);
        for (const auto& d : eng.fork_options(s, 0, 0)) {
            bool carried = false;
            for (const auto& c : d.columns)
                if (c.origin != Origin::free_item && i_max(c.profile) >= 1) carried = true;
            CHECK(carried);
        }
    }
}

TEST_CASE("smooth roots give one-diagram sequences")
{
    SequenceEngine eng(make_params(4, 3), Bounds{4, 3});
    std::vector<AbstractDiagram> smooth;
    for (const auto& d : eng.enumerate_root_diagrams(0))
        if (d.c() == 0) smooth.push_back(d);
    const auto seqs = eng.enumerate_from_roots(smooth);
    CHECK(seqs.size() == smooth.size());
    for (const auto& s : seqs) CHECK(s.diagrams.size() == 1);
}

TEST_CASE("the forced continuation below a [5,6] column")
{
    SequenceEngine eng(make_params(3, 2), Bounds{4, 3});
    int seen = 0;
    for (const auto& s : eng.enumerate_sequences(1)) {
        const auto& root = s.diagrams[0];
        if (root.columns.size() != 1 || root.columns[0].mults != std::vector<int>{5, 6}) continue;
        ++seen;
        const int d2 = s.child_of(0, 0);
        REQUIRE(d2 >= 0);
        CHECK(s.diagrams[d2].t == 5);
        CHECK(s.diagrams[d2].host_type == 1);
        REQUIRE(s.diagrams[d2].columns.size() == 1);
        CHECK(s.diagrams[d2].columns[0].mults == std::vector<int>{6});
        const int d3 = s.child_of(d2, 0);
        REQUIRE(d3 >= 0);
        CHECK(s.diagrams[d3].host_type == 0);
        CHECK(s.diagrams[d3].t == 6);
    }
    CHECK(seen > 0);
}

TEST_CASE("canonical keys")
{
    SequenceEngine eng(make_params(4, 3), Bounds{6, 3});
    const auto seqs = eng.enumerate_sequences();
    std::set<std::string> distinct;
    for (const auto& s : seqs) {
        const auto k = canonical_key(s);
        distinct.insert(k);
        // reversing the column order of every diagram changes nothing
        auto r = s;
        for (auto& d : r.diagrams) {
            const int nc = static_cast<int>(d.columns.size());
            std::reverse(d.columns.begin(), d.columns.end());
            for (auto& f : r.forks)
                if (&r.diagrams[f.from_diagram] == &d) f.from_column = nc - 1 - f.from_column;
        }
        CHECK(canonical_key(r) == k);
        CHECK(canonical_key(canonicalize(s)) == k);
        CHECK(canonical_key(sequence_from_json(sequence_to_json(s))) == k);
    }
    CHECK(distinct.size() == seqs.size());
}

TEST_CASE("every enumerated sequence is valid")
{
    for (auto [g, n, depth] : {std::tuple{4, 3, 6}, std::tuple{3, 2, 2}}) {
        SequenceEngine eng(make_params(g, n), Bounds{depth, 3});
        for (const auto& s : eng.enumerate_sequences()) {
            const auto problems = validate_sequence(s, n);
            INFO(canonical_key(s));
            CHECK(problems.empty());
            // balance: a fork diagram has t = m_{i,1} and host type from m_{i,1} mod n
            for (const auto& f : s.forks) {
                const int m = s.diagrams[f.from_diagram].columns[f.from_column].mults.front();
                CHECK(s.diagrams[f.to].t == m);
                CHECK(s.diagrams[f.to].host_type == (m % n == 1 ? 1 : 0));
            }
        }
    }
}

TEST_CASE("enumeration is deterministic")
{
    SequenceEngine eng(make_params(4, 3), Bounds{5, 3});
    const auto a = keys(eng.enumerate_sequences());
    const auto b = keys(eng.enumerate_sequences());
    CHECK(a == b);
    ::setenv("CFL_THREADS", "1", 1);
    const auto c = keys(eng.enumerate_sequences());
    ::unsetenv("CFL_THREADS");
    CHECK(a == c);
}

TEST_CASE("depth and chain bounds")
{
    auto count = [](int depth, int chain) {
        SequenceEngine eng(make_params(4, 3), Bounds{depth, chain});
        return eng.enumerate_sequences().size();
    };
    CHECK(count(0, 3) == 11);  // no fork allowed: only the smooth roots survive
    CHECK(count(4, 3) <= count(5, 3));
    CHECK(count(6, 1) < count(6, 3));
}
