#include "cfl/classify403.hpp"

#include <doctest.h>

using namespace cfl;

namespace {

const std::map<FiberClass403, DiagramSequence>& classes(int max_chain)
{
    static std::map<int, std::map<FiberClass403, DiagramSequence>> memo;
    auto it = memo.find(max_chain);
    if (it == memo.end()) {
        SequenceEngine eng(make_params(4, 3), Bounds{max_chain + 2, 64});
        it = memo.emplace(max_chain, classify_all(eng.enumerate_sequences())).first;
    }
    return it->second;
}

} // namespace

TEST_CASE("census of the nine families")
{
    const auto c = census(Bounds{4, 3});
    const std::map<Family403, std::size_t> want = {
        {Family403::f0, 11}, {Family403::I, 6}, {Family403::II, 3}, {Family403::III, 7}, {Family403::IV, 4},
        {Family403::V, 4},   {Family403::VI, 2}, {Family403::VII, 3}, {Family403::VIII, 1}};
    for (auto [f, n] : want) {
        INFO(family_name(f));
        CHECK(c.at(f).size() == n);
    }
    CHECK(c.at(Family403::I) == std::set<std::vector<int>>{{0, 0}, {0, 1}, {0, 2}, {1, 1}, {1, 2}, {2, 2}});
    CHECK(c.at(Family403::VIII) == std::set<std::vector<int>>{{}});
    CHECK_THROWS_AS(census(Bounds{4, 0}), std::invalid_argument);
}

TEST_CASE("a chain of I-type forks grows l")
{
    std::map<int, int> per_l;
    for (const auto& [c, s] : classes(3))
        if (c.chain() <= 3) ++per_l[c.chain()];
    CHECK(per_l[0] == 41);
    for (int l = 1; l <= 3; ++l) CHECK(per_l[l] == 9);
}

TEST_CASE("computed invariants match the table")
{
    for (const auto& [c, s] : classes(3)) {
        if (c.chain() > 3) continue;
        INFO(class_name(c));
        CHECK(c.k() <= 5);
        const auto got = compute_row(s);
        const auto want = fixture_row(c);
        CHECK(got.alpha0 == want.alpha0);
        CHECK(got.alpha1 == want.alpha1);
        CHECK(got.epsilon == want.epsilon);
        CHECK(got.ind == want.ind);
        CHECK(got.sigma == want.sigma);
        CHECK(table_row(c, s) == want);
    }
}

TEST_CASE("signatures are negative except on the general fiber")
{
    for (const auto& [c, s] : classes(3)) {
        const auto sigma = compute_row(s).sigma;
        INFO(class_name(c));
        if (c == FiberClass403{Family403::f0, {1, 1, 1, 1, 1, 1}}) CHECK(sigma == Rational(0));
        else CHECK(sigma < Rational(0));
    }
}

TEST_CASE("index by family")
{
    for (const auto& [c, s] : classes(3)) {
        const auto ind = compute_row(s).ind;
        INFO(class_name(c));
        switch (c.family) {
        case Family403::f0: CHECK(ind == Rational(0)); break;
        case Family403::I: CHECK(ind == Rational(3 * (c.chain() + 1), 7)); break;
        case Family403::II: CHECK(ind == Rational(3 * (c.chain() + 2), 7)); break;
        case Family403::III: CHECK(ind == Rational(3, 7)); break;
        case Family403::IV:
        case Family403::V:
        case Family403::VI: CHECK(ind == Rational(16, 7)); break;
        case Family403::VII: CHECK(ind == Rational(26, 7)); break;
        case Family403::VIII: CHECK(ind == Rational(33, 7)); break;
        }
    }
}

TEST_CASE("classification survives the resolution round trip")
{
    const auto p = make_params(4, 3);
    for (const auto& [c, s] : classes(2)) {
        INFO(class_name(c));
        CHECK(classify(canonicalize(extract_sequence(resolve(realize(s, p))))) == c);
    }
}

TEST_CASE("specific classifications")
{
    int seen = 0;
    SequenceEngine eng(make_params(4, 3), Bounds{3, 1});
    for (const auto& s : eng.enumerate_sequences(0)) {
        const auto& root = s.diagrams[0];
        const auto c = classify(s);
        if (root.host_type == 0 && root.columns.size() == 1 && root.columns[0].top_annotation == 3) {
            ++seen;
            CHECK(c.family == Family403::III);
            CHECK(c.indices[0] == 2);
        }
    }
    CHECK(seen > 0);

    DiagramSequence odd;
    AbstractDiagram root;
    root.host_type = 1;
    root.t = 6;
    auto col = derive_column({{1, 2}}, 1, 3);
    col.labels = {1};
    root.columns = {col};
    odd.diagrams = {root};
    CHECK_THROWS_WITH_AS(classify(odd), "unclassifiable", std::domain_error);
    CHECK_THROWS_AS(classify(DiagramSequence{}), std::invalid_argument);
}

TEST_CASE("triple fibers")
{
    for (auto [family, k, g] : {std::tuple{1, 1, 4}, std::tuple{1, 2, 10}, std::tuple{2, 0, 13}, std::tuple{2, 1, 19}}) {
        const auto ex = triple_fiber_example(family, k);
        INFO("family ", family, " k ", k);
        CHECK(ex.params.g == g);
        CHECK(validate_sequence(ex.sequence, 3).empty());
        const auto fg = contract_minus_ones(apply_covering(resolve(realize(ex.sequence, ex.params)), 3));
        CHECK(fiber_multiplicity(fg) == 3);
        CHECK(zariski_check(fg));
    }
    CHECK(classify(triple_fiber_example(1, 1).sequence) == FiberClass403{Family403::VIII, {}});
    CHECK_THROWS_AS(triple_fiber_example(3, 1), std::invalid_argument);
    CHECK_THROWS_AS(triple_fiber_example(1, 0), std::invalid_argument);
}

TEST_CASE("family names round trip")
{
    for (int q = 0; q <= static_cast<int>(Family403::VIII); ++q) {
        const auto f = static_cast<Family403>(q);
        CHECK(family403_from_string(family_name(f)) == f);
    }
    CHECK(class_name({Family403::I, {0, 1, 2}}) == "I_{0,1,2}");
}
