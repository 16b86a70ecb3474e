#include "cfl/hyp3.hpp"

#include <doctest.h>

using namespace cfl;

namespace {

AbstractDiagram one_column(int host_type, std::vector<int> mults)
{
    AbstractDiagram d;
    d.host_type = host_type;
    d.t = 8;
    Column c;
    c.mults = std::move(mults);
    d.columns.push_back(c);
    return d;
}

// A fork chain of single essential columns.
EssentialSequence chain_of(const std::vector<std::vector<int>>& cols)
{
    EssentialSequence ess;
    for (std::size_t q = 0; q < cols.size(); ++q) {
        EssNode nd;
        nd.host_type = 1;
        nd.t = q == 0 ? 8 : cols[q - 1].back();
        EssColumn c;
        c.mults = cols[q];
        c.child = q + 1 < cols.size() ? static_cast<int>(q + 1) : -1;
        nd.columns.push_back(c);
        ess.nodes.push_back(nd);
    }
    return ess;
}

std::string chain_of_string(const std::vector<std::vector<int>>& cols)
{
    const auto ess = chain_of(cols);
    return chain_type_string(chain_type(ess, ess.nodes[0].columns[0]));
}

} // namespace

TEST_CASE("strict negligibility")
{
    auto sn = [](int h, std::vector<int> m, int j) { return strictly_negligible(one_column(h, m), 0, j); };
    CHECK(sn(0, {4, 3, 2}, 2));
    CHECK(sn(0, {4, 3, 2}, 1));
    CHECK_FALSE(sn(0, {4, 3, 2}, 0));
    CHECK_FALSE(sn(0, {4, 3, 4}, 1));
    CHECK(sn(1, {5, 3}, 1));
    CHECK(sn(0, {3, 3}, 1));
    CHECK(sn(0, {3, 3}, 0));
    CHECK_FALSE(sn(0, {4, 3}, 1));
    CHECK_FALSE(sn(0, {3}, 0));
    CHECK_FALSE(sn(1, {5, 6}, 1));
}

TEST_CASE("decoration of the negligible part")
{
    auto dec = [](int h, std::vector<int> m) { return detail::split_column(one_column(h, m), 0).decoration; };
    CHECK(dec(1, {5, 3, 2}) == Decoration::III);
    CHECK(dec(1, {5, 2, 2}) == Decoration::II);
    CHECK(dec(1, {5, 3}) == Decoration::III);
    CHECK(dec(0, {4, 3, 2}) == Decoration::II);
    CHECK(dec(0, {4, 4}) == Decoration::none);
    CHECK(detail::split_column(one_column(0, {4, 3, 2}), 0).prefix == 1);
}

TEST_CASE("chain types")
{
    CHECK(chain_of_string({{3}, {4}, {3}, {4}}) == "(3-4)^2");
    CHECK(chain_of_string({{4}, {4}, {3}, {4}}) == "4^2-(3-4)^1");
    CHECK(chain_of_string({{4}}) == "4^1-(3-4)^0");
    CHECK(chain_of_string({{5}, {5}}) == "5^2");
    CHECK(chain_of_string({{5}, {4}, {3}, {4}}) == "5^1-4-(3-4)^1");
    CHECK(chain_of_string({{5}, {3, 4}, {4}}) == "5^1-34");
    const auto bad = chain_of({{3}, {5}});
    CHECK_THROWS_AS(chain_type(bad, bad.nodes[0].columns[0]), std::domain_error);
}

TEST_CASE("closed forms")
{
    for (int i = 0; i <= 4; ++i) CHECK(horikawa_g3({FamilyG3::I, {i, 0, 0}}) == Rational(2 * i, 3));
    for (int k = 1; k <= 4; ++k) CHECK(horikawa_g3({FamilyG3::I, {1, 0, k}}) == Rational(2, 3) + Rational(5 * k, 3) - Rational(1));
    CHECK(horikawa_g3({FamilyG3::VII, {0}}) == Rational(4, 3));
    CHECK(horikawa_g3({FamilyG3::IX, {}}) == Rational(4, 3));
    CHECK(horikawa_g3({FamilyG3::X, {}}) == Rational(7, 3));
    CHECK(horikawa_g3({FamilyG3::XI, {}}) == Rational(10, 3));
    CHECK(horikawa_g3({FamilyG3::I, {0, inf_index, inf_index}}) == Rational(10, 3));
}

TEST_CASE("XI: alpha_2 = 2, epsilon = 2, Ind = (2/3) alpha_2 + epsilon")
{
    const auto seq = expand_essential(representative_g3({FamilyG3::XI, {}}));
    const auto row = compute_g3_row(seq);
    CHECK(row.alpha2 == 2);
    CHECK(row.epsilon == 2);
    CHECK(row.ind == Rational(10, 3));
    CHECK(row.ind != Rational(row.alpha2 + row.epsilon));
    // the column [3,4,3,4] sits on the fiber and ends in an even multiplicity
    bool found = false;
    for (const auto& c : seq.diagrams[0].columns) found = found || c.mults == std::vector<int>{3, 4, 3, 4};
    CHECK(found);
}

TEST_CASE("every class up to index 2 expands, reclassifies and has its closed-form index")
{
    for (const auto& c : g3_classes(2)) {
        INFO(class_name(c));
        const auto rep = representative_g3(c);
        const auto seq = expand_essential(rep);
        CHECK(validate_sequence(seq, 2).empty());
        const auto ess = essentialize(seq);
        CHECK(essential_key(ess) == essential_key(rep));
        CHECK(classify_g3(ess) == c);
        CHECK(compute_g3_row(seq).ind == horikawa_g3(c));
        CHECK(canonical_key(extract_sequence(resolve(realize(seq, make_params(3, 2))))) == canonical_key(seq));
    }
}

TEST_CASE("root cells: every root lands in an allowed cell and every allowed cell occurs")
{
    std::map<std::string, std::set<std::string>> seen;
    int bad = 0;
    auto label = [](const std::vector<std::vector<int>>& cols, const std::vector<Decoration>& decs) {
        std::string s;
        for (const auto& [c, x] : detail::normalized_cell(cols, decs)) s += std::string(decoration_name(x)) + ",";
        return s;
    };
    for (int h : {0, 1}) {
        SequenceEngine eng(make_params(3, 2), Bounds{6, 6});
        for (const auto& d : eng.enumerate_root_diagrams(h)) {
            // a lone bottom 3 is essential or not depending on its fork; try both
            std::vector<std::pair<EssColumn, bool>> cols;
            for (int i = 0; i < static_cast<int>(d.columns.size()); ++i) {
                const auto s = detail::split_column(d, i);
                if (s.prefix == 0) continue;
                EssColumn c;
                c.origin = d.columns[i].origin;
                c.mults.assign(d.columns[i].mults.begin(), d.columns[i].mults.begin() + s.prefix);
                c.decoration = s.decoration;
                cols.push_back({c, s.lone_three});
            }
            int lone = 0;
            for (const auto& c : cols) lone += c.second;
            bool ok = false;
            for (int mask = 0; mask < (1 << lone); ++mask) {
                EssentialSequence e;
                e.nodes.push_back({h, 8, {}});
                int q = 0;
                for (const auto& [c, l] : cols) {
                    if (l && !((mask >> q++) & 1)) continue;
                    e.nodes[0].columns.push_back(c);
                }
                try {
                    const auto m = root_cell(e);
                    if (!decorations_allowed(m)) continue;
                    ok = true;
                    seen[m.cell->name].insert(label(m.cell->columns, m.decorations));
                } catch (const std::domain_error&) {
                }
            }
            if (!ok) {
                ++bad;
                MESSAGE("no cell for ", diagram_string(d));
            }
        }
    }
    CHECK(bad == 0);
    for (const auto& cell : root_cells())
        for (const auto& decs : cell.decorations) {
            INFO(cell.name, " ", label(cell.columns, decs));
            CHECK(seen[cell.name].count(label(cell.columns, decs)) == 1);
        }
}

TEST_CASE("enumerated genus-3 sequences: the essential choice does not matter")
{
    EnginePolicy policy;
    policy.only_transverse_free_items = true;
    policy.single_completion_below = 3;
    int total = 0;
    std::set<FiberClassG3> classes;
    for (int h : {0, 1}) {
        SequenceEngine eng(make_params(3, 2), Bounds{3, 3}, policy);
        for (const auto& s : eng.enumerate_sequences(h)) {
            ++total;
            const auto a = essentialize(s);
            const auto b = essentialize(s, EssentialChoice::maximal);
            INFO(canonical_key(s));
            CHECK(essential_key(a) == essential_key(b));
            const auto c = classify_g3(a);
            CHECK(classify_g3(b) == c);
            CHECK(compute_g3_row(s).ind == horikawa_g3(c));
            classes.insert(c);
        }
    }
    CHECK(total == 1376);
    CHECK(classes.size() == 61);
}

TEST_CASE("I and II: the 5- or 4-points form an A_{i+1} chain")
{
    for (const auto& c : g3_classes(2)) {
        if (c.family != FamilyG3::I && c.family != FamilyG3::II) continue;
        INFO(class_name(c));
        auto cfg = realize(expand_essential(representative_g3(c)), make_params(3, 2));
        const int blown = blow_up_all_of(cfg, c.family == FamilyG3::I ? 5 : 4);
        CHECK(blown == c.indices[0]);
        CHECK(is_chain(cfg, c.indices[0] + 1));
    }
}

TEST_CASE("invalid input")
{
    EssentialSequence e;
    e.nodes.push_back({1, 8, {}});
    e.nodes[0].columns.push_back(EssColumn{Origin::free_item, {6}, Decoration::none, -1});
    CHECK_THROWS_AS(classify_g3(e), std::domain_error);
    e.nodes[0].t = 6;
    CHECK_THROWS_AS(classify_g3(e), std::invalid_argument);
    CHECK_THROWS_AS(expand_essential(EssentialSequence{}), std::invalid_argument);
    CHECK_THROWS_AS(representative_g3({FamilyG3::I, {0, 0, 0}}), std::invalid_argument);
    for (int q = 0; q <= static_cast<int>(FamilyG3::XI); ++q) {
        const auto f = static_cast<FamilyG3>(q);
        CHECK(family_g3_from_string(family_name(f)) == f);
    }
    CHECK(class_name({FamilyG3::I, {0, 1, inf_index}}) == "I_{0,1,inf}");
}
