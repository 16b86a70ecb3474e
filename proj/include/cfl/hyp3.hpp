#pragma once

#include "fiber.hpp"
#include "sequence.hpp"

#include <limits>

namespace cfl {

// ---- negligibility (n = 2) ----

// j is 0-based; the column is read bottom-up.
inline bool strictly_negligible(const AbstractDiagram& d, int i, int j)
{
    const auto& m = d.columns.at(i).mults;
    const int h = static_cast<int>(m.size());
    if (m.at(j) == 2) return true;
    if (m[j] != 3) return false;
    if (j + 1 < h) return m[j + 1] != 4;
    if (d.host_type == 1) return true;
    return j > 0 && m[j - 1] == 3;
}

inline std::vector<std::vector<bool>> negligibility_flags(const AbstractDiagram& d)
{
    std::vector<std::vector<bool>> out;
    for (int i = 0; i < static_cast<int>(d.columns.size()); ++i) {
        std::vector<bool> row;
        for (int j = 0; j < d.columns[i].height(); ++j) row.push_back(strictly_negligible(d, i, j));
        out.push_back(std::move(row));
    }
    return out;
}

// Strictly negligible entries above the essential part of a column.
enum class Decoration { none = 0, II = 2, III = 3 };

inline const char* decoration_name(Decoration d)
{
    switch (d) {
    case Decoration::II: return "II";
    case Decoration::III: return "III";
    default: return "0";
    }
}

struct EssColumn {
    Origin origin = Origin::free_item;
    std::vector<int> mults;  // essential entries, bottom-up
    Decoration decoration = Decoration::none;
    int child = -1;          // node of the fork
};

struct EssNode {
    int host_type = 0;
    int t = 0;
    std::vector<EssColumn> columns;
};

// Node 0 is the diagram of the fiber itself.
struct EssentialSequence {
    std::vector<EssNode> nodes;
};

namespace detail {

struct ColumnSplit {
    int prefix = 0;  // number of essential-candidate entries at the bottom
    Decoration decoration = Decoration::none;
    bool lone_three = false;  // a bottom 3 that is essential only if a 4 follows in its fork
};

inline ColumnSplit split_column(const AbstractDiagram& d, int i)
{
    const auto& col = d.columns[i];
    ColumnSplit s;
    const int h = col.height();
    while (s.prefix < h && !strictly_negligible(d, i, s.prefix)) ++s.prefix;
    for (int j = s.prefix; j < h; ++j)
        if (!strictly_negligible(d, i, j)) throw std::logic_error("essential entries do not form a bottom prefix");
    // the marker on top of the column; in type 1 the forced final double point is read through
    if (s.prefix < h) {
        int top = h - 1;
        if (d.host_type == 1 && top > s.prefix && col.mults[top] == 2) --top;
        s.decoration = col.mults[top] == 3 ? Decoration::III : Decoration::II;
    }
    s.lone_three = s.prefix == 1 && col.mults[0] == 3;
    return s;
}

inline int subtree_max(const DiagramSequence& seq, int mu)
{
    int best = 0;
    const auto& d = seq.diagrams[mu];
    for (int i = 0; i < static_cast<int>(d.columns.size()); ++i) {
        for (int m : d.columns[i].mults) best = std::max(best, m);
        int nu = seq.child_of(mu, i);
        if (nu >= 0) best = std::max(best, subtree_max(seq, nu));
    }
    return best;
}

inline bool has_strictly_negligible(const AbstractDiagram& d)
{
    for (int i = 0; i < static_cast<int>(d.columns.size()); ++i)
        for (int j = 0; j < d.columns[i].height(); ++j)
            if (strictly_negligible(d, i, j)) return true;
    return false;
}

inline int essentialize_node(const DiagramSequence& seq, int mu, EssentialSequence& out, bool maximal)
{
    const auto& d = seq.diagrams[mu];
    const int idx = static_cast<int>(out.nodes.size());
    out.nodes.push_back({d.host_type, d.t, {}});
    for (int i = 0; i < static_cast<int>(d.columns.size()); ++i) {
        auto s = split_column(d, i);
        if (s.prefix == 0) continue;
        const int nu = seq.child_of(mu, i);
        if (nu < 0) throw std::invalid_argument("sequence is not complete");
        if (s.lone_three && subtree_max(seq, nu) < 4 && (!maximal || has_strictly_negligible(seq.diagrams[nu]))) continue;
        EssColumn c;
        c.origin = d.columns[i].origin;
        c.mults.assign(d.columns[i].mults.begin(), d.columns[i].mults.begin() + s.prefix);
        c.decoration = s.decoration;
        c.child = essentialize_node(seq, nu, out, maximal);
        out.nodes[idx].columns.push_back(std::move(c));
    }
    return idx;
}

inline std::string ess_column_head(const EssColumn& c)
{
    std::string s(1, origin_char(c.origin));
    s += "[";
    for (std::size_t j = 0; j < c.mults.size(); ++j) s += (j ? "," : "") + std::to_string(c.mults[j]);
    s += "]";
    if (c.decoration != Decoration::none) s += decoration_name(c.decoration);
    return s;
}

inline std::string ess_node_key(const EssentialSequence& ess, int v)
{
    const auto& nd = ess.nodes[v];
    std::vector<std::string> parts;
    for (const auto& c : nd.columns) parts.push_back(ess_column_head(c) + (c.child >= 0 ? ess_node_key(ess, c.child) : ""));
    std::sort(parts.begin(), parts.end());
    std::string k = "<" + std::to_string(nd.host_type) + "," + std::to_string(nd.t) + ":";
    for (std::size_t q = 0; q < parts.size(); ++q) k += (q ? " " : "") + parts[q];
    return k + ">";
}

} // namespace detail

enum class EssentialChoice { minimal, maximal };

// Strictly negligible entries abbreviated; forks of negligible columns dropped. With the minimal
// choice a bottom 3 counts as essential only when a point of multiplicity >= 4 lies in its fork;
// the maximal choice keeps every bottom 3 whose fork has no strictly negligible entry.
inline EssentialSequence essentialize(const DiagramSequence& seq, EssentialChoice choice = EssentialChoice::minimal)
{
    EssentialSequence out;
    if (seq.diagrams.empty()) return out;
    detail::essentialize_node(seq, 0, out, choice == EssentialChoice::maximal);
    return out;
}

namespace detail {

inline int ess_subtree_max(const EssentialSequence& ess, int v)
{
    int best = 0;
    for (const auto& c : ess.nodes[v].columns) {
        for (int m : c.mults) best = std::max(best, m);
        if (c.child >= 0) best = std::max(best, ess_subtree_max(ess, c.child));
    }
    return best;
}

inline int copy_minimal(const EssentialSequence& in, int v, EssentialSequence& out)
{
    const int idx = static_cast<int>(out.nodes.size());
    out.nodes.push_back({in.nodes[v].host_type, in.nodes[v].t, {}});
    for (const auto& c : in.nodes[v].columns) {
        if (c.mults == std::vector<int>{3} && (c.child < 0 || ess_subtree_max(in, c.child) < 4)) continue;
        EssColumn k = c;
        if (c.child >= 0) k.child = copy_minimal(in, c.child, out);
        out.nodes[idx].columns.push_back(std::move(k));
    }
    return idx;
}

} // namespace detail

// Drops the bottom 3s that no point of multiplicity >= 4 follows.
inline EssentialSequence minimal_essential(const EssentialSequence& ess)
{
    EssentialSequence out;
    if (!ess.nodes.empty()) detail::copy_minimal(ess, 0, out);
    return out;
}

inline std::string essential_key(const EssentialSequence& ess)
{
    return ess.nodes.empty() ? "<>" : detail::ess_node_key(ess, 0);
}

// ---- chain types ----

struct ChainType {
    enum Kind { t34, t4, t5, t5_4, t5_34 } kind = t34;
    int k = 0;
    int l = 0;

    bool operator==(const ChainType&) const = default;
};

inline std::string chain_type_string(const ChainType& c)
{
    const std::string k = std::to_string(c.k), l = std::to_string(c.l);
    switch (c.kind) {
    case ChainType::t34: return "(3-4)^" + k;
    case ChainType::t4: return "4^" + k + "-(3-4)^" + l;
    case ChainType::t5: return "5^" + k;
    case ChainType::t5_4: return "5^" + k + "-4-(3-4)^" + l;
    default: return "5^" + k + "-34";
    }
}

namespace detail {

// Essential columns met along the fork chain of one column, the column itself first.
inline std::vector<std::vector<int>> chain_walk(const EssentialSequence& ess, const EssColumn& start)
{
    std::vector<std::vector<int>> out{start.mults};
    const EssColumn* c = &start;
    while (c->child >= 0) {
        const auto& nd = ess.nodes[c->child];
        if (nd.columns.empty()) break;
        if (nd.columns.size() > 1) throw std::domain_error("not a chain");
        c = &nd.columns[0];
        out.push_back(c->mults);
    }
    return out;
}

inline bool alternating_34(const std::vector<std::vector<int>>& w, std::size_t from, int& count)
{
    if ((w.size() - from) % 2 != 0) return false;
    for (std::size_t q = from; q < w.size(); q += 2)
        if (w[q] != std::vector<int>{3} || w[q + 1] != std::vector<int>{4}) return false;
    count = static_cast<int>((w.size() - from) / 2);
    return true;
}

} // namespace detail

inline ChainType chain_type(const EssentialSequence& ess, const EssColumn& start)
{
    const auto w = detail::chain_walk(ess, start);
    ChainType c;
    std::size_t q = 0;
    const std::vector<int> four{4}, five{5}, three_four{3, 4};
    if (w[0] == std::vector<int>{3}) {
        c.kind = ChainType::t34;
        if (detail::alternating_34(w, 0, c.k) && c.k > 0) return c;
    } else if (w[0] == four) {
        c.kind = ChainType::t4;
        while (q < w.size() && w[q] == four) ++q;
        c.k = static_cast<int>(q);
        if (detail::alternating_34(w, q, c.l)) return c;
    } else if (w[0] == five) {
        while (q < w.size() && w[q] == five) ++q;
        c.k = static_cast<int>(q);
        if (q == w.size()) {
            c.kind = ChainType::t5;
            return c;
        }
        if (w[q] == four) {
            c.kind = ChainType::t5_4;
            if (detail::alternating_34(w, q + 1, c.l)) return c;
        } else if (w[q] == three_four && q + 2 == w.size() && w[q + 1] == four) {
            c.kind = ChainType::t5_34;
            return c;
        }
    }
    throw std::domain_error("no chain type matches");
}

// ---- root cells ----

struct RootCell {
    const char* name;
    int host_type;
    std::vector<std::vector<int>> columns;  // essential parts, bottom-up
    std::vector<std::vector<Decoration>> decorations;  // allowed, in column order
    const char* family;
};

inline const std::vector<RootCell>& root_cells()
{
    using D = Decoration;
    static const std::vector<RootCell> cells = {
        {"(0,a)", 0, {}, {{}}, "0"},
        {"(0,b)", 0, {{3}}, {{D::none}}, "II"},
        {"(0,c)", 0, {{4}}, {{D::none}, {D::II}}, "II"},
        {"(0,d)", 0, {{3, 4}}, {{D::none}, {D::II}}, "VI"},
        {"(0,e)", 0, {{4, 3}}, {{D::none}}, "VIII"},
        {"(0,f)", 0, {{4, 4}}, {{D::none}}, "IV"},
        {"(0,g)", 0, {{3}, {3}}, {{D::none, D::none}}, "II"},
        {"(0,h)", 0, {{4}, {3}}, {{D::none, D::none}}, "II"},
        {"(0,i)", 0, {{4}, {4}}, {{D::none, D::none}}, "II"},
        {"(1,a)", 1, {}, {{}}, "0"},
        {"(1,b)", 1, {{4}}, {{D::none}, {D::II}, {D::III}}, "I"},
        {"(1,c)", 1, {{5}}, {{D::II}, {D::III}}, "I"},
        {"(1,d)", 1, {{3, 4}}, {{D::none}, {D::II}, {D::III}}, "I"},
        {"(1,e)", 1, {{4, 4}}, {{D::none}, {D::II}, {D::III}}, "V"},
        {"(1,f)", 1, {{5, 4}}, {{D::none}, {D::II}, {D::III}}, "IX"},
        {"(1,g)", 1, {{5, 5}}, {{D::II}, {D::III}}, "VII"},
        {"(1,h)", 1, {{4, 3, 4}}, {{D::none}, {D::II}}, "X"},
        {"(1,i)", 1, {{3, 4, 3, 4}}, {{D::none}}, "XI"},
        {"(1,j)", 1, {{5, 6}}, {{D::none}}, "III"},
        {"(1,k)", 1, {{4}, {4}}, {{D::none, D::none}, {D::II, D::none}, {D::III, D::none}, {D::II, D::II}}, "I"},
        {"(1,l)", 1, {{5}, {4}}, {{D::II, D::none}, {D::III, D::none}, {D::II, D::II}}, "I"},
        {"(1,m)", 1, {{5}, {5}}, {{D::II, D::II}}, "I"},
        {"(1,n)", 1, {{3, 4}, {4}}, {{D::none, D::none}, {D::II, D::none}, {D::none, D::II}}, "I"},
        {"(1,o)", 1, {{3, 4}, {5}}, {{D::none, D::II}}, "I"},
        {"(1,p)", 1, {{3, 4}, {3, 4}}, {{D::none, D::none}}, "I"},
    };
    return cells;
}

namespace detail {

// Columns sorted, decorations carried along; equal columns get their decorations sorted too.
inline std::vector<std::pair<std::vector<int>, Decoration>> normalized_cell(std::vector<std::vector<int>> cols,
                                                                          std::vector<Decoration> decs)
{
    std::vector<std::pair<std::vector<int>, Decoration>> v;
    for (std::size_t q = 0; q < cols.size(); ++q) v.push_back({cols[q], decs[q]});
    std::sort(v.begin(), v.end());
    return v;
}

} // namespace detail

struct CellMatch {
    const RootCell* cell = nullptr;
    std::vector<Decoration> decorations;  // in the cell's column order
};

inline CellMatch root_cell(const EssentialSequence& ess)
{
    const auto& root = ess.nodes.at(0);
    std::vector<std::vector<int>> cols;
    std::vector<Decoration> decs;
    for (const auto& c : root.columns) {
        cols.push_back(c.mults);
        decs.push_back(c.decoration);
    }
    auto got = detail::normalized_cell(cols, decs);
    for (const auto& cell : root_cells()) {
        if (cell.host_type != root.host_type || cell.columns.size() != cols.size()) continue;
        auto want_cols = cell.columns;
        std::sort(want_cols.begin(), want_cols.end());
        std::vector<std::vector<int>> got_cols;
        for (auto& [c, d] : got) got_cols.push_back(c);
        if (want_cols != got_cols) continue;
        // report decorations in the cell's column order
        CellMatch m{&cell, {}};
        std::vector<bool> used(got.size(), false);
        for (const auto& wc : cell.columns)
            for (std::size_t q = 0; q < got.size(); ++q)
                if (!used[q] && got[q].first == wc) {
                    used[q] = true;
                    m.decorations.push_back(got[q].second);
                    break;
                }
        return m;
    }
    throw std::domain_error("unclassifiable");
}

// Whether the decorations seen are among those the cell allows.
inline bool decorations_allowed(const CellMatch& m)
{
    auto norm = [&](const std::vector<Decoration>& d) { return detail::normalized_cell(m.cell->columns, d); };
    const auto got = norm(m.decorations);
    for (const auto& allowed : m.cell->decorations)
        if (norm(allowed) == got) return true;
    return false;
}

// ---- classes ----

enum class FamilyG3 { f0, I, II, III, IV, V, VI, VII, VIII, IX, X, XI };

inline const char* family_name(FamilyG3 f)
{
    static const char* names[] = {"0", "I", "II", "III", "IV", "V", "VI", "VII", "VIII", "IX", "X", "XI"};
    return names[static_cast<int>(f)];
}

inline FamilyG3 family_g3_from_string(const std::string& s)
{
    for (int q = 0; q <= static_cast<int>(FamilyG3::XI); ++q)
        if (s == family_name(static_cast<FamilyG3>(q))) return static_cast<FamilyG3>(q);
    throw std::invalid_argument("unknown genus-3 family " + s);
}

inline constexpr int inf_index = std::numeric_limits<int>::max();

// indices: (i,j,k) with j <= k for I and II, inf_index standing for an end of type 34;
// (i,j) for III and IV; (j) for V..VIII; () otherwise.
struct FiberClassG3 {
    FamilyG3 family = FamilyG3::f0;
    std::vector<int> indices;

    auto operator<=>(const FiberClassG3&) const = default;
};

inline std::string index_string(int v) { return v == inf_index ? "inf" : std::to_string(v); }

inline std::string indices_string_g3(const std::vector<int>& v)
{
    std::string s;
    for (std::size_t q = 0; q < v.size(); ++q) s += (q ? "," : "") + index_string(v[q]);
    return s;
}

inline std::string class_name(const FiberClassG3& c)
{
    std::string s = family_name(c.family);
    if (!c.indices.empty()) s += "_{" + indices_string_g3(c.indices) + "}";
    return s;
}

namespace detail {

// value of an end of the A_{i+1} chain: 0 none, v for 4-(3-4)^{v-1}, inf for 34
inline int end_value(const ChainType& c)
{
    switch (c.kind) {
    case ChainType::t5: return 0;
    case ChainType::t5_4: return 1 + c.l;
    case ChainType::t5_34: return inf_index;
    case ChainType::t4:
        if (c.k != 1) throw std::domain_error("unclassifiable");
        return 1 + c.l;
    default: throw std::domain_error("unclassifiable");
    }
}

inline std::vector<int> ends_pair(std::vector<int> ends)
{
    if (ends.size() > 2) throw std::domain_error("unclassifiable");
    while (ends.size() < 2) ends.push_back(0);
    std::sort(ends.begin(), ends.end());
    return ends;
}

// the single essential column below the one at the given column, two forks down
inline const EssColumn* grandchild_column(const EssentialSequence& ess, const EssColumn& c)
{
    const auto& n1 = ess.nodes[c.child];
    if (n1.columns.empty()) return nullptr;
    if (n1.columns.size() != 1) throw std::domain_error("unclassifiable");
    const auto& n2 = ess.nodes[n1.columns[0].child];
    if (n2.columns.empty()) return nullptr;
    if (n2.columns.size() > 1) throw std::domain_error("unclassifiable");
    return &n2.columns[0];
}

} // namespace detail

inline FiberClassG3 classify_g3(const EssentialSequence& given)
{
    if (given.nodes.empty() || given.nodes[0].t != 8) throw std::invalid_argument("not a genus-3 hyperelliptic sequence");
    const auto ess = minimal_essential(given);
    const auto m = root_cell(ess);
    FiberClassG3 c;
    c.family = family_g3_from_string(m.cell->family);
    const auto& root = ess.nodes[0];
    auto column_with = [&](std::vector<int> mults) -> const EssColumn& {
        for (const auto& col : root.columns)
            if (col.mults == mults) return col;
        throw std::logic_error("cell column missing");
    };

    switch (c.family) {
    case FamilyG3::I: {
        int i = 0;
        std::vector<int> ends;
        for (const auto& col : root.columns) {
            if (col.mults == std::vector<int>{3, 4}) {
                ends.push_back(inf_index);
                continue;
            }
            auto ct = chain_type(ess, col);
            if (col.mults == std::vector<int>{5}) i += ct.k;
            ends.push_back(detail::end_value(ct));
        }
        auto e = detail::ends_pair(ends);
        c.indices = {i, e[0], e[1]};
        break;
    }
    case FamilyG3::II: {
        int i = 0;
        std::vector<int> ends;
        for (const auto& col : root.columns) {
            auto ct = chain_type(ess, col);
            if (ct.kind == ChainType::t4) {
                i += ct.k;
                ends.push_back(ct.l);
            } else {
                ends.push_back(ct.k);
            }
        }
        auto e = detail::ends_pair(ends);
        c.indices = {i, e[0], e[1]};
        break;
    }
    case FamilyG3::III:
    case FamilyG3::IV: {
        const auto* x3 = detail::grandchild_column(ess, column_with(c.family == FamilyG3::III ? std::vector<int>{5, 6} : std::vector<int>{4, 4}));
        if (!x3) c.indices = {0, 0};
        else {
            auto ct = chain_type(ess, *x3);
            c.indices = ct.kind == ChainType::t4 ? std::vector<int>{ct.k, ct.l} : std::vector<int>{0, ct.k};
        }
        break;
    }
    case FamilyG3::V:
    case FamilyG3::VI: {
        const auto* x3 = detail::grandchild_column(ess, column_with(c.family == FamilyG3::V ? std::vector<int>{4, 4} : std::vector<int>{3, 4}));
        if (!x3) c.indices = {0};
        else {
            auto ct = chain_type(ess, *x3);
            if (ct.kind != ChainType::t34) throw std::domain_error("unclassifiable");
            c.indices = {ct.k};
        }
        break;
    }
    case FamilyG3::VII:
    case FamilyG3::VIII: {
        const auto* x3 = detail::grandchild_column(ess, column_with(c.family == FamilyG3::VII ? std::vector<int>{5, 5} : std::vector<int>{4, 3}));
        if (!x3) c.indices = {0};
        else {
            auto ct = chain_type(ess, *x3);
            if (ct.kind != ChainType::t4 || ct.k != 1) throw std::domain_error("unclassifiable");
            c.indices = {1 + ct.l};
        }
        break;
    }
    default: break;
    }
    return c;
}

// Closed forms of the Horikawa index per class.
inline Rational horikawa_g3(const FiberClassG3& c)
{
    const auto& x = c.indices;
    auto third = [](std::int64_t a) { return Rational(a, 3); };
    switch (c.family) {
    case FamilyG3::f0: return 0;
    case FamilyG3::I: {
        const int i = x[0], j = x[1], k = x[2];
        const Rational base = third(2 * i);
        if (j == 0 && k == 0) return base;
        if (j == 0 && k == inf_index) return base + third(5);
        if (j == 0) return base + third(5 * k) - 1;
        if (j == inf_index) return base + third(10);
        if (k == inf_index) return base + third(5 * j) + third(2);
        return base + third(5 * (j + k)) - 2;
    }
    case FamilyG3::II: return third(2 * x[0]) + third(5 * (x[1] + x[2]));
    case FamilyG3::III: return third(2 * x[0]) + third(5 * x[1]) + third(8);
    case FamilyG3::IV: return third(2 * x[0]) + third(5 * x[1]) + third(4);
    case FamilyG3::V: return third(5 * x[0]) + third(4);
    case FamilyG3::VI: return third(5 * x[0]) + third(5);
    case FamilyG3::VII: return x[0] == 0 ? third(4) : third(5 * x[0]) + third(1);
    case FamilyG3::VIII:
        // the j = 0 value is absent from the closed form; this one is computed from the resolution
        return x[0] == 0 ? third(2) : third(5 * x[0]) + third(2);
    case FamilyG3::IX: return third(4);
    case FamilyG3::X: return third(7);
    case FamilyG3::XI: return third(10);
    }
    return 0;
}

// ---- representatives ----

namespace detail {

struct Shape {
    Origin origin = Origin::free_item;
    std::vector<int> mults;
    Decoration decoration = Decoration::none;
    std::vector<Shape> below;  // essential columns of the fork
};

inline Shape F(std::vector<int> m, std::vector<Shape> below = {}, Decoration d = Decoration::none)
{
    return {Origin::free_item, std::move(m), d, std::move(below)};
}

inline Shape P(std::vector<int> m, std::vector<Shape> below = {}, Decoration d = Decoration::none)
{
    return {Origin::parent, std::move(m), d, std::move(below)};
}

// a later point of an older column's curve
inline Shape O(std::vector<int> m, std::vector<Shape> below = {}) { return {Origin::older, std::move(m), Decoration::none, std::move(below)}; }

inline Shape chain34(int k) { return F({3}, {F({4}, k > 1 ? std::vector<Shape>{chain34(k - 1)} : std::vector<Shape>{})}); }

inline std::vector<Shape> opt34(int l) { return l > 0 ? std::vector<Shape>{chain34(l)} : std::vector<Shape>{}; }

inline Shape chain4(int k, int l) { return F({4}, k > 1 ? std::vector<Shape>{chain4(k - 1, l)} : opt34(l)); }

// an end of value v hanging below a multiplicity-5 point or on the fiber
inline std::vector<Shape> end_shape(int v)
{
    if (v == 0) return {};
    if (v == inf_index) return {F({3, 4}, {P({4})})};
    return {chain4(1, v - 1)};
}

inline Shape chain5(int k, int end, Decoration d)
{
    return F({5}, k > 1 ? std::vector<Shape>{chain5(k - 1, end, d)} : end_shape(end), d);
}

inline int add_shape_node(EssentialSequence& ess, int host_type, int t, const std::vector<Shape>& cols)
{
    const int idx = static_cast<int>(ess.nodes.size());
    ess.nodes.push_back({host_type, t, {}});
    for (const auto& s : cols) {
        EssColumn c;
        c.origin = s.origin;
        c.mults = s.mults;
        c.decoration = s.decoration;
        c.child = add_shape_node(ess, s.mults[0] % 2, s.mults[0], s.below);
        ess.nodes[idx].columns.push_back(std::move(c));
    }
    return idx;
}

} // namespace detail

// The essential sequence of one representative of the class.
inline EssentialSequence representative_g3(const FiberClassG3& c)
{
    using namespace detail;
    const auto& x = c.indices;
    int host = 1;
    std::vector<Shape> root;
    switch (c.family) {
    case FamilyG3::f0: break;
    case FamilyG3::I: {
        const int i = x[0], j = x[1], k = x[2];
        if (i == 0 && j == 0 && k == 0) throw std::invalid_argument("I_{0,0,0} is of type 0");
        auto fiber_end = [&](int v) {
            if (v == inf_index) root.push_back(F({3, 4}, {P({4})}));
            else if (v > 0) root.push_back(chain4(1, v - 1));
        };
        if (i > 0) {
            root.push_back(chain5(i, k, Decoration::II));
            fiber_end(j);
        } else {
            fiber_end(j);
            fiber_end(k);
        }
        break;
    }
    case FamilyG3::II: {
        host = 0;
        const int i = x[0], j = x[1], k = x[2];
        if (i == 0 && j == 0 && k == 0) throw std::invalid_argument("II_{0,0,0} is of type 0");
        if (i > 0) root.push_back(chain4(i, k));
        else if (k > 0) root.push_back(chain34(k));
        if (j > 0) root.push_back(chain34(j));
        break;
    }
    case FamilyG3::III:
    case FamilyG3::IV: {
        const int i = x[0], j = x[1];
        std::vector<Shape> tail = i > 0 ? std::vector<Shape>{chain4(i, j)} : opt34(j);
        if (c.family == FamilyG3::III) root.push_back(F({5, 6}, {P({6}, tail)}));
        else {
            host = 0;
            root.push_back(F({4, 4}, {P({4}, tail)}));
        }
        break;
    }
    case FamilyG3::V: root.push_back(F({4, 4}, {P({4}, opt34(x[0]))})); break;
    case FamilyG3::VI:
        host = 0;
        root.push_back(F({3, 4}, {P({4}, opt34(x[0]))}));
        break;
    case FamilyG3::VII:
        root.push_back(F({5, 5}, {P({5}, x[0] > 0 ? std::vector<Shape>{chain4(1, x[0] - 1)} : std::vector<Shape>{}, Decoration::II)},
                         Decoration::II));
        break;
    case FamilyG3::VIII:
        host = 0;
        // the 3 in the fork of the 4 is essential only when a 4 follows it
        root.push_back(F({4, 3}, x[0] > 0 ? std::vector<Shape>{P({3}, {chain4(1, x[0] - 1)})} : std::vector<Shape>{}));
        break;
    case FamilyG3::IX: root.push_back(F({5, 4}, {P({4})})); break;
    case FamilyG3::X: root.push_back(F({4, 3, 4}, {P({3}, {O({4})})})); break;
    case FamilyG3::XI: root.push_back(F({3, 4, 3, 4}, {P({4}, {O({3}, {O({4})})})})); break;
    }
    EssentialSequence ess;
    add_shape_node(ess, host, 8, root);
    return ess;
}

// Every class with finite indices up to max_index, plus the ends of type 34 for I.
inline std::vector<FiberClassG3> g3_classes(int max_index)
{
    std::vector<FiberClassG3> out;
    out.push_back({FamilyG3::f0, {}});
    std::vector<int> ends;
    for (int v = 0; v <= max_index; ++v) ends.push_back(v);
    ends.push_back(inf_index);
    for (int i = 0; i <= max_index; ++i)
        for (std::size_t a = 0; a < ends.size(); ++a)
            for (std::size_t b = a; b < ends.size(); ++b)
                if (i + ends[a] + ends[b] > 0) out.push_back({FamilyG3::I, {i, ends[a], ends[b]}});
    for (int i = 0; i <= max_index; ++i)
        for (int j = 0; j <= max_index; ++j)
            for (int k = j; k <= max_index; ++k)
                if (i + j + k > 0) out.push_back({FamilyG3::II, {i, j, k}});
    for (auto f : {FamilyG3::III, FamilyG3::IV})
        for (int i = 0; i <= max_index; ++i)
            for (int j = 0; j <= max_index; ++j) out.push_back({f, {i, j}});
    for (auto f : {FamilyG3::V, FamilyG3::VI, FamilyG3::VII, FamilyG3::VIII})
        for (int j = 0; j <= max_index; ++j) out.push_back({f, {j}});
    for (auto f : {FamilyG3::IX, FamilyG3::X, FamilyG3::XI}) out.push_back({f, {}});
    return out;
}

// ---- expansion to a full sequence ----

namespace detail {

struct ExpandTask {
    int mu;
    int col;
    int node;  // essential node the fork must reproduce, -1 when nothing >= 4 may follow
};

class Expander {
public:
    Expander(const EssentialSequence& ess, CoverParams params)
        : ess_(ess), eng_(params, Bounds{64, 64}) {}

    bool run(DiagramSequence& out)
    {
        const auto& root = ess_.nodes.at(0);
        auto roots = eng_.enumerate_root_diagrams(root.host_type);
        by_size(roots);
        // shortest completions first; a plain DFS tends to wander down long negligible chains
        for (max_diagrams_ = 2; max_diagrams_ <= 96; max_diagrams_ *= 2)
            for (const auto& d : roots) {
                DiagramSequence seq;
                seq.diagrams.push_back(d);
                if (place(seq, 0, 0, {}, out)) return true;
            }
        return false;
    }

private:
    const EssentialSequence& ess_;
    SequenceEngine eng_;
    std::size_t max_diagrams_ = 0;

    static void by_size(std::vector<AbstractDiagram>& v)
    {
        std::stable_sort(v.begin(), v.end(), [](const AbstractDiagram& a, const AbstractDiagram& b) { return a.c() < b.c(); });
    }

    static bool matches(const EssColumn& want, const Column& col, const ColumnSplit& s)
    {
        if (col.origin != want.origin || s.decoration != want.decoration) return false;
        return std::vector<int>(col.mults.begin(), col.mults.begin() + s.prefix) == want.mults;
    }

    // Assigns the columns of the newest diagram (index mu) to the columns of node, then continues.
    bool place(DiagramSequence& seq, int mu, int node, std::deque<ExpandTask> tasks, DiagramSequence& out)
    {
        const auto& d = seq.diagrams[mu];
        const int nc = static_cast<int>(d.columns.size());
        std::vector<ColumnSplit> splits;
        for (int i = 0; i < nc; ++i) splits.push_back(split_column(d, i));
        if (node < 0) {
            for (const auto& col : d.columns)
                for (int m : col.mults)
                    if (m >= 4) return false;
            for (int i = 0; i < nc; ++i)
                if (d.columns[i].height() > 0) tasks.push_back({mu, i, -1});
            return step(seq, std::move(tasks), out);
        }
        const auto& want = ess_.nodes[node].columns;
        std::vector<int> owner(nc, -1);
        std::function<bool(std::size_t)> assign = [&](std::size_t w) -> bool {
            if (w == want.size()) {
                auto more = tasks;
                for (int i = 0; i < nc; ++i) {
                    if (d.columns[i].height() == 0) continue;
                    if (owner[i] < 0 && splits[i].prefix > 0 && !splits[i].lone_three) return false;
                    more.push_back({mu, i, owner[i] < 0 ? -1 : want[owner[i]].child});
                }
                return step(seq, std::move(more), out);
            }
            for (int i = 0; i < nc; ++i) {
                if (owner[i] >= 0 || d.columns[i].height() == 0 || !matches(want[w], d.columns[i], splits[i])) continue;
                owner[i] = static_cast<int>(w);
                if (assign(w + 1)) return true;
                owner[i] = -1;
            }
            return false;
        };
        return assign(0);
    }

    bool step(DiagramSequence& seq, std::deque<ExpandTask> tasks, DiagramSequence& out)
    {
        if (tasks.empty()) {
            out = seq;
            return true;
        }
        if (seq.diagrams.size() + tasks.size() > max_diagrams_) return false;
        const ExpandTask task = tasks.front();
        tasks.pop_front();
        auto options = eng_.fork_options(seq, task.mu, task.col);
        by_size(options);
        for (const auto& d : options) {
            DiagramSequence next = SequenceEngine::expand_fork(seq, task.mu, task.col, d);
            if (place(next, static_cast<int>(next.diagrams.size()) - 1, task.node, tasks, out)) return true;
        }
        return false;
    }
};

} // namespace detail

// A full sequence whose essentialization is the given one; forced double and triple points
// are filled in with the fewest blow-ups.
inline DiagramSequence expand_essential(const EssentialSequence& ess, CoverParams params = make_params(3, 2))
{
    if (ess.nodes.empty()) throw std::invalid_argument("empty essential sequence");
    DiagramSequence out;
    detail::Expander ex(ess, params);
    if (!ex.run(out)) throw std::domain_error("essential sequence inadmissible");
    return canonicalize(out);
}

struct G3Row {
    int alpha2 = 0;
    int epsilon = 0;
    Rational ind;
};

// (2/3) alpha_2 + epsilon through the simulated resolution.
inline G3Row compute_g3_row(const DiagramSequence& seq, CoverParams params = make_params(3, 2))
{
    auto cfg = resolve(realize(seq, params));
    InvariantVector v;
    v.alpha = alpha_indices(cfg);
    v.epsilon = epsilon_index(cfg, params.n);
    return {v.alpha_k(2), v.epsilon, horikawa_index(params.n, params.r, v)};
}

// Blows up the points of the given multiplicity over the fiber until none is left; returns the
// number of blow-ups, and the configuration after them.
inline int blow_up_all_of(BranchConfiguration& cfg, int mult)
{
    int count = 0;
    for (bool again = true; again;) {
        again = false;
        for (std::size_t q = 0; q < cfg.points.size(); ++q) {
            const auto& pt = cfg.points[q];
            if (pt.blown || cfg.multiplicity(pt) != mult) continue;
            blow_up(cfg, pt.id);
            ++count;
            again = true;
            break;
        }
    }
    return count;
}

// Whether the components over the fiber form a chain of the given length.
inline bool is_chain(const BranchConfiguration& cfg, int length)
{
    const int nc = static_cast<int>(cfg.components.size());
    if (nc != length) return false;
    std::vector<int> deg(nc, 0);
    int edges = 0;
    for (const auto& in : cfg.incidences()) {
        ++deg[in.a];
        ++deg[in.b];
        ++edges;
    }
    if (edges != nc - 1) return false;
    for (int v : deg)
        if (v > 2) return false;
    return true;
}

} // namespace cfl
