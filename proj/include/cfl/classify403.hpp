#pragma once

#include "fiber.hpp"
#include "sequence.hpp"

namespace cfl {

enum class Family403 { f0, I, II, III, IV, V, VI, VII, VIII };

inline const char* family_name(Family403 f)
{
    static const char* names[] = {"0", "I", "II", "III", "IV", "V", "VI", "VII", "VIII"};
    return names[static_cast<int>(f)];
}

inline Family403 family403_from_string(const std::string& s)
{
    for (int q = 0; q <= static_cast<int>(Family403::VIII); ++q)
        if (s == family_name(static_cast<Family403>(q))) return static_cast<Family403>(q);
    throw std::invalid_argument("unknown (4,0,3) family " + s);
}

// indices: 0 -> i_1 >= ... >= i_m; I -> (i,j,l) with i <= j; II -> (k,l); III, V -> (i,j);
// IV, VI, VII -> (k); VIII -> ().
struct FiberClass403 {
    Family403 family = Family403::f0;
    std::vector<int> indices;

    bool has_chain() const { return family == Family403::I || family == Family403::II; }

    // indices without the chain length l
    std::vector<int> up_to_chain() const
    {
        auto v = indices;
        if (has_chain()) v.pop_back();
        return v;
    }

    int chain() const { return has_chain() ? indices.back() : 0; }

    // total number of fixed points lost by overlapping
    int k() const
    {
        switch (family) {
        case Family403::f0: {
            int k = 0;
            for (int i : indices) k += i - 1;
            return k;
        }
        case Family403::I:
        case Family403::III:
        case Family403::V: return indices[0] + indices[1];
        case Family403::II:
        case Family403::IV:
        case Family403::VI:
        case Family403::VII: return indices[0];
        default: return 0;
        }
    }

    auto operator<=>(const FiberClass403&) const = default;
};

inline std::string indices_string(const std::vector<int>& v)
{
    std::string s;
    for (std::size_t q = 0; q < v.size(); ++q) s += (q ? "," : "") + std::to_string(v[q]);
    return s;
}

inline std::string class_name(const FiberClass403& c)
{
    std::string s = family_name(c.family);
    if (!c.indices.empty()) s += "_{" + indices_string(c.indices) + "}";
    return s;
}

namespace detail {

// fixed points lost by overlapping on one diagram: each contact-c item costs c - 1
inline int lost(const AbstractDiagram& d)
{
    int k = 0;
    for (const auto& col : d.columns)
        if (col.height() == 0) k += i_max(col.profile) - 1;
    return k;
}

inline int lost_below(const DiagramSequence& seq, int mu)
{
    int k = lost(seq.diagrams[mu]);
    for (int i = 0; i < static_cast<int>(seq.diagrams[mu].columns.size()); ++i) {
        int nu = seq.child_of(mu, i);
        if (nu >= 0) k += lost_below(seq, nu);
    }
    return k;
}

inline int count_points(const DiagramSequence& seq, int mult_class, int n)
{
    std::set<int> labels;
    for (const auto& d : seq.diagrams)
        for (const auto& col : d.columns)
            for (int j = 0; j < col.height(); ++j)
                if (col.mults[j] / n == mult_class) labels.insert(col.labels[j]);
    return static_cast<int>(labels.size());
}

inline bool is_column(const Column& c, std::vector<int> mults) { return c.mults == mults; }

} // namespace detail

inline FiberClass403 classify(const DiagramSequence& seq)
{
    if (seq.diagrams.empty()) throw std::invalid_argument("empty sequence");
    const auto& root = seq.diagrams[0];
    if (root.t != 6) throw std::invalid_argument("not a (4,0,3) sequence");
    std::vector<int> stacked;  // positive-height root columns
    for (int i = 0; i < static_cast<int>(root.columns.size()); ++i)
        if (root.columns[i].height() > 0) stacked.push_back(i);
    auto col = [&](int q) -> const Column& { return root.columns[stacked[q]]; };
    auto below = [&](int q) { return detail::lost_below(seq, seq.child_of(0, stacked[q])); };
    const int alpha1 = detail::count_points(seq, 1, 3);

    FiberClass403 c;
    if (root.host_type == 0) {
        if (stacked.empty()) {
            c.family = Family403::f0;
            for (const auto& cl : root.columns) c.indices.push_back(i_max(cl.profile));
            std::sort(c.indices.rbegin(), c.indices.rend());
            return c;
        }
        if (stacked.size() == 1 && detail::is_column(col(0), {3, 3})) {
            c.family = Family403::II;
            c.indices = {detail::lost_below(seq, 0), alpha1 - 2};
            return c;
        }
        if (stacked.size() == 1 && detail::is_column(col(0), {3}) && col(0).top_annotation == 0) {
            c.family = Family403::I;
            int i = detail::lost(root), j = below(0);
            c.indices = {std::min(i, j), std::max(i, j), alpha1 - 1};
            return c;
        }
        if (stacked.size() == 2 && detail::is_column(col(0), {3}) && detail::is_column(col(1), {3})) {
            c.family = Family403::I;
            int i = below(0), j = below(1);
            c.indices = {std::min(i, j), std::max(i, j), alpha1 - 1};
            return c;
        }
        if (stacked.size() == 1 && detail::is_column(col(0), {3}) && col(0).top_annotation > 0) {
            // i: overlaps with the point x on the strict transform; j: all other overlaps
            const auto& dx = seq.diagrams[seq.child_of(0, stacked[0])];
            int i = col(0).top_annotation - 1, j = detail::lost(root);
            for (const auto& cl : dx.columns) {
                if (cl.height() > 0) throw std::domain_error("unclassifiable");
                (cl.origin == Origin::parent ? i : j) += i_max(cl.profile) - 1;
            }
            c.family = Family403::III;
            c.indices = {i, j};
            return c;
        }
        throw std::domain_error("unclassifiable");
    }

    std::sort(stacked.begin(), stacked.end(), [&](int a, int b) {
        return detail::column_order_less(root.columns[a], root.columns[b]);
    });
    std::vector<std::vector<int>> shapes;
    for (std::size_t q = 0; q < stacked.size(); ++q) shapes.push_back(col(q).mults);
    const int k = detail::lost_below(seq, 0);
    using V = std::vector<std::vector<int>>;
    if (shapes == V{{3}, {3}, {3}}) {
        c.family = Family403::IV;
        c.indices = {k};
    } else if (shapes == V{{3, 3}, {3}}) {
        // i on the stacked column, j on the single one
        c.family = Family403::V;
        c.indices = {below(0), below(1)};
    } else if (shapes == V{{3, 3, 3}}) {
        c.family = Family403::VI;
        c.indices = {k};
    } else if (shapes == V{{4, 3}, {3}}) {
        c.family = Family403::VII;
        c.indices = {k};
    } else if (shapes == V{{4, 4, 3}}) {
        c.family = Family403::VIII;
    } else {
        throw std::domain_error("unclassifiable");
    }
    return c;
}

struct Row403 {
    int alpha0 = 0;
    int alpha1 = 0;
    int epsilon = 0;
    Rational ind;
    Rational sigma;

    bool operator==(const Row403&) const = default;
};

// The invariant table of the nine families, as printed.
inline Row403 fixture_row(const FiberClass403& c)
{
    const int k = c.k(), l = c.chain();
    const Rational K(k);
    Row403 r;
    switch (c.family) {
    case Family403::f0: r = {k, 0, 0, 0, Rational(-16, 15) * K}; break;
    case Family403::I: r = {k, l + 1, 0, Rational(3, 7) * (l + 1), Rational(-16, 15) * K - Rational(7, 5) * l - Rational(7, 5)}; break;
    case Family403::II: r = {3 + k, l + 2, 0, Rational(3, 7) * (l + 2), Rational(-16, 15) * K - Rational(7, 5) * l - 6}; break;
    case Family403::III: r = {1 + k, 1, 0, Rational(3, 7), Rational(-16, 15) * K - Rational(37, 15)}; break;
    case Family403::IV: r = {k, 3, 1, Rational(16, 7), Rational(-16, 15) * K - Rational(16, 15)}; break;
    case Family403::V: r = {2 + k, 3, 1, Rational(16, 7), Rational(-16, 15) * K - Rational(16, 5)}; break;
    case Family403::VI: r = {4 + k, 3, 1, Rational(16, 7), Rational(-16, 15) * K - Rational(16, 3)}; break;
    case Family403::VII: r = {1 + k, 4, 2, Rational(26, 7), Rational(-16, 15) * K - Rational(2, 5)}; break;
    case Family403::VIII: r = {4, 4, 3, Rational(33, 7), Rational(-7, 15)}; break;
    }
    return r;
}

// Invariants of the fiber that a sequence encodes, through the simulated resolution.
inline Row403 compute_row(const DiagramSequence& seq, CoverParams params = make_params(4, 3))
{
    auto cfg = resolve(realize(seq, params));
    InvariantVector v;
    v.alpha0 = alpha_zero(cfg, params.n);
    v.alpha = alpha_indices(cfg);
    v.epsilon = epsilon_index(cfg, params.n);
    Row403 r;
    r.alpha0 = v.alpha0;
    r.alpha1 = v.alpha_k(1);
    r.epsilon = v.epsilon;
    r.ind = horikawa_index(params.n, params.r, v);
    r.sigma = local_signature(params.n, params.r, v);
    return r;
}

inline Row403 table_row(const FiberClass403&, const DiagramSequence& representative)
{
    return compute_row(representative);
}

// One representative per class (smallest canonical key), classes with l kept apart.
inline std::map<FiberClass403, DiagramSequence> classify_all(const std::vector<DiagramSequence>& seqs)
{
    std::map<FiberClass403, DiagramSequence> out;
    for (const auto& s : seqs) out.emplace(classify(s), s);
    return out;
}

// Distinct classes per family, the chain length l ignored.
inline std::map<Family403, std::set<std::vector<int>>> census(Bounds bounds)
{
    if (bounds.max_chain < 1) throw std::invalid_argument("max_chain must be at least 1");
    SequenceEngine eng(make_params(4, 3), bounds);
    std::map<Family403, std::set<std::vector<int>>> out;
    for (const auto& s : eng.enumerate_sequences()) {
        auto c = classify(s);
        out[c.family].insert(c.up_to_chain());
    }
    return out;
}

// ---- triple fibers ----

namespace detail {

inline Column labelled(Column c, int& next)
{
    c.labels.clear();
    for (int j = 0; j < std::max(1, c.height()); ++j) c.labels.push_back(next++);
    return c;
}

// Depth-first completion where every height-0 item is transverse, fewest blow-ups first.
inline bool complete_transverse(const SequenceEngine& eng, DiagramSequence& seq, std::deque<std::pair<int, int>> pending)
{
    if (pending.empty()) return true;
    auto [mu, i] = pending.front();
    pending.pop_front();
    auto options = eng.fork_options(seq, mu, i);
    std::stable_sort(options.begin(), options.end(), [](const AbstractDiagram& a, const AbstractDiagram& b) { return a.c() < b.c(); });
    for (const auto& d : options) {
        bool ok = true;
        for (const auto& c : d.columns)
            if (c.height() == 0 && i_max(c.profile) != 1) ok = false;
        if (!ok) continue;
        DiagramSequence next = SequenceEngine::expand_fork(seq, mu, i, d);
        auto more = pending;
        const int nu = static_cast<int>(next.diagrams.size()) - 1;
        for (int q = 0; q < static_cast<int>(d.columns.size()); ++q)
            if (d.columns[q].height() > 0) more.push_back({nu, q});
        if (complete_transverse(eng, next, more)) {
            seq = std::move(next);
            return true;
        }
    }
    return false;
}

} // namespace detail

struct TripleFiberExample {
    CoverParams params;
    DiagramSequence sequence;
};

// family 1: k columns [4,4,3] on a type-1 fiber, genus 6k-2 (k = 1 is VIII).
// family 2: one [7,7,6] column and k columns [4,4,3], genus 6k+13.
inline TripleFiberExample triple_fiber_example(int family, int k)
{
    if (family != 1 && family != 2) throw std::invalid_argument("family must be 1 or 2");
    if (k < (family == 1 ? 1 : 0)) throw std::invalid_argument("k out of range");
    const int g = family == 1 ? 6 * k - 2 : 6 * k + 13;
    TripleFiberExample ex;
    ex.params = make_params(g, 3);
    AbstractDiagram root;
    root.host_type = 1;
    root.t = ex.params.r;
    int next = 1;
    if (family == 2) root.columns.push_back(detail::labelled(derive_column({{1, 1}, {2, 1}, {3, 4}}, 1, 3), next));
    for (int q = 0; q < k; ++q) root.columns.push_back(detail::labelled(derive_column({{1, 1}, {2, 1}, {3, 1}}, 1, 3), next));
    SequenceEngine eng(ex.params, Bounds{64, 64});
    DiagramSequence seq;
    seq.diagrams.push_back(root);
    std::deque<std::pair<int, int>> pending;
    for (int i = 0; i < static_cast<int>(root.columns.size()); ++i) pending.push_back({0, i});
    if (!detail::complete_transverse(eng, seq, pending)) throw std::logic_error("no transverse completion");
    ex.sequence = canonicalize(seq);
    return ex;
}

} // namespace cfl
