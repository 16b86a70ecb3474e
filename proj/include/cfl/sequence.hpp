#pragma once

#include "diagram.hpp"

#include <atomic>
#include <cstdlib>
#include <deque>
#include <functional>
#include <future>
#include <thread>
#include <tuple>

namespace cfl {

struct Fork {
    int from_diagram = 0;  // index into diagrams
    int from_column = 0;
    int to = 0;
};

struct DiagramSequence {
    std::vector<AbstractDiagram> diagrams;
    std::vector<Fork> forks;

    // -1 when the column is not forked
    int child_of(int mu, int i) const
    {
        for (const auto& f : forks)
            if (f.from_diagram == mu && f.from_column == i) return f.to;
        return -1;
    }
    int parent_of(int nu) const
    {
        for (const auto& f : forks)
            if (f.to == nu) return f.from_diagram;
        return -1;
    }
};

struct Bounds {
    int max_depth = 12;
    int max_chain = 3;
};

// ---- canonical form ----

namespace detail {

inline bool column_order_less(const Column& a, const Column& b)
{
    if (a.height() != b.height()) return a.height() > b.height();
    if (a.mults != b.mults) return a.mults > b.mults;
    if (a.profile != b.profile) return a.profile < b.profile;
    if (a.top_annotation != b.top_annotation) return a.top_annotation < b.top_annotation;
    return origin_char(a.origin) < origin_char(b.origin);
}

inline std::string column_head(const Column& col)
{
    std::string s(1, origin_char(col.origin));
    s += "[";
    for (int j = 0; j < col.height(); ++j) s += (j ? "," : "") + std::to_string(col.mults[j]);
    s += "]" + profile_string(col.profile);
    if (col.top_annotation) s += "^" + std::to_string(col.top_annotation);
    return s;
}

struct KeyedColumn {
    int index;
    std::string key;
};

inline std::string diagram_key(const DiagramSequence& seq, int mu, std::vector<std::vector<int>>* order)
{
    const auto& d = seq.diagrams[mu];
    std::vector<KeyedColumn> cols;
    for (int i = 0; i < static_cast<int>(d.columns.size()); ++i) {
        std::string k = column_head(d.columns[i]);
        int child = seq.child_of(mu, i);
        if (child >= 0) k += diagram_key(seq, child, order);
        cols.push_back({i, std::move(k)});
    }
    std::sort(cols.begin(), cols.end(), [&](const KeyedColumn& a, const KeyedColumn& b) {
        const Column& ca = d.columns[a.index];
        const Column& cb = d.columns[b.index];
        if (column_order_less(ca, cb)) return true;
        if (column_order_less(cb, ca)) return false;
        return a.key < b.key;
    });
    std::string key = "<" + std::to_string(d.host_type) + "," + std::to_string(d.t) + ":";
    for (std::size_t q = 0; q < cols.size(); ++q) key += (q ? " " : "") + cols[q].key;
    key += ">";
    if (order) {
        (*order)[mu].clear();
        for (const auto& c : cols) (*order)[mu].push_back(c.index);
    }
    return key;
}

} // namespace detail

inline std::string canonical_key(const DiagramSequence& seq)
{
    if (seq.diagrams.empty()) return "<>";
    return detail::diagram_key(seq, 0, nullptr);
}

// Diagrams in depth-first order along sorted columns, labels renumbered by first appearance.
inline DiagramSequence canonicalize(const DiagramSequence& seq)
{
    if (seq.diagrams.empty()) return seq;
    std::vector<std::vector<int>> order(seq.diagrams.size());
    detail::diagram_key(seq, 0, &order);

    DiagramSequence out;
    std::map<int, int> relabel;
    auto lab = [&](int old) {
        auto it = relabel.find(old);
        if (it != relabel.end()) return it->second;
        int fresh = static_cast<int>(relabel.size()) + 1;
        relabel[old] = fresh;
        return fresh;
    };
    std::function<int(int)> visit = [&](int mu) -> int {
        int idx = static_cast<int>(out.diagrams.size());
        out.diagrams.push_back({});
        AbstractDiagram d;
        d.host_type = seq.diagrams[mu].host_type;
        d.t = seq.diagrams[mu].t;
        for (int i : order[mu]) {
            Column c = seq.diagrams[mu].columns[i];
            for (auto& l : c.labels) l = lab(l);
            d.columns.push_back(std::move(c));
        }
        out.diagrams[idx] = d;
        for (int q = 0; q < static_cast<int>(order[mu].size()); ++q) {
            int child = seq.child_of(mu, order[mu][q]);
            if (child < 0) continue;
            int to = visit(child);
            out.forks.push_back({idx, q, to});
        }
        return idx;
    };
    visit(0);
    std::sort(out.forks.begin(), out.forks.end(), [](const Fork& a, const Fork& b) { return a.to < b.to; });
    return out;
}

inline nlohmann::json sequence_to_json(const DiagramSequence& seq)
{
    nlohmann::json j;
    j["diagrams"] = nlohmann::json::array();
    for (const auto& d : seq.diagrams) j["diagrams"].push_back(diagram_to_json(d));
    j["fork_map"] = nlohmann::json::array();
    for (const auto& f : seq.forks)
        j["fork_map"].push_back({{"from", {f.from_diagram + 1, f.from_column + 1}}, {"to", f.to + 1}});
    return j;
}

inline DiagramSequence sequence_from_json(const nlohmann::json& j)
{
    DiagramSequence seq;
    for (const auto& d : j.at("diagrams")) seq.diagrams.push_back(diagram_from_json(d));
    if (j.contains("fork_map"))
        for (const auto& f : j["fork_map"])
            seq.forks.push_back({f.at("from")[0].get<int>() - 1, f.at("from")[1].get<int>() - 1, f.at("to").get<int>() - 1});
    return seq;
}

// Structural checks on a complete sequence: each diagram valid, every positive-height column
// forked exactly once, fork heads consistent.
inline std::vector<std::string> validate_sequence(const DiagramSequence& seq, int n)
{
    std::vector<std::string> out;
    std::set<int> targets;
    for (std::size_t mu = 0; mu < seq.diagrams.size(); ++mu) {
        for (const auto& v : validate_diagram(seq.diagrams[mu], n))
            out.push_back("D" + std::to_string(mu + 1) + ": " + v.rule + ": " + v.message);
        const auto& d = seq.diagrams[mu];
        for (int i = 0; i < static_cast<int>(d.columns.size()); ++i) {
            int nu = seq.child_of(static_cast<int>(mu), i);
            if (d.columns[i].height() > 0 && nu < 0)
                out.push_back("D" + std::to_string(mu + 1) + " column " + std::to_string(i + 1) + " not forked");
            if (nu < 0) continue;
            if (d.columns[i].height() == 0) out.push_back("height-0 column forked");
            if (nu <= static_cast<int>(mu)) out.push_back("fork goes backwards");
            if (!targets.insert(nu).second) out.push_back("fork target reused");
            const auto& dn = seq.diagrams[nu];
            if (dn.t != d.columns[i].mults[0]) out.push_back("fork head: t differs from m_{i,1}");
            if (dn.host_type != dn.t % n) out.push_back("fork head: host type differs from t mod n");
        }
    }
    if (targets.size() + 1 != seq.diagrams.size()) out.push_back("fork map is not onto");
    return out;
}

// Diagram shape without labels or origins; used to bound repeated chains.
inline std::string diagram_shape(const AbstractDiagram& d)
{
    std::vector<std::string> parts;
    for (const auto& col : d.columns) {
        Column c = col;
        c.origin = Origin::free_item;
        parts.push_back(detail::column_head(c));
    }
    std::sort(parts.begin(), parts.end());
    std::string s = std::to_string(d.host_type) + "," + std::to_string(d.t) + ":";
    for (auto& p : parts) s += p + " ";
    return s;
}

inline int cfl_threads()
{
    if (const char* e = std::getenv("CFL_THREADS")) {
        int v = std::atoi(e);
        if (v >= 1) return v;
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc ? static_cast<int>(hc) : 1;
}

// ---- the enumeration engine ----

// Pruning of branches that only add negligible structure; used by the genus-3 layer.
struct EnginePolicy {
    bool only_transverse_free_items = false;  // free height-0 items restricted to (1)
    int single_completion_below = 0;           // forks with t below this take one completion
};

class SequenceEngine {
public:
    using Policy = EnginePolicy;

    SequenceEngine(CoverParams params, Bounds bounds, Policy policy = Policy())
        : p_(params), b_(bounds), policy_(policy)
    {
        build_profiles(std::max(p_.r, 2));
    }

    const CoverParams& params() const { return p_; }

    // All valid root diagrams of the given host type (t = r, m_{i,1} capped), up to column order.
    std::vector<AbstractDiagram> enumerate_root_diagrams(int host_type) const
    {
        const int cap = multiplicity_cap(p_.g, p_.n, host_type);
        std::vector<AbstractDiagram> out;
        std::vector<const Column*> chosen;
        auto cands = free_candidates(host_type, p_.r, cap);
        std::function<void(std::size_t, int)> rec = [&](std::size_t from, int remaining) {
            if (remaining == 0) {
                AbstractDiagram d;
                d.host_type = host_type;
                d.t = p_.r;
                int lab = 1;
                for (auto* c : chosen) {
                    Column col = *c;
                    col.labels.clear();
                    for (int j = 0; j < std::max(1, col.height()); ++j) col.labels.push_back(lab++);
                    d.columns.push_back(col);
                }
                out.push_back(std::move(d));
                return;
            }
            for (std::size_t q = from; q < cands.size(); ++q) {
                int cs = contact_sum(cands[q]->profile);
                if (cs > remaining) continue;
                chosen.push_back(cands[q]);
                rec(q, remaining - cs);
                chosen.pop_back();
            }
        };
        rec(0, p_.r);
        return out;
    }

    // Every complete sequence grown from the given roots, deduplicated by canonical key.
    std::vector<DiagramSequence> enumerate_from_roots(const std::vector<AbstractDiagram>& roots) const
    {
        const int threads = std::max(1, std::min<int>(cfl_threads(), static_cast<int>(roots.size())));
        std::vector<std::map<std::string, DiagramSequence>> parts(roots.size());
        auto work = [&](std::size_t q) {
            complete_from_root(roots[q], [&](const DiagramSequence& s) {
                DiagramSequence c = canonicalize(s);
                parts[q].emplace(canonical_key(c), std::move(c));
            });
        };
        if (threads <= 1) {
            for (std::size_t q = 0; q < roots.size(); ++q) work(q);
        } else {
            std::atomic<std::size_t> next{0};
            std::vector<std::thread> pool;
            for (int w = 0; w < threads; ++w)
                pool.emplace_back([&] {
                    for (std::size_t q; (q = next++) < roots.size();) work(q);
                });
            for (auto& th : pool) th.join();
        }
        std::map<std::string, DiagramSequence> all;
        for (auto& part : parts)
            for (auto& [k, s] : part) all.emplace(k, std::move(s));
        std::vector<DiagramSequence> out;
        for (auto& [k, s] : all) out.push_back(std::move(s));
        return out;
    }

    std::vector<DiagramSequence> enumerate_sequences(int host_type) const
    {
        return enumerate_from_roots(enumerate_root_diagrams(host_type));
    }

    std::vector<DiagramSequence> enumerate_sequences() const
    {
        auto roots = enumerate_root_diagrams(0);
        auto r1 = enumerate_root_diagrams(1);
        roots.insert(roots.end(), r1.begin(), r1.end());
        return enumerate_from_roots(roots);
    }

    // Streams complete (uncanonicalized) sequences grown from one root diagram.
    void complete_from_root(const AbstractDiagram& root, const std::function<void(const DiagramSequence&)>& emit) const
    {
        State s;
        s.seq.diagrams.push_back(root);
        s.depth.push_back(0);
        s.parent.push_back(-1);
        for (const auto& col : root.columns)
            for (int l : col.labels) s.next_label = std::max(s.next_label, l + 1);
        for (int i = 0; i < static_cast<int>(root.columns.size()); ++i)
            if (root.columns[i].height() > 0) s.pending.push_back({0, i});
        grow(s, emit);
    }

    // The continuations D_nu of one fork, given the partial sequence. Exposed for tests and for
    // the explicit fork-expansion operation.
    std::vector<AbstractDiagram> fork_options(const DiagramSequence& seq, int mu, int i) const
    {
        return build_options(seq, mu, i);
    }

    // Appends a chosen continuation of column i of D_mu.
    static DiagramSequence expand_fork(const DiagramSequence& seq, int mu, int i, const AbstractDiagram& choice)
    {
        DiagramSequence out = seq;
        int nu = static_cast<int>(out.diagrams.size());
        out.diagrams.push_back(choice);
        out.forks.push_back({mu, i, nu});
        return out;
    }

private:
    struct State {
        DiagramSequence seq;
        std::vector<int> depth;
        std::vector<int> parent;
        std::vector<std::string> shape;  // diagram_shape per diagram, filled lazily for max_chain
        std::deque<std::pair<int, int>> pending;
        int next_label = 1;
    };

    CoverParams p_;
    Bounds b_;
    Policy policy_;
    std::vector<Column> profiles_[2];  // valid derived columns per host type, contact sum <= r

    void build_profiles(int max_contact)
    {
        // all multisets of contact orders with total <= max_contact
        std::vector<int> parts;
        std::function<void(int, int)> rec = [&](int maxpart, int remaining) {
            if (!parts.empty()) {
                Profile p;
                for (int k : parts) p[k]++;
                for (int h = 0; h < 2; ++h) {
                    auto col = try_derive_column(p, h, p_.n);
                    if (!col) continue;
                    if (col->height() == 0 && (h == 1 || branch_count(p) != 1)) continue;
                    profiles_[h].push_back(*col);
                }
            }
            for (int k = std::min(maxpart, remaining); k >= 1; --k) {
                parts.push_back(k);
                rec(k, remaining - k);
                parts.pop_back();
            }
        };
        rec(max_contact, max_contact);
        for (auto& v : profiles_)
            std::sort(v.begin(), v.end(), [](const Column& a, const Column& b) {
                if (detail::column_order_less(a, b)) return true;
                if (detail::column_order_less(b, a)) return false;
                return false;
            });
    }

    std::vector<const Column*> free_candidates(int h, int max_contact, int cap) const
    {
        std::vector<const Column*> out;
        for (const auto& c : profiles_[h]) {
            if (contact_sum(c.profile) > max_contact) continue;
            if (c.height() > 0 && c.mults[0] > cap) continue;
            if (c.height() == 0 && policy_.only_transverse_free_items && i_max(c.profile) != 1) continue;
            out.push_back(&c);
        }
        return out;
    }

    struct Occurrence {
        int diagram, column, position;
    };

    std::vector<Occurrence> occurrences(const DiagramSequence& seq, int label) const
    {
        std::vector<Occurrence> out;
        for (int mu = 0; mu < static_cast<int>(seq.diagrams.size()); ++mu) {
            const auto& d = seq.diagrams[mu];
            for (int i = 0; i < static_cast<int>(d.columns.size()); ++i) {
                const auto& col = d.columns[i];
                for (int j = 0; j < col.height(); ++j)
                    if (col.labels[j] == label) out.push_back({mu, i, j});
            }
        }
        return out;
    }

    // mandatory bottom-row items of a forked diagram
    struct Requirement {
        enum Kind { shared, fixed_one, free_contact } kind;
        Origin origin;
        int label;   // base label of the item
        int mult;    // for shared
    };

    std::vector<AbstractDiagram> build_options(const DiagramSequence& seq, int mu, int i) const
    {
        const Column& col = seq.diagrams[mu].columns[i];
        const int x = col.labels[0];
        const int t = col.mults[0];
        const int h = t % p_.n;
        std::vector<Requirement> reqs;
        int fresh = 0;
        for (const auto& d : seq.diagrams)
            for (const auto& c : d.columns)
                for (int l : c.labels) fresh = std::max(fresh, l + 1);
        const int first_fresh = fresh;

        for (const auto& occ : occurrences(seq, x)) {
            const auto& dd = seq.diagrams[occ.diagram];
            const Column& cc = dd.columns[occ.column];
            const Origin o = occ.diagram == mu ? Origin::parent : Origin::older;
            if (occ.position + 1 < cc.height()) {
                reqs.push_back({Requirement::shared, o, cc.labels[occ.position + 1], cc.mults[occ.position + 1]});
            } else if (dd.host_type == 1 || cc.top_annotation >= 2) {
                reqs.push_back({Requirement::fixed_one, o, fresh++, 0});
            } else if (cc.top_annotation == 1) {
                reqs.push_back({Requirement::free_contact, o, fresh++, 0});
            }
        }

        std::vector<AbstractDiagram> out;
        std::vector<Column> fixed;
        std::function<void(std::size_t, int)> place = [&](std::size_t q, int used) {
            if (used > t) return;
            if (q == reqs.size()) {
                fill_free(h, t, t - used, fixed, fresh, out);
                return;
            }
            const auto& rq = reqs[q];
            if (rq.kind == Requirement::shared) {
                for (const auto& cand : profiles_[h]) {
                    if (cand.height() == 0 || cand.mults[0] != rq.mult) continue;
                    int cs = contact_sum(cand.profile);
                    if (used + cs > t) continue;
                    Column c = cand;
                    c.origin = rq.origin;
                    c.labels = {rq.label};
                    fixed.push_back(c);
                    place(q + 1, used + cs);
                    fixed.pop_back();
                }
            } else {
                if (h != 0) return;
                int smax = rq.kind == Requirement::fixed_one ? 1 : t - used;
                for (int s = 1; s <= smax; ++s) {
                    Column c;
                    c.profile = {{s, 1}};
                    c.origin = rq.origin;
                    c.labels = {rq.label};
                    fixed.push_back(c);
                    place(q + 1, used + s);
                    fixed.pop_back();
                }
            }
        };
        place(0, 0);
        (void)first_fresh;
        return out;
    }

    void fill_free(int h, int t, int remaining, const std::vector<Column>& fixed, int fresh,
                   std::vector<AbstractDiagram>& out) const
    {
        auto cands = free_candidates(h, remaining, 1 << 20);
        std::vector<const Column*> chosen;
        std::function<void(std::size_t, int)> rec = [&](std::size_t from, int rem) {
            if (rem == 0) {
                AbstractDiagram d;
                d.host_type = h;
                d.t = t;
                int lab = fresh;
                for (Column c : fixed) {
                    for (int j = 1; j < std::max(1, c.height()); ++j) c.labels.push_back(lab++);
                    d.columns.push_back(std::move(c));
                }
                for (auto* cp : chosen) {
                    Column c = *cp;
                    c.labels.clear();
                    for (int j = 0; j < std::max(1, c.height()); ++j) c.labels.push_back(lab++);
                    d.columns.push_back(std::move(c));
                }
                if (validate_diagram(d, p_.n).empty()) out.push_back(std::move(d));
                return;
            }
            for (std::size_t q = from; q < cands.size(); ++q) {
                int cs = contact_sum(cands[q]->profile);
                if (cs > rem) continue;
                chosen.push_back(cands[q]);
                rec(q, rem - cs);
                chosen.pop_back();
            }
        };
        rec(0, remaining);
    }

    bool chain_ok(State& s, int nu) const
    {
        // a chain can't outgrow the depth bound
        if (b_.max_chain > b_.max_depth) return true;
        while (static_cast<int>(s.shape.size()) <= nu) s.shape.push_back(diagram_shape(s.seq.diagrams[s.shape.size()]));
        int count = 0;
        for (int a = nu; a >= 0; a = s.parent[a])
            if (s.shape[a] == s.shape[nu]) ++count;
        return count <= b_.max_chain;
    }

    void grow(State& s, const std::function<void(const DiagramSequence&)>& emit) const
    {
        if (s.pending.empty()) {
            emit(s.seq);
            return;
        }
        auto [mu, i] = s.pending.front();
        if (s.depth[mu] + 1 > b_.max_depth) return;
        auto options = build_options(s.seq, mu, i);
        const int t = s.seq.diagrams[mu].columns[i].mults[0];
        if (t < policy_.single_completion_below && options.size() > 1) options.resize(1);
        for (auto& d : options) {
            State next = s;
            next.pending.pop_front();
            int nu = static_cast<int>(next.seq.diagrams.size());
            next.seq.diagrams.push_back(d);
            next.seq.forks.push_back({mu, i, nu});
            next.depth.push_back(s.depth[mu] + 1);
            next.parent.push_back(mu);
            bool too_deep = false;
            for (int q = 0; q < static_cast<int>(d.columns.size()); ++q)
                if (d.columns[q].height() > 0) {
                    next.pending.push_back({nu, q});
                    // every such column forks in turn
                    too_deep = too_deep || next.depth[nu] + 1 > b_.max_depth;
                }
            if (too_deep || !chain_ok(next, nu)) continue;
            grow(next, emit);
        }
    }
};

} // namespace cfl
