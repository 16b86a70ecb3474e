#pragma once

#include "sequence.hpp"

#include <numeric>

namespace cfl {

// Data of the horizontal branch locus R_h at one (possibly infinitely near) point: its
// multiplicity e, its local intersection with each vertical curve through the point, and, when
// the point gets blown up, the same data at the points of the new exceptional curve.
struct Germ {
    int e = 0;
    std::vector<int> kappa;   // aligned with the point's curves, oldest first
    bool blown = false;
    std::vector<Germ> sat;    // one per curve C through the point: the point E cap C~
    std::vector<Germ> free;   // the remaining points of E met by R_h
};

struct Component {
    int id = 0;
    int self_intersection = 0;
    int fiber_multiplicity = 1;
    bool in_branch = false;
    int depth = 0;
    int born_from = -1;            // blown-up point, -1 for the fiber itself
    std::vector<int> born_points;  // points of the curve present when it was created
};

struct SimPoint {
    int id = 0;
    std::vector<int> curves;  // oldest first; the last one is the newest curve through the point
    Germ germ;
    bool blown = false;
    int exceptional = -1;
    std::vector<int> sat_children;
};

struct BlowUpEvent {
    int point = 0;
    int multiplicity = 0;
    int exceptional = 0;
    bool in_branch = false;
};

struct Incidence {
    int a = 0, b = 0, point = 0;
};

struct HorizontalBranch {
    int point = 0;
    std::vector<std::pair<int, int>> contacts;  // (component, local intersection)
};

struct BranchConfiguration {
    CoverParams params;
    std::vector<Component> components;
    std::vector<SimPoint> points;
    std::vector<BlowUpEvent> trace;

    int multiplicity(const SimPoint& pt) const
    {
        int m = pt.germ.e;
        for (int c : pt.curves) m += components[c].in_branch ? 1 : 0;
        return m;
    }

    std::vector<Incidence> incidences() const
    {
        std::vector<Incidence> out;
        for (const auto& pt : points)
            if (!pt.blown && pt.curves.size() == 2) out.push_back({pt.curves[0], pt.curves[1], pt.id});
        return out;
    }

    std::vector<HorizontalBranch> horizontal_branches() const
    {
        std::vector<HorizontalBranch> out;
        for (const auto& pt : points) {
            if (pt.blown || pt.germ.e == 0) continue;
            HorizontalBranch hb{pt.id, {}};
            for (std::size_t q = 0; q < pt.curves.size(); ++q) hb.contacts.push_back({pt.curves[q], pt.germ.kappa[q]});
            out.push_back(std::move(hb));
        }
        return out;
    }

    bool resolved() const
    {
        for (const auto& pt : points)
            if (!pt.blown && multiplicity(pt) >= 2) return false;
        return true;
    }
};

// A ruling fiber with the given germs at distinct points.
inline BranchConfiguration make_configuration(CoverParams params, bool fiber_in_branch, const std::vector<Germ>& germs)
{
    BranchConfiguration cfg;
    cfg.params = params;
    Component fiber;
    fiber.id = 0;
    fiber.in_branch = fiber_in_branch;
    cfg.components.push_back(fiber);
    for (const auto& g : germs) {
        SimPoint pt;
        pt.id = static_cast<int>(cfg.points.size());
        pt.curves = {0};
        pt.germ = g;
        cfg.components[0].born_points.push_back(pt.id);
        cfg.points.push_back(std::move(pt));
    }
    return cfg;
}

inline void blow_up(BranchConfiguration& cfg, int point_id)
{
    const int n = cfg.params.n;
    SimPoint& pt = cfg.points.at(point_id);
    if (pt.blown) throw std::logic_error("point already blown up");
    const int m = cfg.multiplicity(pt);
    if (m < 2) throw std::logic_error("point is not singular on the branch divisor");
    if (m % n != 0 && m % n != 1) throw std::domain_error("configuration not realizable for this n");
    if (!pt.germ.blown) throw std::logic_error("germ carries no data past this point");
    if (pt.germ.sat.size() != pt.curves.size()) throw std::logic_error("germ satellites do not match the curves");

    Component e;
    e.id = static_cast<int>(cfg.components.size());
    e.self_intersection = -1;
    e.fiber_multiplicity = 0;
    e.in_branch = (m % n == 1);
    e.born_from = point_id;
    for (int c : pt.curves) {
        e.fiber_multiplicity += cfg.components[c].fiber_multiplicity;
        e.depth = std::max(e.depth, cfg.components[c].depth + 1);
        cfg.components[c].self_intersection -= 1;
    }
    cfg.components.push_back(e);
    const int eid = e.id;

    Germ plan = pt.germ;
    std::vector<int> curves = pt.curves;
    std::vector<int> born;
    std::vector<int> sats;
    for (std::size_t q = 0; q < curves.size(); ++q) {
        const Germ& sg = plan.sat[q];
        if (sg.kappa.size() != 2 || sg.kappa[0] != plan.kappa[q] - plan.e)
            throw std::logic_error("satellite contact with the old curve must drop by e");
        SimPoint s;
        s.id = static_cast<int>(cfg.points.size());
        s.curves = {curves[q], eid};
        s.germ = sg;
        born.push_back(s.id);
        sats.push_back(s.id);
        cfg.points.push_back(std::move(s));
    }
    int kappa_e = 0;
    for (const auto& sg : plan.sat) kappa_e += sg.kappa[1];
    for (const auto& fg : plan.free) {
        if (fg.kappa.size() != 1) throw std::logic_error("free point lies on the new curve only");
        kappa_e += fg.kappa[0];
        SimPoint s;
        s.id = static_cast<int>(cfg.points.size());
        s.curves = {eid};
        s.germ = fg;
        born.push_back(s.id);
        cfg.points.push_back(std::move(s));
    }
    if (kappa_e != plan.e) throw std::logic_error("contacts with the exceptional curve must sum to e");

    SimPoint& done = cfg.points.at(point_id);
    done.blown = true;
    done.exceptional = eid;
    done.sat_children = sats;
    cfg.components[eid].born_points = born;
    cfg.trace.push_back({point_id, m, eid, m % n == 1});
}

// Blows up singular points until the branch divisor is smooth. newest_first picks the most
// recently created singular point each time; otherwise the oldest.
inline BranchConfiguration resolve(BranchConfiguration cfg, bool newest_first = false)
{
    for (;;) {
        int pick = -1;
        for (const auto& pt : cfg.points) {
            if (pt.blown || cfg.multiplicity(pt) < 2) continue;
            if (pick < 0 || newest_first) pick = pt.id;
            if (!newest_first) break;
        }
        if (pick < 0) break;
        blow_up(cfg, pick);
    }
    for (const auto& pt : cfg.points) {
        if (pt.blown) continue;
        const auto& g = pt.germ;
        if (g.e >= 2) throw std::logic_error("unresolved singular horizontal point");
        if (g.e == 1 && pt.curves.size() == 2 && std::min(g.kappa[0], g.kappa[1]) != 1)
            throw std::logic_error("a smooth branch cannot be tangent to two transverse curves");
    }
    return cfg;
}

inline nlohmann::json trace_to_jsonl(const BranchConfiguration& cfg)
{
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& ev : cfg.trace)
        arr.push_back({{"point", ev.point}, {"m", ev.multiplicity}, {"exceptional", ev.exceptional}, {"in_branch", ev.in_branch}});
    return arr;
}

inline nlohmann::json configuration_to_json(const BranchConfiguration& cfg)
{
    nlohmann::json j;
    j["n"] = cfg.params.n;
    j["g"] = cfg.params.g;
    j["components"] = nlohmann::json::array();
    for (const auto& c : cfg.components)
        j["components"].push_back({{"id", c.id}, {"self_intersection", c.self_intersection},
                                   {"fiber_multiplicity", c.fiber_multiplicity}, {"in_branch", c.in_branch}});
    j["incidences"] = nlohmann::json::array();
    for (const auto& in : cfg.incidences()) j["incidences"].push_back({in.a, in.b, in.point});
    j["horizontal_branches"] = nlohmann::json::array();
    for (const auto& hb : cfg.horizontal_branches()) {
        nlohmann::json c = nlohmann::json::array();
        for (auto [comp, k] : hb.contacts) c.push_back({comp, k});
        j["horizontal_branches"].push_back({{"point", hb.point}, {"contacts", c}});
    }
    return j;
}

// Reads the singularity diagram of every curve off a resolved configuration.
inline DiagramSequence extract_sequence(const BranchConfiguration& cfg)
{
    DiagramSequence seq;
    const int ncomp = static_cast<int>(cfg.components.size());
    auto sat_on = [&](const SimPoint& pt, int curve) -> const SimPoint* {
        for (std::size_t q = 0; q < pt.curves.size(); ++q)
            if (pt.curves[q] == curve) return &cfg.points[pt.sat_children[q]];
        return nullptr;
    };
    auto kappa_on = [](const SimPoint& pt, int curve) {
        for (std::size_t q = 0; q < pt.curves.size(); ++q)
            if (pt.curves[q] == curve) return pt.germ.kappa[q];
        return 0;
    };

    std::vector<int> diagram_of(ncomp, -1);
    for (int c = 0; c < ncomp; ++c) diagram_of[c] = c;  // curves are created in diagram order
    seq.diagrams.resize(ncomp);
    for (int c = 0; c < ncomp; ++c) {
        const Component& comp = cfg.components[c];
        AbstractDiagram d;
        d.host_type = comp.in_branch ? 1 : 0;
        int parent_curve = -1;
        if (comp.born_from >= 0) parent_curve = cfg.points[comp.born_from].curves.back();
        for (int q : comp.born_points) {
            const SimPoint& first = cfg.points[q];
            int older_in_branch = 0;
            int older_curve = -1;
            for (int cc : first.curves)
                if (cc != c) {
                    older_curve = cc;
                    older_in_branch = cfg.components[cc].in_branch ? 1 : 0;
                }
            // M[k] = number of virtual branches through the (k+1)-th point of the column
            std::vector<int> M;
            Column col;
            const SimPoint* cur = &first;
            while (cur->blown) {
                M.push_back(cur == &first ? first.germ.e + older_in_branch : cur->germ.e);
                col.labels.push_back(cur->id);
                col.mults.push_back(cfg.multiplicity(*cur));
                cur = sat_on(*cur, c);
            }
            int residual = 0;
            if (col.mults.empty()) {
                if (first.germ.e + older_in_branch == 0) continue;
                col.labels.push_back(first.id);
                residual = first.germ.e == 1 ? kappa_on(first, c) : 1;  // else an older in-branch curve crossing
            } else if (cur->germ.e == 1) {
                residual = kappa_on(*cur, c);
            }
            for (int a = 0; a < residual; ++a) M.push_back(1);
            M.push_back(0);
            for (std::size_t k = 0; k + 1 < M.size(); ++k) {
                int s = M[k] - M[k + 1];
                if (s < 0) throw std::logic_error("virtual branch counts went negative");
                if (s > 0) col.profile[static_cast<int>(k) + 1] = s;
            }
            if (d.host_type == 0 && !col.mults.empty()) col.top_annotation = residual;
            if (c == 0) col.origin = Origin::free_item;
            else if (first.curves.size() == 2 && older_curve == parent_curve) col.origin = Origin::parent;
            else if (first.curves.size() == 2) col.origin = Origin::older;
            else col.origin = Origin::free_item;
            d.columns.push_back(std::move(col));
        }
        int t = 0;
        for (const auto& col : d.columns) t += contact_sum(col.profile);
        d.t = t;
        seq.diagrams[c] = std::move(d);
    }
    for (int c = 0; c < ncomp; ++c) {
        const auto& d = seq.diagrams[c];
        for (int i = 0; i < static_cast<int>(d.columns.size()); ++i) {
            if (d.columns[i].height() == 0) continue;
            int e = cfg.points[d.columns[i].labels[0]].exceptional;
            seq.forks.push_back({c, i, diagram_of[e]});
        }
    }
    std::sort(seq.forks.begin(), seq.forks.end(), [](const Fork& a, const Fork& b) { return a.to < b.to; });
    return seq;
}

// ---- realization of a diagram sequence ----

namespace detail {

struct RealizeCtx {
    const DiagramSequence& seq;
    int n;
};

// Germ at the base point of column i of D_mu. older_in_branch tells whether the older curve
// through the point (if any) lies in the branch locus; kappa_old is R_h's contact with it.
inline Germ realize_point(const RealizeCtx& ctx, int mu, int i, bool has_older, bool older_in_branch, int kappa_old)
{
    const AbstractDiagram& d = ctx.seq.diagrams[mu];
    const Column& col = d.columns[i];
    const int ob = older_in_branch ? 1 : 0;
    Germ g;
    g.e = branch_count(col.profile) - ob;
    const int kappa_new = contact_sum(col.profile) - ob;
    if (g.e < 0 || kappa_new < 0) throw std::logic_error("older in-branch curve missing from the profile");
    if (has_older) g.kappa = {kappa_old, kappa_new};
    else g.kappa = {kappa_new};
    const int m = g.e + ob + d.host_type;
    if (col.height() == 0) {
        if (m >= 2) throw std::logic_error("height-0 item at a singular point");
        return g;
    }
    if (m != col.mults[0]) throw std::logic_error("realized multiplicity differs from the diagram");
    g.blown = true;

    const int nu = ctx.seq.child_of(mu, i);
    if (nu < 0) throw std::logic_error("column is not forked");
    const AbstractDiagram& dn = ctx.seq.diagrams[nu];

    // curves through the point, oldest first: [older], host of D_mu
    std::vector<bool> inb;
    if (has_older) inb.push_back(older_in_branch);
    inb.push_back(d.host_type == 1);
    g.sat.resize(inb.size());
    std::vector<bool> filled(inb.size(), false);
    for (int q = 0; q < static_cast<int>(dn.columns.size()); ++q) {
        const Column& c = dn.columns[q];
        if (c.origin == Origin::free_item) {
            Germ fg = realize_point(ctx, nu, q, false, false, 0);
            g.free.push_back(fg);
            continue;
        }
        const int slot = (c.origin == Origin::parent) ? static_cast<int>(inb.size()) - 1 : 0;
        if (c.origin == Origin::older && !has_older) throw std::logic_error("older item without an older curve");
        if (filled[slot]) throw std::logic_error("two items from one occurrence");
        filled[slot] = true;
        const int k_old = g.kappa[slot] - g.e;
        g.sat[slot] = realize_point(ctx, nu, q, true, inb[slot], k_old);
    }
    for (std::size_t slot = 0; slot < inb.size(); ++slot) {
        if (filled[slot]) continue;
        const int k_old = g.kappa[slot] - g.e;
        if (k_old != 0 || inb[slot]) throw std::logic_error("an occurrence with residual data produced no item");
        Germ s;
        s.kappa = {0, 0};
        g.sat[slot] = s;
    }
    return g;
}

} // namespace detail

// An unresolved configuration whose resolution reproduces the sequence.
inline BranchConfiguration realize(const DiagramSequence& seq, CoverParams params)
{
    detail::RealizeCtx ctx{seq, params.n};
    std::vector<Germ> germs;
    const auto& root = seq.diagrams.at(0);
    for (int i = 0; i < static_cast<int>(root.columns.size()); ++i)
        germs.push_back(detail::realize_point(ctx, 0, i, false, false, 0));
    return make_configuration(params, root.host_type == 1, germs);
}

// ---- brute-force simulation ----

// Enumerates every germ tree over a fiber, blow-up by blow-up, within a depth bound.
class BranchSimulator {
public:
    BranchSimulator(CoverParams params, int max_depth) : p_(params), max_depth_(max_depth) {}

    // All germs at a point whose curves have the given branch flags (oldest first).
    const std::vector<Germ>& germs(const std::vector<bool>& inb, int depth, int e, const std::vector<int>& kappa)
    {
        std::string key;
        for (bool b : inb) key += b ? '1' : '0';
        key += ":" + std::to_string(depth) + ":" + std::to_string(e);
        for (int k : kappa) key += "," + std::to_string(k);
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;
        std::vector<Germ> out = compute(inb, depth, e, kappa);
        return memo_.emplace(key, std::move(out)).first->second;
    }

    // Every configuration over a fiber of the given type, resolved.
    std::vector<BranchConfiguration> configurations(int host_type)
    {
        const int r = p_.r;
        const int cap = multiplicity_cap(p_.g, p_.n, host_type);
        std::vector<std::pair<int, int>> kinds;  // (e, kappa)
        for (int e = 1; e <= r; ++e)
            for (int k = e; k <= r; ++k)
                if (e + host_type <= cap) kinds.push_back({e, k});
        std::vector<BranchConfiguration> out;
        std::vector<std::pair<int, int>> chosen;
        std::function<void(std::size_t, int)> rec = [&](std::size_t from, int remaining) {
            if (remaining == 0) {
                std::vector<const std::vector<Germ>*> opts;
                for (auto [e, k] : chosen) {
                    opts.push_back(&germs({host_type == 1}, 0, e, {k}));
                    if (opts.back()->empty()) return;
                }
                std::vector<Germ> pick(chosen.size());
                std::function<void(std::size_t)> prod = [&](std::size_t q) {
                    if (q == opts.size()) {
                        out.push_back(resolve(make_configuration(p_, host_type == 1, pick)));
                        return;
                    }
                    for (const auto& g : *opts[q]) {
                        pick[q] = g;
                        prod(q + 1);
                    }
                };
                prod(0);
                return;
            }
            for (std::size_t q = from; q < kinds.size(); ++q) {
                if (kinds[q].second > remaining) continue;
                chosen.push_back(kinds[q]);
                rec(q, remaining - kinds[q].second);
                chosen.pop_back();
            }
        };
        rec(0, r);
        return out;
    }

    std::set<std::string> key_set(int host_type)
    {
        std::set<std::string> keys;
        for (const auto& cfg : configurations(host_type)) keys.insert(canonical_key(extract_sequence(cfg)));
        return keys;
    }

private:
    CoverParams p_;
    int max_depth_;
    std::map<std::string, std::vector<Germ>> memo_;

    std::vector<Germ> compute(const std::vector<bool>& inb, int depth, int e, std::vector<int> kappa)
    {
        const int n = p_.n;
        int m = e;
        for (bool b : inb) m += b ? 1 : 0;
        Germ base;
        base.e = e;
        base.kappa = kappa;
        if (m < 2) {
            if (e == 0) {
                for (int k : kappa)
                    if (k != 0) return {};
            } else {
                if (e != 1) return {};
                int mn = 1 << 20;
                for (int k : kappa) mn = std::min(mn, k);
                if (inb.size() == 2 && mn != 1) return {};
            }
            return {base};
        }
        if (m % n != 0 && m % n != 1) return {};
        if (depth + 1 > max_depth_) return {};
        for (int k : kappa)
            if (k < e) return {};
        const bool e_in = (m % n == 1);
        const int nc = static_cast<int>(inb.size());

        // satellite choices: (e_sat, kappa_E) per curve
        std::vector<std::vector<std::pair<int, int>>> sat_opts(nc);
        for (int q = 0; q < nc; ++q) {
            const int K = kappa[q] - e;
            if (K == 0) {
                sat_opts[q].push_back({0, 0});
                continue;
            }
            for (int es = 1; es <= K; ++es)
                for (int ke = es; ke <= e; ++ke) sat_opts[q].push_back({es, ke});
        }

        std::vector<Germ> out;
        std::vector<std::pair<int, int>> sat_pick(nc);
        std::function<void(int, int)> over_sats = [&](int q, int budget) {
            if (budget < 0) return;
            if (q == nc) {
                // free points: multiset of (e_f, kappa_f), kappa_f >= e_f >= 1, sum kappa_f = budget
                std::vector<std::pair<int, int>> kinds;
                for (int ef = 1; ef <= budget; ++ef)
                    for (int kf = ef; kf <= budget; ++kf) kinds.push_back({ef, kf});
                std::vector<std::pair<int, int>> chosen;
                std::function<void(std::size_t, int)> over_free = [&](std::size_t from, int rem) {
                    if (rem == 0) {
                        assemble(inb, depth, e_in, kappa, e, sat_pick, chosen, out);
                        return;
                    }
                    for (std::size_t z = from; z < kinds.size(); ++z) {
                        if (kinds[z].second > rem) continue;
                        chosen.push_back(kinds[z]);
                        over_free(z, rem - kinds[z].second);
                        chosen.pop_back();
                    }
                };
                over_free(0, budget);
                return;
            }
            for (auto opt : sat_opts[q]) {
                sat_pick[q] = opt;
                over_sats(q + 1, budget - opt.second);
            }
        };
        over_sats(0, e);
        return out;
    }

    void assemble(const std::vector<bool>& inb, int depth, bool e_in, const std::vector<int>& kappa, int e,
                  const std::vector<std::pair<int, int>>& sat_pick, const std::vector<std::pair<int, int>>& free_pick,
                  std::vector<Germ>& out)
    {
        std::vector<const std::vector<Germ>*> opts;
        for (std::size_t q = 0; q < sat_pick.size(); ++q) {
            opts.push_back(&germs({inb[q], e_in}, depth + 1, sat_pick[q].first, {kappa[q] - e, sat_pick[q].second}));
            if (opts.back()->empty()) return;
        }
        for (auto [ef, kf] : free_pick) {
            opts.push_back(&germs({e_in}, depth + 1, ef, {kf}));
            if (opts.back()->empty()) return;
        }
        Germ g;
        g.e = e;
        g.kappa = kappa;
        g.blown = true;
        std::vector<const Germ*> pick(opts.size());
        std::function<void(std::size_t)> prod = [&](std::size_t q) {
            if (q == opts.size()) {
                Germ x = g;
                for (std::size_t s = 0; s < sat_pick.size(); ++s) x.sat.push_back(*pick[s]);
                for (std::size_t s = sat_pick.size(); s < pick.size(); ++s) x.free.push_back(*pick[s]);
                out.push_back(std::move(x));
                return;
            }
            for (const auto& cand : *opts[q]) {
                pick[q] = &cand;
                prod(q + 1);
            }
        };
        prod(0);
    }
};

} // namespace cfl
