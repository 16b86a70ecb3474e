#pragma once

#include "invariants.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <numeric>
#include <unordered_set>

namespace cfl {

// Ramification of R_h over the fiber, corrected by the Euler numbers of vertical branch curves
// that do not come from (-1)-curves upstairs.
inline int alpha_zero(const BranchConfiguration& cfg, int n)
{
    int a0 = 0;
    for (const auto& hb : cfg.horizontal_branches()) {
        int s = 0;
        for (auto [comp, k] : hb.contacts) s += cfg.components[comp].fiber_multiplicity * k;
        a0 += s - 1;
    }
    for (const auto& c : cfg.components)
        if (c.in_branch && c.self_intersection != -n) a0 -= 2;
    return a0;
}

struct FiberNode {
    int id = 0;
    int self_intersection = 0;
    int multiplicity = 1;
    int genus = 0;            // arithmetic genus
    bool fixed_curve = false; // lies in the fixed locus of the covering transformation
    int on_fixed = 0;         // marker count: points on a 1-dimensional fixed component
    int isolated = 0;         // marker count: isolated fixed points
    int source = -1;          // downstairs component
};

struct FiberGraph {
    int n = 0;
    int g = 0;
    std::vector<FiberNode> nodes;
    std::vector<std::vector<int>> meet;  // intersection numbers between distinct nodes
    int contracted = 0;

    int size() const { return static_cast<int>(nodes.size()); }
};

namespace detail {

// Local intersection of a non-branch component with the branch divisor at each point of it.
inline std::vector<int> branch_contacts(const BranchConfiguration& cfg, int comp)
{
    std::vector<int> out;
    for (const auto& pt : cfg.points) {
        if (pt.blown) continue;
        int q = -1;
        for (std::size_t s = 0; s < pt.curves.size(); ++s)
            if (pt.curves[s] == comp) q = static_cast<int>(s);
        if (q < 0) continue;
        int a = pt.germ.e > 0 ? pt.germ.kappa[q] : 0;
        for (int other : pt.curves)
            if (other != comp && cfg.components[other].in_branch) a += 1;
        if (a > 0) out.push_back(a);
    }
    return out;
}

inline bool is_prime(int n)
{
    if (n < 2) return false;
    for (int d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

} // namespace detail

inline FiberGraph apply_covering(const BranchConfiguration& cfg, int n)
{
    if (!detail::is_prime(n)) throw std::invalid_argument("covering construction needs prime n");
    if (!cfg.resolved()) throw std::invalid_argument("configuration is not resolved");
    FiberGraph fg;
    fg.n = n;
    fg.g = cfg.params.g;
    const int nc = static_cast<int>(cfg.components.size());
    std::vector<std::vector<int>> copies(nc);
    std::vector<int> cover_deg(nc, 1);  // c_C with phi^* C = c_C * (sum of nodes over C)

    auto add_node = [&](FiberNode node) {
        node.id = fg.size();
        fg.nodes.push_back(node);
        for (auto& row : fg.meet) row.push_back(0);
        fg.meet.push_back(std::vector<int>(fg.size(), 0));
        return node.id;
    };

    for (int c = 0; c < nc; ++c) {
        const Component& comp = cfg.components[c];
        FiberNode node;
        node.source = c;
        if (comp.in_branch) {
            if (comp.self_intersection % n != 0) throw std::domain_error("inconsistent configuration");
            node.self_intersection = comp.self_intersection / n;
            node.multiplicity = n * comp.fiber_multiplicity;
            node.fixed_curve = true;
            cover_deg[c] = n;
            copies[c].push_back(add_node(node));
            continue;
        }
        const auto contacts = detail::branch_contacts(cfg, c);
        int ram = 0, delta = 0, unram_sum = 0;
        for (int a : contacts) {
            if (a % n != 0) {
                ++ram;
                delta += (n - 1) * (a - 1) / 2;
            } else {
                unram_sum += a / n;
                delta += (n - 1) * a / 2;
            }
        }
        node.multiplicity = comp.fiber_multiplicity;
        node.on_fixed = static_cast<int>(contacts.size());
        if (ram > 0) {
            const int twice = (n - 1) * ram - 2 * n + 2;  // 2g' from Hurwitz
            if (twice % 2 != 0 || twice < 0) throw std::domain_error("inconsistent configuration");
            node.genus = twice / 2 + delta;
            node.self_intersection = n * comp.self_intersection;
            copies[c].push_back(add_node(node));
        } else {
            node.self_intersection = comp.self_intersection - (n - 1) * unram_sum;
            for (int i = 0; i < n; ++i) copies[c].push_back(add_node(node));
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    if (i != j) fg.meet[copies[c][i]][copies[c][j]] = unram_sum;
        }
    }

    for (const auto& in : cfg.incidences()) {
        const auto& A = copies[in.a];
        const auto& B = copies[in.b];
        if (A.size() == 1 && B.size() == 1) {
            const int v = n / (cover_deg[in.a] * cover_deg[in.b]);
            fg.meet[A[0]][B[0]] += v;
            fg.meet[B[0]][A[0]] += v;
        } else if (A.size() > 1 && B.size() > 1) {
            // the split part is a forest, so copies can be numbered to meet index by index
            for (std::size_t i = 0; i < A.size(); ++i) {
                fg.meet[A[i]][B[i]] += 1;
                fg.meet[B[i]][A[i]] += 1;
            }
        } else {
            const auto& split = A.size() > 1 ? A : B;
            const int whole = A.size() > 1 ? B[0] : A[0];
            const int deg = A.size() > 1 ? cover_deg[in.b] : cover_deg[in.a];
            if (deg != 1) throw std::domain_error("inconsistent configuration");
            for (int s : split) {
                fg.meet[s][whole] += 1;
                fg.meet[whole][s] += 1;
            }
        }
    }
    return fg;
}

inline void contract_node(FiberGraph& fg, int v)
{
    const int N = fg.size();
    for (int a = 0; a < N; ++a) {
        if (a == v) continue;
        const int va = fg.meet[v][a];
        if (va == 0) continue;
        fg.nodes[a].self_intersection += va * va;
        fg.nodes[a].genus += va * (va - 1) / 2;
        if (fg.nodes[v].fixed_curve) {
            fg.nodes[a].on_fixed = std::max(0, fg.nodes[a].on_fixed - va);
            fg.nodes[a].isolated += 1;
        } else {
            fg.nodes[a].isolated += fg.nodes[v].isolated;
        }
        for (int b = a + 1; b < N; ++b) {
            if (b == v) continue;
            const int add = va * fg.meet[v][b];
            fg.meet[a][b] += add;
            fg.meet[b][a] += add;
        }
    }
    fg.nodes.erase(fg.nodes.begin() + v);
    fg.meet.erase(fg.meet.begin() + v);
    for (auto& row : fg.meet) row.erase(row.begin() + v);
    for (int i = 0; i < fg.size(); ++i) fg.nodes[i].id = i;
    ++fg.contracted;
}

// Contracts smooth rational (-1)-nodes until none is left.
inline FiberGraph contract_minus_ones(FiberGraph fg)
{
    for (;;) {
        int pick = -1;
        for (int v = 0; v < fg.size() && fg.size() > 1; ++v)
            if (fg.nodes[v].self_intersection == -1 && fg.nodes[v].genus == 0) {
                pick = v;
                break;
            }
        if (pick < 0) return fg;
        contract_node(fg, pick);
    }
}

inline int fiber_multiplicity(const FiberGraph& fg)
{
    int k = 0;
    for (const auto& nd : fg.nodes) k = std::gcd(k, nd.multiplicity);
    return k;
}

// Negative semidefinite with kernel spanned by the fiber: M mu = 0 and the form is negative
// definite after dropping one node. Exact integer arithmetic throughout.
inline bool zariski_check(const FiberGraph& fg)
{
    using boost::multiprecision::cpp_int;
    const int N = fg.size();
    if (N == 0) return false;
    for (int a = 0; a < N; ++a) {
        long long s = 0;
        for (int b = 0; b < N; ++b)
            s += static_cast<long long>(a == b ? fg.nodes[a].self_intersection : fg.meet[a][b]) * fg.nodes[b].multiplicity;
        if (s != 0) return false;
    }
    if (N == 1) return fg.nodes[0].self_intersection == 0;
    // Sylvester on -M with the last node removed, leading minors via fraction-free elimination
    const int K = N - 1;
    std::vector<std::vector<cpp_int>> A(K, std::vector<cpp_int>(K));
    for (int a = 0; a < K; ++a)
        for (int b = 0; b < K; ++b) A[a][b] = -(a == b ? fg.nodes[a].self_intersection : fg.meet[a][b]);
    cpp_int prev = 1;
    for (int k = 0; k < K; ++k) {
        if (A[k][k] <= 0) return false;  // A[k][k] is the (k+1)-th leading minor
        for (int i = k + 1; i < K; ++i)
            for (int j = k + 1; j < K; ++j) A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) / prev;
        prev = A[k][k];
    }
    return true;
}

// Adjunction summed over the fiber: sum m_i K.C_i = 2g - 2.
inline bool genus_consistent(const FiberGraph& fg)
{
    long long s = 0;
    for (const auto& nd : fg.nodes) s += static_cast<long long>(nd.multiplicity) * (2 * nd.genus - 2 - nd.self_intersection);
    return s == 2LL * fg.g - 2;
}

inline nlohmann::json fiber_to_json(const FiberGraph& fg)
{
    nlohmann::json j;
    j["n"] = fg.n;
    j["contracted"] = fg.contracted;
    j["nodes"] = nlohmann::json::array();
    for (const auto& nd : fg.nodes)
        j["nodes"].push_back({{"id", nd.id}, {"self_intersection", nd.self_intersection}, {"multiplicity", nd.multiplicity},
                              {"genus", nd.genus}, {"fixed_curve", nd.fixed_curve},
                              {"markers", {{"on_fixed", nd.on_fixed}, {"isolated", nd.isolated}}}});
    j["edges"] = nlohmann::json::array();
    for (int a = 0; a < fg.size(); ++a)
        for (int b = a + 1; b < fg.size(); ++b)
            if (fg.meet[a][b]) j["edges"].push_back({a, b, fg.meet[a][b]});
    return j;
}

inline std::string fiber_to_dot(const FiberGraph& fg)
{
    std::ostringstream os;
    os << "graph fiber {\n";
    for (const auto& nd : fg.nodes) {
        os << "  v" << nd.id << " [label=\"" << nd.multiplicity << "C" << nd.id << "\\n" << nd.self_intersection;
        if (nd.genus) os << " g=" << nd.genus;
        if (nd.on_fixed) os << " *" << nd.on_fixed;
        if (nd.isolated) os << " o" << nd.isolated;
        os << "\"" << (nd.fixed_curve ? ", style=bold" : "") << "];\n";
    }
    for (int a = 0; a < fg.size(); ++a)
        for (int b = a + 1; b < fg.size(); ++b)
            if (fg.meet[a][b])
                os << "  v" << a << " -- v" << b << (fg.meet[a][b] > 1 ? " [label=\"" + std::to_string(fg.meet[a][b]) + "\"]" : "") << ";\n";
    os << "}\n";
    return os.str();
}

// ---- multiple fibers ----

// Every component of multiplicity outside nZ has all its neighbours' multiplicities in nZ.
inline bool sharp_condition(const std::vector<int>& mult, const std::vector<std::pair<int, int>>& edges, int n)
{
    for (auto [a, b] : edges) {
        if (mult[a] % n != 0 && mult[b] % n != 0) return false;
    }
    return true;
}

inline bool sharp_condition(const BranchConfiguration& cfg, int n)
{
    std::vector<int> mult;
    for (const auto& c : cfg.components) mult.push_back(c.fiber_multiplicity);
    std::vector<std::pair<int, int>> edges;
    for (const auto& in : cfg.incidences()) edges.push_back({in.a, in.b});
    return sharp_condition(mult, edges, n);
}

inline bool easylem_holds(int n, int a, int b)
{
    return (a + 2 * b) % n != 0 || (2 * a + b) % n != 0;
}

struct Residues {
    int n, a, b;
};

inline std::vector<Residues> easylem_check(int n_max)
{
    if (n_max < 4) throw std::invalid_argument("n_max must be at least 4");
    std::vector<Residues> bad;
    for (int n = 4; n <= n_max; ++n)
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                if (std::gcd(std::gcd(a, b), n) == 1 && !easylem_holds(n, a, b)) bad.push_back({n, a, b});
    return bad;
}

struct SharpSearchResult {
    long long explored = 0;   // distinct trees visited that could still reach (#)
    long long satisfying = 0; // reducible trees meeting (#)
};

// All dual trees obtained from a reduced fiber by at most max_blowups blow-ups, with
// multiplicities kept mod n (all that (#) and later blow-ups see). Trees are identified up to
// isomorphism and up to scaling every multiplicity by a unit mod n; both commute with blow-ups
// and preserve (#).
inline SharpSearchResult sharp_search(int n, int max_blowups)
{
    struct Tree {
        std::vector<int> res;
        std::vector<std::vector<int>> adj;
    };
    std::vector<int> units;
    for (int u = 1; u < n; ++u)
        if (std::gcd(u, n) == 1) units.push_back(u);

    std::function<std::string(const Tree&, int, int, int)> rooted = [&](const Tree& t, int v, int parent, int u) {
        std::vector<std::string> kids;
        for (int w : t.adj[v])
            if (w != parent) kids.push_back(rooted(t, w, v, u));
        std::sort(kids.begin(), kids.end());
        std::string s(1, static_cast<char>('a' + (t.res[v] * u) % n));
        s += "(";
        for (auto& k : kids) s += k;
        return s + ")";
    };
    auto centers = [](const Tree& t) {
        const int N = static_cast<int>(t.res.size());
        std::vector<int> deg(N), layer;
        for (int v = 0; v < N; ++v) {
            deg[v] = static_cast<int>(t.adj[v].size());
            if (deg[v] <= 1) layer.push_back(v);
        }
        int left = N;
        while (left > 2) {
            left -= static_cast<int>(layer.size());
            std::vector<int> nxt;
            for (int v : layer)
                for (int w : t.adj[v])
                    if (--deg[w] == 1) nxt.push_back(w);
            layer = nxt;
        }
        return layer;
    };
    auto canon = [&](const Tree& t) {
        std::string best;
        for (int c : centers(t))
            for (int u : units) {
                std::string s = rooted(t, c, -1, u);
                if (best.empty() || s < best) best = s;
            }
        return best;
    };
    auto bad_edges = [&](const Tree& t) {
        int bad = 0;
        for (int v = 0; v < static_cast<int>(t.res.size()); ++v)
            for (int w : t.adj[v])
                if (v < w && t.res[v] != 0 && t.res[w] != 0) ++bad;
        return bad;
    };

    // A blow-up removes at most one edge with both ends outside nZ, so a tree with more such
    // edges than blow-ups left can never reach (#).
    SharpSearchResult out;
    std::vector<Tree> level{Tree{{1 % n}, {{}}}};
    std::unordered_set<std::string> seen{canon(level[0])};
    out.explored = 1;
    for (int step = 0; step < max_blowups; ++step) {
        std::vector<Tree> next;
        auto push = [&](Tree t) {
            const int bad = bad_edges(t);
            if (bad > max_blowups - step - 1) return;
            if (seen.insert(canon(t)).second) {
                ++out.explored;
                if (bad == 0) ++out.satisfying;
                if (step + 1 < max_blowups) next.push_back(std::move(t));
            }
        };
        for (const auto& t : level) {
            const int N = static_cast<int>(t.res.size());
            for (int v = 0; v < N; ++v) {
                Tree u = t;
                u.res.push_back(t.res[v]);
                u.adj.push_back({v});
                u.adj[v].push_back(N);
                push(std::move(u));
                for (int w : t.adj[v]) {
                    if (w < v) continue;
                    Tree x = t;
                    x.res.push_back((t.res[v] + t.res[w]) % n);
                    std::replace(x.adj[v].begin(), x.adj[v].end(), w, N);
                    std::replace(x.adj[w].begin(), x.adj[w].end(), v, N);
                    x.adj.push_back({v, w});
                    push(std::move(x));
                }
            }
        }
        level = std::move(next);
    }
    return out;
}

} // namespace cfl
