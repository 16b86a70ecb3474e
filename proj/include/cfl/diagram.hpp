#pragma once

#include <json.hpp>

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace cfl {

struct CoverParams {
    int g = 0;
    int n = 0;
    int r = 0;
};

// Hurwitz: 2g - 2 = -2n + (n - 1) r.
inline int branch_point_count(int g, int n)
{
    if (g < 2 || n < 2) throw std::invalid_argument("need g >= 2 and n >= 2");
    const int num = 2 * g - 2 + 2 * n;
    if (num % (n - 1) != 0 || (num / (n - 1)) % n != 0)
        throw std::domain_error("no primitive cyclic covering fibration of this type exists");
    return num / (n - 1);
}

inline CoverParams make_params(int g, int n) { return {g, n, branch_point_count(g, n)}; }

// Largest m_{i,1} allowed on the ruling-fiber diagram.
inline int multiplicity_cap(int g, int n, int host_type)
{
    const int r = branch_point_count(g, n);
    if (n == 2 && g % 2 == 0) return g + 1;
    return r / 2 + host_type;
}

inline bool admissible_mult(int m, int n) { return m >= 2 && (m % n == 0 || m % n == 1); }

// contact order k -> number s_k of virtual branches with that contact
using Profile = std::map<int, int>;

inline int contact_sum(const Profile& p)
{
    int t = 0;
    for (auto [k, s] : p) t += k * s;
    return t;
}

inline int branch_count(const Profile& p)
{
    int b = 0;
    for (auto [k, s] : p) b += s;
    return b;
}

inline int i_max(const Profile& p)
{
    int best = 0;
    for (auto [k, s] : p)
        if (s > 0) best = std::max(best, k);
    return best;
}

// sum_{k >= j} s_k
inline int tail_count(const Profile& p, int j)
{
    int b = 0;
    for (auto it = p.lower_bound(j); it != p.end(); ++it) b += it->second;
    return b;
}

inline std::string profile_string(const Profile& p)
{
    std::string s = "{";
    bool first = true;
    for (auto [k, c] : p) {
        if (!first) s += ",";
        first = false;
        s += std::to_string(k) + ":" + std::to_string(c);
    }
    return s + "}";
}

// Where a bottom-row item of a forked diagram comes from.
enum class Origin { free_item, parent, older };

inline char origin_char(Origin o)
{
    switch (o) {
    case Origin::parent: return 'P';
    case Origin::older: return 'O';
    default: return 'F';
    }
}

struct Column {
    std::vector<int> labels;  // labels[0] is the base point, present even at height 0
    std::vector<int> mults;   // bottom-up
    Profile profile;
    int top_annotation = 0;
    Origin origin = Origin::free_item;

    int height() const { return static_cast<int>(mults.size()); }
};

struct AbstractDiagram {
    int host_type = 0;
    int t = 0;
    std::vector<Column> columns;

    int c() const
    {
        int total = 0;
        for (const auto& col : columns) total += col.height();
        return total;
    }
};

inline int c_i(const Column& col, int n)
{
    int c = 0;
    for (int j = 0; j + 1 < col.height(); ++j)
        if (col.mults[j] % n == 1) ++c;
    return c;
}

// Multiplicities along the host curve from the contact profile; empty when a blow-up never
// happens. nullopt if some step lands outside nZ and nZ+1.
inline std::optional<Column> try_derive_column(const Profile& profile, int host_type, int n)
{
    Column col;
    col.profile = profile;
    int m = tail_count(profile, 1) + host_type;
    int j = 1;
    while (m >= 2) {
        if (!admissible_mult(m, n)) return std::nullopt;
        col.mults.push_back(m);
        const int bump = (m % n == 1) ? 1 : 0;
        ++j;
        m = tail_count(profile, j) + host_type + bump;
    }
    if (host_type == 0 && col.height() > 0) {
        const int im = i_max(profile);
        if (im > col.height()) col.top_annotation = im - col.height();
    }
    return col;
}

inline Column derive_column(const Profile& profile, int host_type, int n)
{
    if (profile.empty()) throw std::invalid_argument("empty contact profile");
    auto col = try_derive_column(profile, host_type, n);
    if (!col) throw std::domain_error("profile inadmissible for this n");
    return *col;
}

struct Violation {
    std::string rule;
    int column = -1;
    int entry = -1;
    std::string message;
};

inline std::vector<Violation> validate_diagram(const AbstractDiagram& d, int n)
{
    std::vector<Violation> out;
    auto add = [&](std::string rule, int i, int j, std::string msg) {
        out.push_back({std::move(rule), i, j, std::move(msg)});
    };
    const int h = d.host_type;
    if (h != 0 && h != 1) add("host-type", -1, -1, "host type must be 0 or 1");

    std::set<int> seen_labels;
    int contact_total = 0;
    long long sum_m = 0, sum_d = 0, sum_ci = 0, extra = 0, extra_rem = 0;
    for (int i = 0; i < static_cast<int>(d.columns.size()); ++i) {
        const Column& col = d.columns[i];
        const auto& m = col.mults;
        const int hb = col.height();
        for (auto [k, s] : col.profile)
            if (k < 1 || s < 0) add("profile", i, -1, "contact orders must be >= 1 and counts >= 0");
        contact_total += contact_sum(col.profile);
        for (int lab : col.labels)
            if (!seen_labels.insert(lab).second)
                add("labels", i, -1, "point label " + std::to_string(lab) + " repeated");

        for (int j = 0; j < hb; ++j)
            if (!admissible_mult(m[j], n))
                add("lemma-1.3", i, j, "multiplicity " + std::to_string(m[j]) + " not in nZ or nZ+1");

        // monotonicity
        for (int j = 0; j + 1 < hb; ++j) {
            if (n >= 3) {
                if (m[j] < m[j + 1]) add("lemma-2.4", i, j, "multiplicities increase going up");
            } else {
                if (m[j] + 1 < m[j + 1]) add("lemma-2.4", i, j, "multiplicity jumps by more than one");
                if (m[j] + 1 == m[j + 1]) {
                    bool ok = (m[j] % 2 == 1) && (j == 0 || m[j - 1] % 2 == 0);
                    if (!ok) add("lemma-2.4", i, j, "increase not allowed by parity");
                }
            }
            if (j >= 1 && m[j - 1] % n == 1 && m[j] % n == 0 && !(m[j] > m[j + 1]))
                add("lemma-2.4", i, j, "entry after an nZ+1 entry must drop");
        }

        if (hb == 0) {
            if (h == 1) add("height-0", i, -1, "a type-1 host cannot carry a height-0 item");
            else if (branch_count(col.profile) != 1)
                add("height-0", i, -1, "a height-0 item is a single branch");
        } else {
            if (h == 1 && m[hb - 1] % n != 0) add("lemma-2.2", i, hb - 1, "top entry of a type-1 column must be in nZ");
            if (h == 1 && col.top_annotation != 0) add("lemma-2.2", i, hb - 1, "type-1 columns carry no annotation");
            const int im = i_max(col.profile);
            if (h == 0 && im > hb) {
                if (m[hb - 1] % n != 0) add("lemma-2.3", i, hb - 1, "top entry below a residual branch must be in nZ");
                for (int k = hb + 1; k < im; ++k)
                    if (col.profile.count(k) && col.profile.at(k) != 0)
                        add("lemma-2.3", i, -1, "gap contacts above the column must vanish");
                if (col.profile.at(im) != 1) add("lemma-2.3", i, -1, "residual branch must be unique");
            }
        }

        if (!col.profile.empty()) {
            auto derived = try_derive_column(col.profile, h, n);
            if (!derived)
                add("derivation", i, -1, "profile " + profile_string(col.profile) + " inadmissible");
            else {
                if (derived->mults != m) add("derivation", i, -1, "multiplicities do not follow from the profile");
                if (hb > 0 && derived->top_annotation != col.top_annotation)
                    add("derivation", i, -1, "top annotation does not follow from the profile");
            }
        } else {
            add("profile", i, -1, "empty contact profile");
        }

        for (int j = 0; j < hb; ++j) {
            sum_m += m[j];
            sum_d += m[j] / n;
        }
        sum_ci += c_i(col, n);
        const int im = i_max(col.profile);
        extra += im - hb;
        extra_rem += im - hb + (hb > 0 ? m[hb - 1] - n * (m[hb - 1] / n) : 0);
    }

    if (contact_total != d.t)
        add("t-balance", -1, -1, "t=" + std::to_string(d.t) + " but contacts sum to " + std::to_string(contact_total));
    const long long t = d.t, c = d.c();
    if (h == 1) {
        if (t + c + sum_ci != sum_m) add("prop-2.6", -1, -1, "t + c + sum c_i differs from sum of m");
        if (t + c != n * sum_d) add("prop-2.6", -1, -1, "(t + c)/n differs from sum of d");
    } else if (h == 0) {
        if (t + sum_ci != sum_m + extra) add("prop-2.7", -1, -1, "first balance equality fails");
        if (t != n * sum_d + extra_rem) add("prop-2.7", -1, -1, "second balance equality fails");
    }
    return out;
}

// ---- JSON ----

inline nlohmann::json profile_to_json(const Profile& p)
{
    nlohmann::json j = nlohmann::json::object();
    for (auto [k, s] : p)
        if (s > 0) j[std::to_string(k)] = s;
    return j;
}

inline Profile profile_from_json(const nlohmann::json& j)
{
    Profile p;
    for (auto it = j.begin(); it != j.end(); ++it) {
        int s = it.value().get<int>();
        if (s > 0) p[std::stoi(it.key())] = s;
    }
    return p;
}

inline nlohmann::json column_to_json(const Column& col)
{
    nlohmann::json j;
    j["mults"] = col.mults;
    j["profile"] = profile_to_json(col.profile);
    j["top_annotation"] = col.top_annotation;
    j["labels"] = col.labels;
    j["origin"] = std::string(1, origin_char(col.origin));
    return j;
}

inline Column column_from_json(const nlohmann::json& j)
{
    Column col;
    col.mults = j.at("mults").get<std::vector<int>>();
    col.profile = profile_from_json(j.at("profile"));
    if (j.contains("top_annotation") && !j["top_annotation"].is_null())
        col.top_annotation = j["top_annotation"].get<int>();
    if (j.contains("labels")) col.labels = j["labels"].get<std::vector<int>>();
    if (j.contains("origin")) {
        auto o = j["origin"].get<std::string>();
        col.origin = o == "P" ? Origin::parent : o == "O" ? Origin::older : Origin::free_item;
    }
    return col;
}

inline nlohmann::json diagram_to_json(const AbstractDiagram& d)
{
    nlohmann::json j;
    j["host_type"] = d.host_type;
    j["t"] = d.t;
    j["columns"] = nlohmann::json::array();
    for (const auto& col : d.columns) j["columns"].push_back(column_to_json(col));
    return j;
}

inline AbstractDiagram diagram_from_json(const nlohmann::json& j)
{
    AbstractDiagram d;
    d.host_type = j.at("host_type").get<int>();
    d.t = j.at("t").get<int>();
    for (const auto& c : j.at("columns")) d.columns.push_back(column_from_json(c));
    return d;
}

// Compact text form, columns separated by '|', stacks written bottom-up in brackets.
inline std::string diagram_string(const AbstractDiagram& d)
{
    std::ostringstream os;
    os << "D^" << d.host_type << "(t=" << d.t << ") ";
    bool first = true;
    for (const auto& col : d.columns) {
        if (!first) os << " | ";
        first = false;
        if (col.height() == 0) {
            os << "(" << i_max(col.profile) << ")";
            continue;
        }
        os << "[";
        for (int j = 0; j < col.height(); ++j) os << (j ? "," : "") << col.mults[j];
        os << "]" << profile_string(col.profile);
        if (col.top_annotation) os << "^" << col.top_annotation;
    }
    return os.str();
}

} // namespace cfl
