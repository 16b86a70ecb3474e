#pragma once

#include "branch_sim.hpp"
#include "rational.hpp"

namespace cfl {

struct InvariantVector {
    int alpha0 = 0;
    std::vector<int> alpha;  // alpha[k-1] = alpha_k
    int epsilon = 0;

    int alpha_k(int k) const { return k >= 1 && k <= static_cast<int>(alpha.size()) ? alpha[k - 1] : 0; }
};

namespace detail {
inline std::vector<int> bucket_alpha(const std::vector<int>& mults, int n, int r)
{
    // At least floor(r/2n) slots; longer when a point of higher multiplicity occurs (the 6-point
    // of a genus-3 double cover). Its coefficient in the index formulas is then zero.
    std::vector<int> alpha(std::max(0, r / (2 * n)), 0);
    for (int m : mults) {
        const int k = m / n;
        if (k < 1) continue;
        if (k > static_cast<int>(alpha.size())) alpha.resize(k, 0);
        ++alpha[k - 1];
    }
    return alpha;
}
} // namespace detail

// Number of distinct singular points of multiplicity kn or kn+1.
inline std::vector<int> alpha_indices(const DiagramSequence& seq, int n, int r)
{
    std::map<int, int> mult_of;
    for (const auto& d : seq.diagrams)
        for (const auto& col : d.columns)
            for (int j = 0; j < col.height(); ++j) mult_of[col.labels.at(j)] = col.mults[j];
    std::vector<int> mults;
    for (auto [lab, m] : mult_of) mults.push_back(m);
    return detail::bucket_alpha(mults, n, r);
}

// Same count read off a resolution trace.
inline std::vector<int> alpha_indices(const BranchConfiguration& cfg)
{
    std::vector<int> mults;
    for (const auto& ev : cfg.trace) mults.push_back(ev.multiplicity);
    return detail::bucket_alpha(mults, cfg.params.n, cfg.params.r);
}

inline int epsilon_index(const BranchConfiguration& cfg, int n)
{
    int eps = 0;
    for (const auto& c : cfg.components)
        if (c.in_branch && c.self_intersection == -n) ++eps;
    return eps;
}

namespace detail {
inline void check_nr(int n, int r)
{
    if (n < 2 || (2 * n - 1) * r <= 3 * n) throw std::invalid_argument("need r > 3n/(2n-1)");
}
} // namespace detail

// Coefficient of alpha_k in the Horikawa index.
inline Rational horikawa_coefficient(int n, int r, int k)
{
    detail::check_nr(n, r);
    Rational c(static_cast<std::int64_t>(n + 1) * (n - 1) * (r - n * k) * k, (2 * n - 1) * r - 3 * n);
    return Rational(n) * (c - 1);
}

inline Rational horikawa_index(int n, int r, const InvariantVector& v)
{
    Rational ind = v.epsilon;
    for (int k = 1; k <= static_cast<int>(v.alpha.size()); ++k) ind += horikawa_coefficient(n, r, k) * v.alpha[k - 1];
    return ind;
}

inline Rational local_signature(int n, int r, const InvariantVector& v)
{
    detail::check_nr(n, r);
    const std::int64_t nn = n, rr = r;
    Rational s = -Rational((nn - 1) * (nn + 1) * rr, 3 * nn * (rr - 1)) * v.alpha0;
    for (int k = 1; k <= static_cast<int>(v.alpha.size()); ++k) {
        const std::int64_t kk = k;
        Rational c = Rational((nn - 1) * (nn + 1) * (-nn * kk * kk + rr * kk), 3 * (rr - 1)) - nn;
        s += c * v.alpha[k - 1];
    }
    s += Rational((nn + 2) * (2 * nn - 1) * rr - 3 * nn, 3 * nn * (rr - 1)) * v.epsilon;
    return s;
}

inline Rational slope_coefficient(int g, int n)
{
    if (g < 2 || n < 2) throw std::invalid_argument("need g >= 2 and n >= 2");
    return Rational(24 * static_cast<std::int64_t>(g - 1) * (n - 1),
                    2 * static_cast<std::int64_t>(2 * n - 1) * (g - 1) + static_cast<std::int64_t>(n) * (n + 1));
}

} // namespace cfl
