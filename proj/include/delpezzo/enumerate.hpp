// enumerate.hpp
//
// Exhaustive enumeration of divisor classes with prescribed anticanonical
// degree d = -K.C and self-intersection s = C^2 on a plane blow-up.
//
// The system { 3a - sum b_i = d, a^2 - sum b_i^2 = s } is equivalent to
// the completed-square form
//
//     sum_{i<=8} (a - 2 b_i - d)^2 = 4 (d^2 - s)      (b_i = 0 for i > delta)
//
// which bounds every coordinate once d^2 >= s: each |a - 2b_i - d| is at
// most 2*sqrt(d^2 - s), and summing gives |2a - 6d| <= sqrt(32 (d^2 - s)).
// The search iterates a over that window and backtracks over the b_i with
// running-sum pruning on both constraints.

#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "delpezzo/lattice.hpp"

namespace delpezzo {

struct EnumerationQuery {
    LatticeContext ctx;
    Coeff degree;             // d = -K.C, must be >= 1
    Coeff self_intersection;  // s = C^2, must satisfy d^2 >= s
};

/// Lexicographically sorted, duplicate-free list of all solutions.
struct ClassCatalog {
    EnumerationQuery query;
    std::vector<DivisorClass> classes;

    std::size_t size() const { return classes.size(); }
    bool contains(const DivisorClass& c) const {
        return std::binary_search(classes.begin(), classes.end(), c);
    }
};

namespace detail {

// floor(sqrt(n)) for n >= 0.
inline Coeff isqrt(Coeff n) {
    if (n < 0) throw std::invalid_argument("isqrt: negative");
    Coeff r = static_cast<Coeff>(std::sqrt(static_cast<double>(n)));
    while (r > 0 && r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

inline Coeff div_floor(Coeff num, Coeff den) {
    Coeff q = num / den, r = num % den;
    return (r != 0 && (r < 0) != (den < 0)) ? q - 1 : q;
}

inline Coeff div_ceil(Coeff num, Coeff den) { return -div_floor(-num, den); }

}  // namespace detail

inline ClassCatalog enumerate_classes(const EnumerationQuery& q) {
    if (!q.ctx.is_blowup_plane())
        throw std::invalid_argument("enumerate_classes: unsupported context (quadric)");
    if (q.degree < 1) throw std::invalid_argument("enumerate_classes: degree must be >= 1");
    const Coeff d = q.degree, s = q.self_intersection;
    const Coeff disc = checked_sub(checked_mul(d, d), s);
    if (disc < 0) throw std::invalid_argument("enumerate_classes: unbounded query (d^2 < s)");

    const int delta = q.ctx.delta();
    const Coeff a_rad = detail::isqrt(checked_mul(32, disc));     // |2a - 6d| <= a_rad
    const Coeff b_rad = detail::isqrt(checked_mul(4, disc));      // |a - 2b - d| <= b_rad
    const Coeff a_lo = detail::div_ceil(checked_sub(checked_mul(6, d), a_rad), 2);
    const Coeff a_hi = detail::div_floor(checked_add(checked_mul(6, d), a_rad), 2);

    ClassCatalog cat{q, {}};
    std::vector<Coeff> b(static_cast<std::size_t>(delta), 0);
    for (Coeff a = a_lo; a <= a_hi; ++a) {
        const Coeff lin = checked_sub(checked_mul(3, a), d);        // required sum of b_i
        const Coeff quad = checked_sub(checked_mul(a, a), s);       // required sum of b_i^2
        if (quad < 0) continue;
        const Coeff b_lo = detail::div_ceil(a - d - b_rad, 2);
        const Coeff b_hi = detail::div_floor(a - d + b_rad, 2);
        if (delta > 0 && b_lo > b_hi) continue;
        const Coeff b_sq = std::max(b_lo * b_lo, b_hi * b_hi);

        // Depth-first over b_1..b_delta with linear, quadratic and
        // Cauchy-Schwarz pruning on the remaining coordinates.
        auto dfs = [&](auto&& self, int i, Coeff lrem, Coeff qrem) -> void {
            if (qrem < 0) return;
            const Coeff rem = delta - i;
            if (rem == 0) {
                if (lrem == 0 && qrem == 0) {
                    std::vector<Coeff> v;
                    v.reserve(static_cast<std::size_t>(delta) + 1);
                    v.push_back(a);
                    v.insert(v.end(), b.begin(), b.end());
                    cat.classes.emplace_back(std::move(v));
                }
                return;
            }
            if (lrem < rem * b_lo || lrem > rem * b_hi) return;
            if (qrem > rem * b_sq) return;
            if (lrem * lrem > rem * qrem) return;
            for (Coeff x = b_lo; x <= b_hi; ++x) {
                b[static_cast<std::size_t>(i)] = x;
                self(self, i + 1, lrem - x, qrem - x * x);
            }
        };
        dfs(dfs, 0, lin, quad);
    }
    std::sort(cat.classes.begin(), cat.classes.end());

    // Self-check of the completed-square identity on every solution.
    for (const DivisorClass& c : cat.classes) {
        Coeff total = 0;
        for (int i = 1; i <= delta; ++i) {
            Coeff t = c[0] - 2 * c[static_cast<std::size_t>(i)] - d;
            total += t * t;
        }
        total += static_cast<Coeff>(8 - delta) * (c[0] - d) * (c[0] - d);
        if (total != 4 * disc)
            throw std::logic_error("enumerate_classes: completed-square identity violated");
    }
    return cat;
}

namespace detail {

// In-process memo for (delta, d, s) catalogs; get-or-compute under a lock.
inline const ClassCatalog& memoized_catalog(const LatticeContext& ctx, Coeff d, Coeff s) {
    static std::mutex mu;
    static std::map<std::tuple<int, Coeff, Coeff>, std::unique_ptr<const ClassCatalog>> table;
    const auto key = std::make_tuple(ctx.delta(), d, s);
    std::lock_guard<std::mutex> lock(mu);
    auto it = table.find(key);
    if (it == table.end()) {
        auto cat = std::make_unique<const ClassCatalog>(enumerate_classes({ctx, d, s}));
        it = table.emplace(key, std::move(cat)).first;
    }
    return *it->second;
}

}  // namespace detail

/// All (-1)-classes: d = 1, s = -1.
inline const ClassCatalog& exceptional_classes(const LatticeContext& ctx) {
    if (!ctx.is_blowup_plane())
        throw std::invalid_argument("exceptional_classes: unsupported context");
    return detail::memoized_catalog(ctx, 1, -1);
}

/// All conic classes: d = 2, s = 0.
inline const ClassCatalog& conic_classes(const LatticeContext& ctx) {
    if (!ctx.is_blowup_plane())
        throw std::invalid_argument("conic_classes: unsupported context");
    return detail::memoized_catalog(ctx, 2, 0);
}

namespace detail {

struct ConicNameSignature {
    char letter;
    bool primed;
    int n_sub;
    int n_sup;
    Coeff a;          // coefficient of l
    Coeff ebar;       // coefficient of -Ebar = -(e_1 + ... + e_8)
    Coeff sub_shift;  // added to b at subscript indices
    Coeff sup_shift;  // added to b at superscript indices
};

// Conic naming table on X_8 (Ebar below means e_1 + ... + e_8):
//   A_i      = l - e_i                    B_ijkl  = 2l - e_i - e_j - e_k - e_l
//   C_i^jk   = 3l - Ebar - e_i + e_j+e_k  D_ijk^l = 4l - Ebar - e_i-e_j-e_k + e_l
//   E_i^j    = 5l - 2Ebar + e_i + 2e_j    D'_i    = 4l - Ebar - 2e_i
//   F_i^jkl  = 5l - Ebar - 2e_i - e_j-e_k-e_l
//   G_ij^kl  = 6l - 2Ebar - e_i-e_j + e_k+e_l
//   H_ijk^l  = 7l - 3Ebar + e_i+e_j+e_k + 2e_l
//   H'_i^j   = 7l - 2Ebar - 2e_i - e_j    I_i^jkl = 8l - 3Ebar - e_i + e_j+e_k+e_l
//   I'_i     = 8l - 3Ebar + 2e_i          J_ij^k  = 9l - 3Ebar - e_i-e_j + e_k
//   K_ijkl   = 10l - 3Ebar - e_i-e_j-e_k-e_l
//   L_i      = 11l - 4Ebar + e_i
// Stored as b-shifts: class = (a; b) with b_m = ebar everywhere, then
// sub_shift added at subscripts and sup_shift at superscripts.
inline const std::vector<ConicNameSignature>& conic_name_table() {
    static const std::vector<ConicNameSignature> table = {
        {'A', false, 1, 0, 1, 0, 1, 0},  {'B', false, 4, 0, 2, 0, 1, 0},
        {'C', false, 1, 2, 3, 1, 1, -1}, {'D', false, 3, 1, 4, 1, 1, -1},
        {'E', false, 1, 1, 5, 2, -1, -2}, {'D', true, 1, 0, 4, 1, 2, 0},
        {'F', false, 1, 3, 5, 1, 2, 1},  {'G', false, 2, 2, 6, 2, 1, -1},
        {'H', false, 3, 1, 7, 3, -1, -2}, {'H', true, 1, 1, 7, 2, 2, 1},
        {'I', false, 1, 3, 8, 3, 1, -1}, {'I', true, 1, 0, 8, 3, -2, 0},
        {'J', false, 2, 1, 9, 3, 1, -1}, {'K', false, 4, 0, 10, 3, 1, 0},
        {'L', false, 1, 0, 11, 4, -1, 0},
    };
    return table;
}

inline std::vector<int> parse_indices(std::string_view s) {
    std::vector<int> out;
    for (char ch : s) {
        if (ch == '{' || ch == '}' || ch == ',') continue;
        if (ch < '1' || ch > '8') throw std::invalid_argument("named_conic: bad index digit");
        out.push_back(ch - '0');
    }
    return out;
}

}  // namespace detail

/// Parse a conic name such as "A_1", "B_{1234}", "D_{234}^1", "E_1^8",
/// "D'_1", "H'_1^2" or "I'_1" and build the class in the given context.
/// The name must describe a conic with support inside 1..delta.
inline DivisorClass named_conic(const LatticeContext& ctx, std::string_view name) {
    if (!ctx.is_blowup_plane())
        throw std::invalid_argument("named_conic: unsupported context");
    if (name.empty()) throw std::invalid_argument("named_conic: empty name");

    char letter = name[0];
    std::size_t pos = 1;
    bool primed = false;
    if (pos < name.size() && (name[pos] == '\'' || name[pos] == '`')) {
        primed = true;
        ++pos;
    }
    auto caret = name.find('^', pos);
    std::string_view sub_part, sup_part;
    if (pos < name.size() && name[pos] == '_') ++pos;
    if (caret == std::string_view::npos) {
        sub_part = name.substr(pos);
    } else {
        sub_part = name.substr(pos, caret - pos);
        sup_part = name.substr(caret + 1);
    }
    std::vector<int> subs = detail::parse_indices(sub_part);
    std::vector<int> sups = detail::parse_indices(sup_part);

    const detail::ConicNameSignature* sig = nullptr;
    for (const auto& t : detail::conic_name_table()) {
        if (t.letter == letter && t.primed == primed &&
            t.n_sub == static_cast<int>(subs.size()) && t.n_sup == static_cast<int>(sups.size())) {
            sig = &t;
            break;
        }
    }
    if (!sig) throw std::invalid_argument("named_conic: unknown name shape: " + std::string(name));

    std::vector<int> all = subs;
    all.insert(all.end(), sups.begin(), sups.end());
    std::sort(all.begin(), all.end());
    if (std::adjacent_find(all.begin(), all.end()) != all.end())
        throw std::invalid_argument("named_conic: repeated index");

    // Build on eight coordinates, then require vanishing beyond delta.
    std::vector<Coeff> v(9, sig->ebar);
    v[0] = sig->a;
    for (int i : subs) v[static_cast<std::size_t>(i)] += sig->sub_shift;
    for (int i : sups) v[static_cast<std::size_t>(i)] += sig->sup_shift;
    const int delta = ctx.delta();
    for (int i = delta + 1; i <= 8; ++i)
        if (v[static_cast<std::size_t>(i)] != 0)
            throw std::invalid_argument("named_conic: name does not live on this delta");
    v.resize(static_cast<std::size_t>(delta) + 1);

    DivisorClass c(std::move(v));
    if (!is_conic_class(ctx, c))
        throw std::logic_error("named_conic: built class is not a conic");
    return c;
}

}  // namespace delpezzo
