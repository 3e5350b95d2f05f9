// trees.hpp
//
// Labeled dual graphs of genus-zero stable maps to a surface, and the
// combinatorial sheaf bookkeeping attached to them: per-component free
// degrees and Euler characteristic of the twisted conormal sheaf, the
// pulled-back tangent/cotangent degree tables, a randomized exact count
// of glued tangent sections, and expected moduli dimensions.
//
// A dual graph is a tree with one vertex per component (either a divisor
// class with a ramification degree, or a contracted marker) and one edge
// per node.  Node labels:
//   tau_uu  transverse, both branches unramified
//   tau_ur  transverse, exactly one branch ramified (oriented)
//   tau_rr  transverse, both ramified
//   nu_2    simply tangent
//   nu_l    higher tangency
//   rho_u   one branch contracted, the other unramified
//   rho_r   one branch contracted, the other ramified
// tau/nu edges join two non-contracted vertices, rho edges join a
// contracted vertex to a non-contracted one.  Contracted vertices must
// have valence >= 3 (stability) and carry no ramification.

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "delpezzo/lattice.hpp"

namespace delpezzo {

enum class NodeType { tau_uu, tau_ur, tau_rr, nu_2, nu_l, rho_u, rho_r };

inline bool is_rho(NodeType t) { return t == NodeType::rho_u || t == NodeType::rho_r; }

inline const char* node_type_name(NodeType t) {
    switch (t) {
        case NodeType::tau_uu: return "tau_uu";
        case NodeType::tau_ur: return "tau_ur";
        case NodeType::tau_rr: return "tau_rr";
        case NodeType::nu_2: return "nu_2";
        case NodeType::nu_l: return "nu_l";
        case NodeType::rho_u: return "rho_u";
        case NodeType::rho_r: return "rho_r";
    }
    return "?";
}

inline std::optional<NodeType> node_type_from_name(const std::string& s) {
    for (NodeType t : {NodeType::tau_uu, NodeType::tau_ur, NodeType::tau_rr, NodeType::nu_2,
                       NodeType::nu_l, NodeType::rho_u, NodeType::rho_r})
        if (s == node_type_name(t)) return t;
    return std::nullopt;
}

struct GraphVertex {
    std::optional<DivisorClass> image_class;  // empty = contracted component
    Coeff ramification = 0;                   // deg Q_i, the cokernel divisor degree

    bool contracted() const { return !image_class.has_value(); }
};

struct GraphEdge {
    int u = 0, v = 0;
    NodeType type = NodeType::tau_uu;
    int ramified_end = -1;  // tau_ur: which endpoint carries the ramification
    // rho edges only: does this branch run along the shared tangent line
    // at the contracted point, rather than in its own generic direction?
    bool coincident_direction = false;
};

class DualGraph {
  public:
    std::vector<GraphVertex> vertices;
    std::vector<GraphEdge> edges;

    std::size_t vertex_count() const { return vertices.size(); }
    std::size_t edge_count() const { return edges.size(); }

    int valence(int v) const {
        int n = 0;
        for (const auto& e : edges)
            if (e.u == v || e.v == v) ++n;
        return n;
    }

    /// Structural and labeling checks; throws std::invalid_argument.
    void validate(const LatticeContext& ctx) const {
        const int n = static_cast<int>(vertices.size());
        if (n == 0) throw std::invalid_argument("dual graph: empty");
        if (edges.size() + 1 != vertices.size())
            throw std::invalid_argument("dual graph: not a tree (edge count)");
        std::vector<int> parent(vertices.size());
        for (int i = 0; i < n; ++i) parent[static_cast<std::size_t>(i)] = i;
        auto root = [&](int x) {
            while (parent[static_cast<std::size_t>(x)] != x) x = parent[static_cast<std::size_t>(x)];
            return x;
        };
        for (const auto& e : edges) {
            if (e.u < 0 || e.u >= n || e.v < 0 || e.v >= n || e.u == e.v)
                throw std::invalid_argument("dual graph: bad edge endpoints");
            int ru = root(e.u), rv = root(e.v);
            if (ru == rv) throw std::invalid_argument("dual graph: cycle");
            parent[static_cast<std::size_t>(ru)] = rv;

            const bool cu = vertices[static_cast<std::size_t>(e.u)].contracted();
            const bool cv = vertices[static_cast<std::size_t>(e.v)].contracted();
            if (cu && cv)
                throw std::invalid_argument("dual graph: adjacent contracted components unsupported");
            if (is_rho(e.type) != (cu || cv))
                throw std::invalid_argument("dual graph: rho labels exactly the contracted edges");
            if (e.type == NodeType::tau_ur && e.ramified_end != e.u && e.ramified_end != e.v)
                throw std::invalid_argument("dual graph: tau_ur edge needs an oriented ramified end");
            if (e.coincident_direction && !is_rho(e.type))
                throw std::invalid_argument("dual graph: coincident_direction is for rho edges");
        }
        for (int i = 0; i < n; ++i) {
            const auto& vert = vertices[static_cast<std::size_t>(i)];
            if (vert.contracted()) {
                if (valence(i) < 3)
                    throw std::invalid_argument("dual graph: contracted component of valence < 3");
                if (vert.ramification != 0)
                    throw std::invalid_argument("dual graph: contracted component with ramification");
            } else {
                require_in_context(ctx, *vert.image_class);
                if (vert.ramification < 0)
                    throw std::invalid_argument("dual graph: negative ramification degree");
            }
        }
        if (n > 1)
            for (int i = 1; i < n; ++i)
                if (root(i) != root(0)) throw std::invalid_argument("dual graph: disconnected");
    }

    // Per-vertex node counters.
    int count_incident(int v, NodeType t) const {
        int n = 0;
        for (const auto& e : edges)
            if (e.type == t && (e.u == v || e.v == v)) ++n;
        return n;
    }
    /// Transverse nodes on v whose ramified branch is v itself.
    int count_tau_ru(int v) const {
        int n = 0;
        for (const auto& e : edges)
            if (e.type == NodeType::tau_ur && e.ramified_end == v) ++n;
        return n;
    }
    int count_total(NodeType t) const {
        int n = 0;
        for (const auto& e : edges)
            if (e.type == t) ++n;
        return n;
    }
};

/// Free-part degree of the twisted conormal sheaf on each non-contracted
/// component: K.C_i + deg Q_i - tau_ru^i + nu_l^i + rho_u^i + rho_r^i.
/// Contracted slots are empty.
inline std::vector<std::optional<Coeff>> conormal_degrees(const DualGraph& g,
                                                          const LatticeContext& ctx) {
    g.validate(ctx);
    std::vector<std::optional<Coeff>> out(g.vertex_count());
    for (int i = 0; i < static_cast<int>(g.vertex_count()); ++i) {
        const auto& vert = g.vertices[static_cast<std::size_t>(i)];
        if (vert.contracted()) continue;
        Coeff deg = intersect(ctx, canonical_class(ctx), *vert.image_class);
        deg = checked_add(deg, vert.ramification);
        deg -= g.count_tau_ru(i);
        deg += g.count_incident(i, NodeType::nu_l);
        deg += g.count_incident(i, NodeType::rho_u);
        deg += g.count_incident(i, NodeType::rho_r);
        out[static_cast<std::size_t>(i)] = deg;
    }
    return out;
}

/// chi of the twisted conormal sheaf:
/// K.f_*[C] + sum Q_i + 1 + #tau_rr + #nu_2 + 2 #nu_l + #rho_u + 2 #rho_r - 3r,
/// r the number of connected components of the contracted part.
inline Coeff conormal_chi(const DualGraph& g, const LatticeContext& ctx) {
    g.validate(ctx);
    Coeff chi = 1;
    Coeff contracted = 0;
    for (const auto& vert : g.vertices) {
        if (vert.contracted()) {
            ++contracted;  // adjacent contracted components are rejected, so r counts vertices
            continue;
        }
        chi = checked_add(chi, intersect(ctx, canonical_class(ctx), *vert.image_class));
        chi = checked_add(chi, vert.ramification);
    }
    chi += g.count_total(NodeType::tau_rr);
    chi += g.count_total(NodeType::nu_2);
    chi += 2 * g.count_total(NodeType::nu_l);
    chi += g.count_total(NodeType::rho_u);
    chi += 2 * g.count_total(NodeType::rho_r);
    chi -= 3 * contracted;
    return chi;
}

/// chi(f^* T_X) = sum_i chi_i - 2 #nodes, with chi_i = -K.C_i + 2 on
/// non-contracted components and 2 on contracted ones.
inline Coeff tangent_chi(const DualGraph& g, const LatticeContext& ctx) {
    g.validate(ctx);
    Coeff chi = 0;
    for (const auto& vert : g.vertices) {
        if (vert.contracted()) chi = checked_add(chi, 2);
        else chi = checked_add(chi, checked_add(anticanonical_degree(ctx, *vert.image_class), 2));
    }
    return chi - 2 * static_cast<Coeff>(g.edge_count());
}

/// Degree pairs of the pulled-back cotangent sheaf twisted by omega:
/// a non-contracted component of anticanonical degree d and valence v
/// gets (-d - 1 + v - 2, 1 + v - 2); a contracted one gets (v-2, v-2).
/// The split (-d-1, 1) matches the displayed computations for d = 1;
/// for d > 1 it is a modeling convention for the same total degree.
inline std::vector<std::pair<Coeff, Coeff>> cotangent_omega_degrees(const DualGraph& g,
                                                                    const LatticeContext& ctx) {
    g.validate(ctx);
    std::vector<std::pair<Coeff, Coeff>> out;
    for (int i = 0; i < static_cast<int>(g.vertex_count()); ++i) {
        const auto& vert = g.vertices[static_cast<std::size_t>(i)];
        const Coeff v = g.valence(i);
        if (vert.contracted()) {
            out.emplace_back(v - 2, v - 2);
        } else {
            const Coeff d = anticanonical_degree(ctx, *vert.image_class);
            out.emplace_back(-d - 1 + v - 2, 1 + v - 2);
        }
    }
    return out;
}

/// Sufficient unobstructedness test for graphs with no contracted
/// components: true when every conormal free degree is <= -1 (the sheaf
/// is a pushforward of negative line bundles, so it has no sections).
/// False means unknown, not obstructed.
inline bool unobstructed_sufficient(const DualGraph& g, const LatticeContext& ctx) {
    for (const auto& vert : g.vertices)
        if (vert.contracted())
            throw std::invalid_argument("unobstructed_sufficient: contracted components unsupported");
    for (const auto& deg : conormal_degrees(g, ctx))
        if (deg && *deg > -1) return false;
    return true;
}

/// Expected dimension of the space of birational genus-zero maps in class
/// beta through r general points: d - r - 1 with d = -K.beta, valid for
/// 0 <= r <= d - 1.
inline Coeff moduli_expected_dim(const LatticeContext& ctx, const DivisorClass& beta,
                                 Coeff r_points) {
    const Coeff d = anticanonical_degree(ctx, beta);
    if (d < 1) throw std::invalid_argument("moduli_expected_dim: anticanonical degree must be >= 1");
    if (r_points < 0) throw std::invalid_argument("moduli_expected_dim: negative point count");
    if (r_points > d - 1)
        throw std::invalid_argument("moduli_expected_dim: overdetermined (needs r <= d-1)");
    return d - r_points - 1;
}

// ---------------------------------------------------------------------------
// Generic section count for the pulled-back tangent sheaf.
//
// Model: on each non-contracted component the sheaf is a degree-2 line
// summand (the component tangent, section space of dimension 3) plus a
// degree -1 summand with no sections; a contracted component contributes
// the constant sections of a trivial rank-2 bundle.  At every node the
// two branch values must agree in the 2-dimensional tangent space of the
// surface at the image point.  Node positions and branch directions are
// drawn uniformly from F_p with p = 2^31 - 1; tangent edges (nu types)
// share the branch direction, transverse edges get independent ones, and
// rho edges take either the contracted point's common line or a fresh
// generic direction per the edge flag.  h0 is the kernel dimension of the
// gluing matrix; the rank is recomputed with three derived seeds and must
// agree.  h1 is reported as h0 - (3 n_free + 2 n_contracted - 2 #nodes),
// which equals h0 - tangent_chi when every non-contracted component has
// anticanonical degree one (the case the model is calibrated to).
// ---------------------------------------------------------------------------

struct SectionCount {
    Coeff h0 = 0;
    Coeff h1 = 0;
};

namespace detail {

constexpr std::uint64_t field_prime = 2147483647ull;  // 2^31 - 1

inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

inline std::uint64_t mod_mul(std::uint64_t a, std::uint64_t b) { return a * b % field_prime; }

inline std::uint64_t mod_pow(std::uint64_t a, std::uint64_t e) {
    std::uint64_t r = 1;
    a %= field_prime;
    while (e) {
        if (e & 1) r = mod_mul(r, a);
        a = mod_mul(a, a);
        e >>= 1;
    }
    return r;
}

inline std::uint64_t mod_inv(std::uint64_t a) { return mod_pow(a, field_prime - 2); }

// Row-echelon rank over F_p.
inline std::size_t matrix_rank(std::vector<std::vector<std::uint64_t>> m) {
    std::size_t rank = 0;
    const std::size_t rows = m.size();
    if (rows == 0) return 0;
    const std::size_t cols = m[0].size();
    for (std::size_t col = 0; col < cols && rank < rows; ++col) {
        std::size_t pivot = rank;
        while (pivot < rows && m[pivot][col] == 0) ++pivot;
        if (pivot == rows) continue;
        std::swap(m[rank], m[pivot]);
        const std::uint64_t inv = mod_inv(m[rank][col]);
        for (std::size_t j = col; j < cols; ++j) m[rank][j] = mod_mul(m[rank][j], inv);
        for (std::size_t r = 0; r < rows; ++r) {
            if (r == rank || m[r][col] == 0) continue;
            const std::uint64_t f = m[r][col];
            for (std::size_t j = col; j < cols; ++j) {
                std::uint64_t sub = mod_mul(f, m[rank][j]);
                m[r][j] = (m[r][j] + field_prime - sub) % field_prime;
            }
        }
        ++rank;
    }
    return rank;
}

struct FieldDraw {
    std::uint64_t state;
    std::uint64_t nonzero() {
        std::uint64_t x;
        do { x = splitmix64(state) % field_prime; } while (x == 0);
        return x;
    }
    std::uint64_t any() { return splitmix64(state) % field_prime; }
    std::array<std::uint64_t, 2> direction() { return {any(), nonzero()}; }
};

inline bool independent(const std::array<std::uint64_t, 2>& x,
                        const std::array<std::uint64_t, 2>& y) {
    std::uint64_t det = (mod_mul(x[0], y[1]) + field_prime - mod_mul(x[1], y[0])) % field_prime;
    return det != 0;
}

}  // namespace detail

inline SectionCount generic_h0_tangent(const DualGraph& g, const LatticeContext& ctx,
                                       std::uint64_t seed = 1) {
    g.validate(ctx);
    const int n = static_cast<int>(g.vertex_count());

    // Column layout: 3 unknowns per non-contracted vertex, 2 per contracted.
    std::vector<std::size_t> col_of(static_cast<std::size_t>(n));
    std::size_t ncols = 0;
    for (int i = 0; i < n; ++i) {
        col_of[static_cast<std::size_t>(i)] = ncols;
        ncols += g.vertices[static_cast<std::size_t>(i)].contracted() ? 2 : 3;
    }

    auto rank_for_seed = [&](std::uint64_t s) -> std::size_t {
        detail::FieldDraw rng{s * 0x9e3779b97f4a7c15ull + 0x243f6a8885a308d3ull};
        // Node parameters, distinct within each vertex.
        std::vector<std::vector<std::uint64_t>> params(g.vertex_count());
        auto fresh_param = [&](int v) {
            auto& used = params[static_cast<std::size_t>(v)];
            std::uint64_t t;
            bool dup;
            do {
                t = rng.any();
                dup = false;
                for (std::uint64_t u : used) dup = dup || (u == t);
            } while (dup);
            used.push_back(t);
            return t;
        };
        // Shared tangent line at each contracted vertex, plus the list of
        // directions already used there (fresh ones must stay independent).
        std::vector<std::array<std::uint64_t, 2>> shared_line(g.vertex_count());
        std::vector<std::vector<std::array<std::uint64_t, 2>>> used_dirs(g.vertex_count());
        for (int i = 0; i < n; ++i)
            if (g.vertices[static_cast<std::size_t>(i)].contracted())
                shared_line[static_cast<std::size_t>(i)] = rng.direction();

        std::vector<std::vector<std::uint64_t>> mat;
        auto add_rows = [&](int vert_a, std::uint64_t t_a, std::array<std::uint64_t, 2> dir_a,
                            int vert_b, std::uint64_t t_b, std::array<std::uint64_t, 2> dir_b) {
            // value(a) - value(b) = 0 in F_p^2
            for (int comp = 0; comp < 2; ++comp) {
                std::vector<std::uint64_t> row(ncols, 0);
                auto emit = [&](int v, std::uint64_t t, std::array<std::uint64_t, 2> dir,
                                bool negate) {
                    const std::size_t c0 = col_of[static_cast<std::size_t>(v)];
                    if (g.vertices[static_cast<std::size_t>(v)].contracted()) {
                        std::uint64_t x = (comp == 0) ? 1 : 0;
                        std::uint64_t y = (comp == 0) ? 0 : 1;
                        row[c0] = negate ? (detail::field_prime - x) % detail::field_prime : x;
                        row[c0 + 1] = negate ? (detail::field_prime - y) % detail::field_prime : y;
                    } else {
                        std::uint64_t powt = 1;
                        for (int k = 0; k < 3; ++k) {
                            std::uint64_t coef = detail::mod_mul(dir[static_cast<std::size_t>(comp)], powt);
                            if (negate) coef = (detail::field_prime - coef) % detail::field_prime;
                            row[c0 + static_cast<std::size_t>(k)] =
                                (row[c0 + static_cast<std::size_t>(k)] + coef) % detail::field_prime;
                            powt = detail::mod_mul(powt, t);
                        }
                    }
                };
                emit(vert_a, t_a, dir_a, false);
                emit(vert_b, t_b, dir_b, true);
                mat.push_back(std::move(row));
            }
        };

        for (const auto& e : g.edges) {
            const bool cu = g.vertices[static_cast<std::size_t>(e.u)].contracted();
            const bool cv = g.vertices[static_cast<std::size_t>(e.v)].contracted();
            if (!cu && !cv) {
                const std::uint64_t tu = fresh_param(e.u), tv = fresh_param(e.v);
                std::array<std::uint64_t, 2> du = rng.direction();
                std::array<std::uint64_t, 2> dv;
                if (e.type == NodeType::nu_2 || e.type == NodeType::nu_l) {
                    dv = du;  // tangent branches share the direction
                } else {
                    do { dv = rng.direction(); } while (!detail::independent(du, dv));
                }
                add_rows(e.u, tu, du, e.v, tv, dv);
            } else {
                const int c = cu ? e.u : e.v;
                const int f = cu ? e.v : e.u;
                const std::uint64_t tf = fresh_param(f);
                std::array<std::uint64_t, 2> dir;
                if (e.coincident_direction) {
                    dir = shared_line[static_cast<std::size_t>(c)];
                } else {
                    auto& used = used_dirs[static_cast<std::size_t>(c)];
                    bool ok;
                    do {
                        dir = rng.direction();
                        ok = detail::independent(dir, shared_line[static_cast<std::size_t>(c)]);
                        for (const auto& d : used) ok = ok && detail::independent(dir, d);
                    } while (!ok);
                    used.push_back(dir);
                }
                add_rows(f, tf, dir, c, 0, dir);
            }
        }
        if (mat.empty()) return 0;
        return detail::matrix_rank(std::move(mat));
    };

    std::uint64_t mix = seed;
    const std::size_t r0 = rank_for_seed(detail::splitmix64(mix));
    const std::size_t r1 = rank_for_seed(detail::splitmix64(mix));
    const std::size_t r2 = rank_for_seed(detail::splitmix64(mix));
    if (r0 != r1 || r1 != r2)
        throw std::runtime_error("generic_h0_tangent: rank unstable across draws");

    Coeff free_count = 0, contracted_count = 0;
    for (const auto& vert : g.vertices) (vert.contracted() ? contracted_count : free_count) += 1;
    const Coeff chi_model =
        3 * free_count + 2 * contracted_count - 2 * static_cast<Coeff>(g.edge_count());
    SectionCount sc;
    sc.h0 = static_cast<Coeff>(ncols) - static_cast<Coeff>(r0);
    sc.h1 = sc.h0 - chi_model;
    return sc;
}

}  // namespace delpezzo
