// weyl.hpp
//
// The Weyl group W_delta of the Picard lattice, generated by the adjacent
// index transpositions and the quadratic transform T_123, together with
// orbit machinery: breadth-first orbit enumeration with optional caps,
// canonical-form membership tests, word recording, orbits of conic pairs,
// stabilizer orbits, and the triple-sum orbit partition on the degree-one
// surface.
//
// Every generator is an involution, so the inverse of a recorded word is
// the same word reversed.

#pragma once

#include <algorithm>
#include <cstddef>
#include <deque>
#include <functional>
#include <optional>
#include <unordered_map>
#include <unordered_set>
#include <utility>

#include "delpezzo/enumerate.hpp"
#include "delpezzo/lattice.hpp"

namespace delpezzo {

constexpr std::size_t default_orbit_cap = 5'000'000;

struct WeylMove {
    enum class Kind { transposition, quadratic };
    Kind kind;
    int i, j, k;  // transposition uses (i, j); quadratic uses (i, j, k)
};

inline DivisorClass apply_move(const LatticeContext& ctx, const WeylMove& m,
                               const DivisorClass& c) {
    if (m.kind == WeylMove::Kind::transposition) return transpose_indices(ctx, m.i, m.j, c);
    return quadratic_transform(ctx, m.i, m.j, m.k, c);
}

/// Generating set of W_delta: (i, i+1) for 1 <= i < delta plus T_123 when
/// delta >= 3.  Construction verifies that every generator preserves the
/// intersection form and fixes K.
class WeylGenerators {
  public:
    explicit WeylGenerators(const LatticeContext& ctx) : ctx_(ctx) {
        if (!ctx.is_blowup_plane())
            throw std::invalid_argument("WeylGenerators: needs a plane blow-up context");
        const int d = ctx.delta();
        for (int i = 1; i < d; ++i)
            moves_.push_back({WeylMove::Kind::transposition, i, i + 1, 0});
        if (d >= 3) moves_.push_back({WeylMove::Kind::quadratic, 1, 2, 3});
        validate();
    }

    const LatticeContext& ctx() const { return ctx_; }
    const std::vector<WeylMove>& moves() const { return moves_; }

    DivisorClass apply(const WeylMove& m, const DivisorClass& c) const {
        return apply_move(ctx_, m, c);
    }

    DivisorClass apply_word(const std::vector<WeylMove>& word, DivisorClass c) const {
        for (const WeylMove& m : word) c = apply(m, c);
        return c;
    }

    /// Apply the inverse of a word (generators are involutions).
    DivisorClass apply_word_inverse(const std::vector<WeylMove>& word, DivisorClass c) const {
        for (auto it = word.rbegin(); it != word.rend(); ++it) c = apply(*it, c);
        return c;
    }

  private:
    void validate() const {
        const int r = ctx_.rank();
        std::vector<DivisorClass> basis;
        for (int i = 0; i < r; ++i) {
            DivisorClass v = DivisorClass::zero(ctx_);
            v[static_cast<std::size_t>(i)] = 1;
            basis.push_back(v);
        }
        const DivisorClass k = canonical_class(ctx_);
        for (const WeylMove& m : moves_) {
            if (apply(m, k) != k) throw std::logic_error("WeylGenerators: generator moves K");
            std::vector<DivisorClass> img;
            for (const auto& v : basis) img.push_back(apply(m, v));
            for (int p = 0; p < r; ++p)
                for (int q = p; q < r; ++q)
                    if (intersect(ctx_, img[static_cast<std::size_t>(p)],
                                  img[static_cast<std::size_t>(q)]) !=
                        intersect(ctx_, basis[static_cast<std::size_t>(p)],
                                  basis[static_cast<std::size_t>(q)]))
                        throw std::logic_error("WeylGenerators: generator breaks the pairing");
        }
    }

    LatticeContext ctx_;
    std::vector<WeylMove> moves_;
};

enum class OrbitAnswer { no, yes, indeterminate };

namespace detail {

struct CoeffVecHash {
    std::size_t operator()(const std::vector<Coeff>& v) const {
        std::size_t h = 1469598103934665603ull;
        for (Coeff x : v) {
            h ^= static_cast<std::size_t>(x) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        }
        return h;
    }
};

using StateSet = std::unordered_set<std::vector<Coeff>, CoeffVecHash>;

inline std::vector<Coeff> flatten(const std::vector<DivisorClass>& tuple) {
    std::vector<Coeff> out;
    for (const auto& c : tuple) out.insert(out.end(), c.coeffs().begin(), c.coeffs().end());
    return out;
}

// Descending b-sort; valid canonical form for single classes because the
// index permutations are group elements.
inline DivisorClass sorted_rep(const DivisorClass& c) {
    std::vector<Coeff> v = c.coeffs();
    std::sort(v.begin() + 1, v.end(), std::greater<Coeff>());
    return DivisorClass(std::move(v));
}

// Bidirectional search over canonical states.  `neighbors(state, visit)`
// calls `visit` on every successor of `state`.  The smaller frontier
// expands level by level; if a side runs out of states it has explored
// its whole orbit without meeting the other, so the answer is no.
template <typename NeighborFn>
OrbitAnswer bidirectional_meet(const std::vector<Coeff>& start_a, const std::vector<Coeff>& start_b,
                               NeighborFn&& neighbors, std::size_t cap) {
    struct Side {
        StateSet seen;
        std::deque<std::vector<Coeff>> frontier;
    };
    Side side[2];
    side[0].seen.insert(start_a);
    side[0].frontier.push_back(start_a);
    side[1].seen.insert(start_b);
    side[1].frontier.push_back(start_b);
    while (true) {
        int a = side[0].frontier.size() <= side[1].frontier.size() ? 0 : 1;
        Side& self = side[a];
        Side& other = side[1 - a];
        std::deque<std::vector<Coeff>> next;
        OrbitAnswer verdict = OrbitAnswer::no;
        while (!self.frontier.empty() && verdict == OrbitAnswer::no) {
            std::vector<Coeff> s = std::move(self.frontier.front());
            self.frontier.pop_front();
            neighbors(s, [&](std::vector<Coeff> t) {
                if (verdict != OrbitAnswer::no || self.seen.count(t)) return;
                if (other.seen.count(t)) {
                    verdict = OrbitAnswer::yes;
                    return;
                }
                if (self.seen.size() + other.seen.size() >= cap) {
                    verdict = OrbitAnswer::indeterminate;
                    return;
                }
                self.seen.insert(t);
                next.push_back(std::move(t));
            });
        }
        if (verdict != OrbitAnswer::no) return verdict;
        if (next.empty()) return OrbitAnswer::no;
        self.frontier = std::move(next);
    }
}

}  // namespace detail

struct OrbitCell {
    DivisorClass representative;         // lexicographic minimum of the visited set
    std::size_t size = 0;
    bool complete = true;                // false when the cap was hit
    std::vector<DivisorClass> elements;  // sorted; partial if !complete
};

/// Full orbit of a single class under the generators, by breadth-first
/// search.  A cap bounds the visited set; exceeding it yields a partial
/// cell flagged incomplete.
inline OrbitCell orbit_of(const WeylGenerators& gen, const DivisorClass& x,
                          std::size_t cap = default_orbit_cap) {
    require_in_context(gen.ctx(), x);
    detail::StateSet seen;
    std::deque<DivisorClass> frontier;
    seen.insert(x.coeffs());
    frontier.push_back(x);
    OrbitCell cell;
    cell.representative = x;
    bool capped = false;
    while (!frontier.empty()) {
        DivisorClass s = std::move(frontier.front());
        frontier.pop_front();
        for (const WeylMove& m : gen.moves()) {
            DivisorClass t = gen.apply(m, s);
            if (seen.count(t.coeffs())) continue;
            if (seen.size() >= cap) {
                capped = true;
                continue;
            }
            if (t < cell.representative) cell.representative = t;
            seen.insert(t.coeffs());
            frontier.push_back(t);
        }
        if (capped) break;
    }
    cell.size = seen.size();
    cell.complete = !capped;
    cell.elements.reserve(seen.size());
    for (const auto& v : seen) cell.elements.emplace_back(v);
    std::sort(cell.elements.begin(), cell.elements.end());
    return cell;
}

/// Orbit of an ordered tuple under the diagonal action.
inline OrbitCell orbit_of_tuple(const WeylGenerators& gen, const std::vector<DivisorClass>& x,
                                std::size_t cap = default_orbit_cap);

/// Word moving `from` to `to`, when both lie in one orbit; breadth-first
/// with parent recording.  Empty optional when the orbit is exhausted (or
/// capped) without reaching `to`.
inline std::optional<std::vector<WeylMove>> word_mapping(const WeylGenerators& gen,
                                                         const DivisorClass& from,
                                                         const DivisorClass& to,
                                                         std::size_t cap = default_orbit_cap) {
    require_in_context(gen.ctx(), from);
    require_in_context(gen.ctx(), to);
    if (from == to) return std::vector<WeylMove>{};
    std::unordered_map<std::vector<Coeff>, std::pair<std::vector<Coeff>, std::size_t>,
                       detail::CoeffVecHash>
        parent;
    parent.emplace(from.coeffs(), std::make_pair(std::vector<Coeff>{}, 0));
    std::deque<DivisorClass> frontier{from};
    while (!frontier.empty()) {
        DivisorClass s = std::move(frontier.front());
        frontier.pop_front();
        for (std::size_t mi = 0; mi < gen.moves().size(); ++mi) {
            DivisorClass t = gen.apply(gen.moves()[mi], s);
            if (parent.count(t.coeffs())) continue;
            if (parent.size() >= cap) return std::nullopt;
            parent.emplace(t.coeffs(), std::make_pair(s.coeffs(), mi));
            if (t == to) {
                std::vector<WeylMove> word;
                std::vector<Coeff> cur = t.coeffs();
                while (cur != from.coeffs()) {
                    const auto& pr = parent.at(cur);
                    word.push_back(gen.moves()[pr.second]);
                    cur = pr.first;
                }
                std::reverse(word.begin(), word.end());
                return word;
            }
            frontier.push_back(t);
        }
    }
    return std::nullopt;
}

/// Same-orbit test for single classes via canonical forms: states are
/// b-sorted representatives, moves are T_{ijk} over all index triples
/// followed by re-sorting.  This explores the orbit modulo permutations,
/// which shrinks the search by a factor up to delta!.  The search is
/// bidirectional: the smaller frontier expands until the two visited
/// sets meet or one orbit is exhausted.
inline OrbitAnswer same_orbit(const WeylGenerators& gen, const DivisorClass& x,
                              const DivisorClass& y, std::size_t cap = default_orbit_cap) {
    const LatticeContext& ctx = gen.ctx();
    require_in_context(ctx, x);
    require_in_context(ctx, y);
    if (anticanonical_degree(ctx, x) != anticanonical_degree(ctx, y) ||
        self_intersection(ctx, x) != self_intersection(ctx, y))
        return OrbitAnswer::no;
    DivisorClass cx = detail::sorted_rep(x), cy = detail::sorted_rep(y);
    if (cx == cy) return OrbitAnswer::yes;
    const int d = ctx.delta();
    if (d < 3) return OrbitAnswer::no;  // only permutations: sorted reps decide

    return detail::bidirectional_meet(
        cx.coeffs(), cy.coeffs(),
        [&](const std::vector<Coeff>& state, auto&& visit) {
            DivisorClass s(state);
            for (int i = 1; i <= d - 2; ++i)
                for (int j = i + 1; j <= d - 1; ++j)
                    for (int k = j + 1; k <= d; ++k)
                        visit(detail::sorted_rep(quadratic_transform(ctx, i, j, k, s)).coeffs());
        },
        cap);
}

namespace detail {

// Canonical form of an ordered tuple under the permutation subgroup:
// sort the per-index coordinate columns (b_i across all tuple entries)
// in decreasing lexicographic order.  Unique, and compatible with the
// diagonal action because permutations permute whole columns.
inline std::vector<DivisorClass> column_sorted(const LatticeContext& ctx,
                                               const std::vector<DivisorClass>& tuple) {
    const int d = ctx.delta();
    const std::size_t n = tuple.size();
    std::vector<std::vector<Coeff>> cols(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i)
        for (std::size_t t = 0; t < n; ++t)
            cols[static_cast<std::size_t>(i)].push_back(tuple[t][static_cast<std::size_t>(i) + 1]);
    std::sort(cols.begin(), cols.end(), std::greater<std::vector<Coeff>>());
    std::vector<DivisorClass> out(tuple);
    for (int i = 0; i < d; ++i)
        for (std::size_t t = 0; t < n; ++t)
            out[t][static_cast<std::size_t>(i) + 1] = cols[static_cast<std::size_t>(i)][t];
    return out;
}

}  // namespace detail

/// Same-orbit test for ordered tuples under the diagonal action, on
/// column-sorted canonical states (T moves over all triples).
inline OrbitAnswer same_orbit_tuple(const WeylGenerators& gen,
                                    const std::vector<DivisorClass>& x,
                                    const std::vector<DivisorClass>& y,
                                    std::size_t cap = default_orbit_cap) {
    const LatticeContext& ctx = gen.ctx();
    if (x.size() != y.size()) throw std::invalid_argument("same_orbit_tuple: shape mismatch");
    for (const auto& c : x) require_in_context(ctx, c);
    for (const auto& c : y) require_in_context(ctx, c);
    // Pairwise products are invariants of the diagonal action.
    for (std::size_t p = 0; p < x.size(); ++p)
        for (std::size_t q = p; q < x.size(); ++q)
            if (intersect(ctx, x[p], x[q]) != intersect(ctx, y[p], y[q])) return OrbitAnswer::no;

    auto cx = detail::flatten(detail::column_sorted(ctx, x));
    auto cy = detail::flatten(detail::column_sorted(ctx, y));
    if (cx == cy) return OrbitAnswer::yes;
    const int d = ctx.delta();
    if (d < 3) return OrbitAnswer::no;

    const std::size_t n = x.size();
    auto unflatten = [&](const std::vector<Coeff>& flat) {
        std::vector<DivisorClass> tuple;
        const std::size_t r = static_cast<std::size_t>(ctx.rank());
        for (std::size_t t = 0; t < n; ++t)
            tuple.emplace_back(std::vector<Coeff>(flat.begin() + static_cast<std::ptrdiff_t>(t * r),
                                                  flat.begin() + static_cast<std::ptrdiff_t>((t + 1) * r)));
        return tuple;
    };

    return detail::bidirectional_meet(
        cx, cy,
        [&](const std::vector<Coeff>& state, auto&& visit) {
            std::vector<DivisorClass> tuple = unflatten(state);
            for (int i = 1; i <= d - 2; ++i)
                for (int j = i + 1; j <= d - 1; ++j)
                    for (int k = j + 1; k <= d; ++k) {
                        std::vector<DivisorClass> img;
                        img.reserve(n);
                        for (const auto& c : tuple)
                            img.push_back(quadratic_transform(ctx, i, j, k, c));
                        visit(detail::flatten(detail::column_sorted(ctx, img)));
                    }
        },
        cap);
}

inline OrbitCell orbit_of_tuple(const WeylGenerators& gen, const std::vector<DivisorClass>& x,
                                std::size_t cap) {
    const LatticeContext& ctx = gen.ctx();
    for (const auto& c : x) require_in_context(ctx, c);
    detail::StateSet seen;
    std::deque<std::vector<DivisorClass>> frontier{x};
    seen.insert(detail::flatten(x));
    bool capped = false;
    while (!frontier.empty()) {
        auto s = std::move(frontier.front());
        frontier.pop_front();
        for (const WeylMove& m : gen.moves()) {
            std::vector<DivisorClass> t;
            t.reserve(s.size());
            for (const auto& c : s) t.push_back(gen.apply(m, c));
            auto key = detail::flatten(t);
            if (seen.count(key)) continue;
            if (seen.size() >= cap) {
                capped = true;
                continue;
            }
            seen.insert(std::move(key));
            frontier.push_back(std::move(t));
        }
        if (capped) break;
    }
    OrbitCell cell;
    cell.representative = x.empty() ? DivisorClass{} : x.front();
    cell.size = seen.size();
    cell.complete = !capped;
    return cell;
}

// ---------------------------------------------------------------------------
// Orbits of ordered conic pairs.
//
// By transitivity on conics every pair is equivalent to one with first
// slot A_1 = l - e_1, and two such pairs are equivalent exactly when the
// second slots are connected by moves fixing A_1.  The moves used are the
// transpositions of {2, ..., delta} together with T_123 (which fixes
// l - e_1 since b_1 = 1 and b_2 = b_3 = 0): precisely the climbing moves
// that classify the pairs.  Cells are keyed by the pairing Q1.Q2 and, for
// delta = 8 and product 4, by ampleness of Q1 + Q2.
// ---------------------------------------------------------------------------

struct ConicPairCell {
    Coeff product;                    // Q1.Q2, constant on the cell
    std::optional<bool> ample;        // set only for delta = 8, product = 4
    DivisorClass second_representative;  // lex-min second slot with Q1 = A_1
    std::size_t stabilizer_cell_size;    // conics in the second-slot cell
    std::size_t pair_count;              // ordered pairs in the full orbit
};

struct ConicPairOrbits {
    DivisorClass first;  // A_1
    std::vector<ConicPairCell> cells;
};

namespace detail {

inline bool ample_against_catalog(const LatticeContext& ctx, const ClassCatalog& exc,
                                  const DivisorClass& d) {
    for (const auto& l : exc.classes)
        if (intersect(ctx, d, l) <= 0) return false;
    return true;
}

}  // namespace detail

inline ConicPairOrbits conic_pair_orbits(const LatticeContext& ctx) {
    if (!ctx.is_blowup_plane() || ctx.delta() < 2)
        throw std::invalid_argument("conic_pair_orbits: needs a plane blow-up with delta >= 2");
    const int d = ctx.delta();
    const ClassCatalog& conics = conic_classes(ctx);
    const ClassCatalog& exc = exceptional_classes(ctx);
    const DivisorClass a1 = line_class(ctx) - exceptional_basis_class(ctx, 1);

    std::vector<WeylMove> stab_moves;
    for (int i = 2; i < d; ++i) stab_moves.push_back({WeylMove::Kind::transposition, i, i + 1, 0});
    if (d >= 3) stab_moves.push_back({WeylMove::Kind::quadratic, 1, 2, 3});
    for (const WeylMove& m : stab_moves)
        if (apply_move(ctx, m, a1) != a1)
            throw std::logic_error("conic_pair_orbits: stabilizer move does not fix A_1");

    detail::StateSet assigned;
    ConicPairOrbits out{a1, {}};
    for (const DivisorClass& q : conics.classes) {
        if (assigned.count(q.coeffs())) continue;
        // BFS the second-slot cell under the A_1-fixing moves.
        detail::StateSet comp;
        std::deque<DivisorClass> frontier{q};
        comp.insert(q.coeffs());
        DivisorClass rep = q;
        while (!frontier.empty()) {
            DivisorClass s = std::move(frontier.front());
            frontier.pop_front();
            for (const WeylMove& m : stab_moves) {
                DivisorClass t = apply_move(ctx, m, s);
                if (comp.count(t.coeffs())) continue;
                if (t < rep) rep = t;
                comp.insert(t.coeffs());
                frontier.push_back(t);
            }
        }
        for (const auto& v : comp) assigned.insert(v);

        ConicPairCell cell;
        cell.product = intersect(ctx, a1, q);
        cell.second_representative = rep;
        cell.stabilizer_cell_size = comp.size();
        cell.pair_count = comp.size() * conics.size();
        if (d == 8 && cell.product == 4)
            cell.ample = detail::ample_against_catalog(ctx, exc, a1 + rep);
        out.cells.push_back(std::move(cell));
    }
    std::sort(out.cells.begin(), out.cells.end(), [](const ConicPairCell& x, const ConicPairCell& y) {
        if (x.product != y.product) return x.product < y.product;
        return x.ample.value_or(false) < y.ample.value_or(false);
    });
    return out;
}

// ---------------------------------------------------------------------------
// Stabilizer orbits: partition a target set under Stab(fixed), realized as
// orbits of the pairs (fixed, t) under the full group.
// ---------------------------------------------------------------------------

struct StabilizerCell {
    Coeff pairing;  // t.fixed, constant on the cell
    DivisorClass representative;
    std::vector<DivisorClass> members;
    bool complete = true;
};

struct StabilizerPartition {
    DivisorClass fixed;
    std::vector<StabilizerCell> cells;
    bool complete = true;
};

inline StabilizerPartition stabilizer_orbits(const WeylGenerators& gen, const DivisorClass& fixed,
                                             const ClassCatalog& targets,
                                             std::size_t cap = default_orbit_cap) {
    const LatticeContext& ctx = gen.ctx();
    require_in_context(ctx, fixed);
    StabilizerPartition out;
    out.fixed = fixed;

    std::unordered_map<std::vector<Coeff>, std::size_t, detail::CoeffVecHash> cell_of;
    for (const DivisorClass& t : targets.classes) {
        auto key0 = detail::flatten({fixed, t});
        auto it = cell_of.find(key0);
        if (it != cell_of.end()) {
            out.cells[it->second].members.push_back(t);
            continue;
        }
        const std::size_t id = out.cells.size();
        StabilizerCell cell;
        cell.pairing = intersect(ctx, fixed, t);
        cell.representative = t;
        cell.members.push_back(t);

        detail::StateSet comp;
        std::deque<std::vector<DivisorClass>> frontier;
        frontier.push_back({fixed, t});
        comp.insert(key0);
        cell_of.emplace(key0, id);
        bool capped = false;
        while (!frontier.empty()) {
            auto s = std::move(frontier.front());
            frontier.pop_front();
            for (const WeylMove& m : gen.moves()) {
                std::vector<DivisorClass> u{gen.apply(m, s[0]), gen.apply(m, s[1])};
                auto key = detail::flatten(u);
                if (comp.count(key)) continue;
                if (comp.size() >= cap) {
                    capped = true;
                    continue;
                }
                comp.insert(key);
                cell_of.emplace(std::move(key), id);
                frontier.push_back(std::move(u));
            }
            if (capped) break;
        }
        cell.complete = !capped;
        if (capped) out.complete = false;
        out.cells.push_back(std::move(cell));
    }
    for (auto& cell : out.cells) {
        std::sort(cell.members.begin(), cell.members.end());
        cell.representative = cell.members.front();
    }
    std::sort(out.cells.begin(), out.cells.end(),
              [](const StabilizerCell& x, const StabilizerCell& y) { return x.pairing < y.pairing; });
    return out;
}

// ---------------------------------------------------------------------------
// Triple orbits on the degree-one surface: unordered triples of (-1)-classes
// summing to -2K + L, partitioned under Stab(L) via orbits of the states
// (L, sorted triple) under the full group.
// ---------------------------------------------------------------------------

struct TripleCell {
    std::vector<Coeff> pairing_multiset;  // sorted values lambda_i.L
    std::vector<DivisorClass> representative;  // sorted triple
    std::size_t member_count = 0;
};

struct TripleOrbits {
    DivisorClass fixed;
    std::vector<TripleCell> cells;
    std::size_t triple_count = 0;  // |B|
};

inline TripleOrbits triple_orbits(const WeylGenerators& gen, const DivisorClass& l,
                                  std::size_t cap = default_orbit_cap) {
    const LatticeContext& ctx = gen.ctx();
    if (!ctx.is_blowup_plane() || ctx.delta() != 8)
        throw std::invalid_argument("triple_orbits: needs delta = 8");
    require_in_context(ctx, l);
    if (!is_exceptional_class(ctx, l))
        throw std::invalid_argument("triple_orbits: fixed class must be a (-1)-class");

    const ClassCatalog& exc = exceptional_classes(ctx);
    const DivisorClass target = 2 * anticanonical_class(ctx) + l;  // -2K + L

    // Enumerate B: lambda_1 <= lambda_2 over the catalog, lambda_3 by
    // subtraction and membership.
    std::vector<std::vector<DivisorClass>> triples;
    for (std::size_t i = 0; i < exc.classes.size(); ++i) {
        for (std::size_t j = i; j < exc.classes.size(); ++j) {
            DivisorClass l3 = target - exc.classes[i] - exc.classes[j];
            if (!(exc.classes[j] <= l3)) continue;
            if (!exc.contains(l3)) continue;
            triples.push_back({exc.classes[i], exc.classes[j], l3});
        }
    }

    TripleOrbits out;
    out.fixed = l;
    out.triple_count = triples.size();

    auto state_key = [&](const DivisorClass& first, std::vector<DivisorClass> tri) {
        std::sort(tri.begin(), tri.end());
        std::vector<DivisorClass> st{first};
        st.insert(st.end(), tri.begin(), tri.end());
        return detail::flatten(st);
    };

    std::unordered_map<std::vector<Coeff>, std::size_t, detail::CoeffVecHash> cell_of;
    for (const auto& tri : triples) {
        auto key0 = state_key(l, tri);
        auto it = cell_of.find(key0);
        if (it != cell_of.end()) {
            ++out.cells[it->second].member_count;
            if (tri < out.cells[it->second].representative) out.cells[it->second].representative = tri;
            continue;
        }
        const std::size_t id = out.cells.size();
        TripleCell cell;
        cell.representative = tri;
        cell.member_count = 1;
        std::vector<Coeff> betas;
        for (const auto& lam : tri) betas.push_back(intersect(ctx, lam, l));
        std::sort(betas.begin(), betas.end());
        cell.pairing_multiset = betas;

        detail::StateSet comp;
        std::deque<std::vector<DivisorClass>> frontier;
        frontier.push_back({l, tri[0], tri[1], tri[2]});
        comp.insert(key0);
        cell_of.emplace(key0, id);
        while (!frontier.empty()) {
            auto s = std::move(frontier.front());
            frontier.pop_front();
            for (const WeylMove& m : gen.moves()) {
                DivisorClass first = gen.apply(m, s[0]);
                std::vector<DivisorClass> tri2{gen.apply(m, s[1]), gen.apply(m, s[2]),
                                               gen.apply(m, s[3])};
                std::sort(tri2.begin(), tri2.end());
                std::vector<DivisorClass> u{first, tri2[0], tri2[1], tri2[2]};
                auto key = detail::flatten(u);
                if (comp.count(key)) continue;
                if (comp.size() >= cap)
                    throw std::runtime_error("triple_orbits: orbit cap exceeded");
                comp.insert(key);
                cell_of.emplace(std::move(key), id);
                frontier.push_back(std::move(u));
            }
        }
        out.cells.push_back(std::move(cell));
    }
    std::sort(out.cells.begin(), out.cells.end(), [](const TripleCell& x, const TripleCell& y) {
        return x.pairing_multiset < y.pairing_multiset;
    });
    return out;
}

}  // namespace delpezzo
