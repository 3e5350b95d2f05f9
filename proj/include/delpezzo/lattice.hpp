// lattice.hpp
//
// Core Picard-lattice types for del Pezzo surfaces: divisor classes in a
// standard basis, the intersection pairing, canonical class, adjunction
// bookkeeping, index permutations and quadratic transforms.
//
// Conventions.  For the blow-up of the plane at delta points we fix the
// standard basis (l, e_1, ..., e_delta) with intersection form
// diag(+1, -1, ..., -1).  A divisor class a*l - b_1*e_1 - ... - b_d*e_d is
// stored as the coefficient vector (a; b_1, ..., b_d); in particular
// e_i has b_i = -1 and the anticanonical class -K is (3; 1, ..., 1).
// For the quadric surface the basis is the two rulings (l_1, l_2) with
// form [[0,1],[1,0]] and -K = (2, 2); coefficients are stored directly.
//
// All arithmetic is checked 64-bit: overflow throws instead of wrapping.

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace delpezzo {

using Coeff = std::int64_t;

inline Coeff checked_add(Coeff x, Coeff y) {
    Coeff r;
    if (__builtin_add_overflow(x, y, &r)) throw std::overflow_error("integer overflow in add");
    return r;
}

inline Coeff checked_sub(Coeff x, Coeff y) {
    Coeff r;
    if (__builtin_sub_overflow(x, y, &r)) throw std::overflow_error("integer overflow in sub");
    return r;
}

inline Coeff checked_mul(Coeff x, Coeff y) {
    Coeff r;
    if (__builtin_mul_overflow(x, y, &r)) throw std::overflow_error("integer overflow in mul");
    return r;
}

enum class SurfaceKind { blowup_plane, quadric };

/// Which surface lattice we are working in: the blow-up of the plane at
/// delta points (0 <= delta <= 8, rank delta+1) or the quadric (rank 2).
class LatticeContext {
  public:
    static LatticeContext blowup_plane(int delta) {
        if (delta < 0 || delta > 8)
            throw std::invalid_argument("blowup_plane: delta must be in 0..8");
        return LatticeContext(SurfaceKind::blowup_plane, delta);
    }
    static LatticeContext quadric() { return LatticeContext(SurfaceKind::quadric, -1); }

    SurfaceKind kind() const { return kind_; }
    bool is_blowup_plane() const { return kind_ == SurfaceKind::blowup_plane; }
    bool is_quadric() const { return kind_ == SurfaceKind::quadric; }

    int delta() const {
        if (!is_blowup_plane()) throw std::invalid_argument("delta: not a plane blow-up context");
        return delta_;
    }

    int rank() const { return is_quadric() ? 2 : delta_ + 1; }

    friend bool operator==(const LatticeContext& x, const LatticeContext& y) {
        return x.kind_ == y.kind_ && x.delta_ == y.delta_;
    }
    friend bool operator!=(const LatticeContext& x, const LatticeContext& y) { return !(x == y); }

  private:
    LatticeContext(SurfaceKind k, int d) : kind_(k), delta_(d) {}
    SurfaceKind kind_;
    int delta_;
};

/// Integer coefficient vector of a divisor class; length must equal the
/// rank of the context it is used with.
class DivisorClass {
  public:
    DivisorClass() = default;
    explicit DivisorClass(std::vector<Coeff> coeffs) : c_(std::move(coeffs)) {}
    DivisorClass(std::initializer_list<Coeff> coeffs) : c_(coeffs) {}

    static DivisorClass zero(const LatticeContext& ctx) {
        return DivisorClass(std::vector<Coeff>(static_cast<std::size_t>(ctx.rank()), 0));
    }

    std::size_t size() const { return c_.size(); }
    Coeff operator[](std::size_t i) const { return c_[i]; }
    Coeff& operator[](std::size_t i) { return c_[i]; }
    const std::vector<Coeff>& coeffs() const { return c_; }

    DivisorClass operator+(const DivisorClass& o) const {
        require_same_rank(o);
        DivisorClass r(c_);
        for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i] = checked_add(r.c_[i], o.c_[i]);
        return r;
    }
    DivisorClass operator-(const DivisorClass& o) const {
        require_same_rank(o);
        DivisorClass r(c_);
        for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i] = checked_sub(r.c_[i], o.c_[i]);
        return r;
    }
    DivisorClass operator-() const {
        DivisorClass r(c_);
        for (auto& x : r.c_) x = checked_sub(0, x);
        return r;
    }
    friend DivisorClass operator*(Coeff m, const DivisorClass& d) {
        DivisorClass r(d.c_);
        for (auto& x : r.c_) x = checked_mul(m, x);
        return r;
    }

    friend bool operator==(const DivisorClass& x, const DivisorClass& y) { return x.c_ == y.c_; }
    friend bool operator!=(const DivisorClass& x, const DivisorClass& y) { return x.c_ != y.c_; }
    /// Lexicographic order on (a, b_1, ..., b_d); used for canonical
    /// representatives and deterministic catalogs.
    friend bool operator<(const DivisorClass& x, const DivisorClass& y) { return x.c_ < y.c_; }
    friend bool operator<=(const DivisorClass& x, const DivisorClass& y) { return x.c_ <= y.c_; }

  private:
    void require_same_rank(const DivisorClass& o) const {
        if (c_.size() != o.c_.size()) throw std::invalid_argument("divisor class rank mismatch");
    }
    std::vector<Coeff> c_;
};

inline void require_in_context(const LatticeContext& ctx, const DivisorClass& c) {
    if (static_cast<int>(c.size()) != ctx.rank())
        throw std::invalid_argument("divisor class rank does not match lattice context");
}

/// K = -3l + e_1 + ... + e_delta, stored as (-3; -1, ..., -1); on the
/// quadric K = -2l_1 - 2l_2.
inline DivisorClass canonical_class(const LatticeContext& ctx) {
    if (ctx.is_quadric()) return DivisorClass({-2, -2});
    std::vector<Coeff> v(static_cast<std::size_t>(ctx.rank()), -1);
    v[0] = -3;
    return DivisorClass(std::move(v));
}

inline DivisorClass anticanonical_class(const LatticeContext& ctx) {
    return -canonical_class(ctx);
}

/// The class of a line l (plane blow-up only).
inline DivisorClass line_class(const LatticeContext& ctx) {
    if (!ctx.is_blowup_plane()) throw std::invalid_argument("line_class: needs a plane blow-up");
    DivisorClass v = DivisorClass::zero(ctx);
    v[0] = 1;
    return v;
}

/// The i-th exceptional basis class e_i = (0; ..., -1, ...), 1-based.
inline DivisorClass exceptional_basis_class(const LatticeContext& ctx, int i) {
    if (!ctx.is_blowup_plane() || i < 1 || i > ctx.delta())
        throw std::invalid_argument("exceptional_basis_class: bad index");
    DivisorClass v = DivisorClass::zero(ctx);
    v[static_cast<std::size_t>(i)] = -1;
    return v;
}

/// Symmetric bilinear intersection pairing: a*a' - sum b_i*b_i' on the
/// plane blow-up, a_1*b_2 + a_2*b_1 on the quadric.
inline Coeff intersect(const LatticeContext& ctx, const DivisorClass& c, const DivisorClass& d) {
    require_in_context(ctx, c);
    require_in_context(ctx, d);
    if (ctx.is_quadric()) return checked_add(checked_mul(c[0], d[1]), checked_mul(c[1], d[0]));
    Coeff r = checked_mul(c[0], d[0]);
    for (std::size_t i = 1; i < c.size(); ++i) r = checked_sub(r, checked_mul(c[i], d[i]));
    return r;
}

inline Coeff self_intersection(const LatticeContext& ctx, const DivisorClass& c) {
    return intersect(ctx, c, c);
}

inline Coeff anticanonical_degree(const LatticeContext& ctx, const DivisorClass& c) {
    return intersect(ctx, anticanonical_class(ctx), c);
}

struct ClassProfile {
    Coeff self_intersection;
    Coeff canonical_degree;       // K.C
    Coeff anticanonical_degree;   // -K.C
    Coeff arithmetic_genus;
};

/// Adjunction bookkeeping.  Throws std::domain_error when C^2 + K.C is
/// odd (non-integral genus: the class cannot be an integral curve).
inline ClassProfile profile(const LatticeContext& ctx, const DivisorClass& c) {
    ClassProfile p{};
    p.self_intersection = self_intersection(ctx, c);
    p.canonical_degree = intersect(ctx, canonical_class(ctx), c);
    p.anticanonical_degree = checked_sub(0, p.canonical_degree);
    Coeff twice = checked_add(p.self_intersection, p.canonical_degree);
    if (twice % 2 != 0) throw std::domain_error("profile: non-integral genus");
    p.arithmetic_genus = twice / 2 + 1;
    return p;
}

inline bool is_exceptional_class(const LatticeContext& ctx, const DivisorClass& c) {
    return self_intersection(ctx, c) == -1 && anticanonical_degree(ctx, c) == 1;
}

inline bool is_conic_class(const LatticeContext& ctx, const DivisorClass& c) {
    return self_intersection(ctx, c) == 0 && anticanonical_degree(ctx, c) == 2;
}

/// Image of C under the quadratic transform T_{ijk} (1-based, distinct
/// indices): (a; b) -> (2a - b_i - b_j - b_k; ..., b_i -> a - b_j - b_k,
/// ...), all other coordinates fixed.  An involution that preserves the
/// pairing and fixes K.
inline DivisorClass quadratic_transform(const LatticeContext& ctx, int i, int j, int k,
                                        const DivisorClass& c) {
    if (!ctx.is_blowup_plane() || ctx.delta() < 3)
        throw std::invalid_argument("quadratic_transform: needs a plane blow-up with delta >= 3");
    require_in_context(ctx, c);
    int d = ctx.delta();
    if (i < 1 || j <= i || k <= j || k > d)
        throw std::invalid_argument("quadratic_transform: indices must satisfy 1 <= i < j < k <= delta");
    const Coeff a = c[0];
    const Coeff bi = c[static_cast<std::size_t>(i)];
    const Coeff bj = c[static_cast<std::size_t>(j)];
    const Coeff bk = c[static_cast<std::size_t>(k)];
    DivisorClass r = c;
    r[0] = checked_sub(checked_sub(checked_sub(checked_mul(2, a), bi), bj), bk);
    r[static_cast<std::size_t>(i)] = checked_sub(checked_sub(a, bj), bk);
    r[static_cast<std::size_t>(j)] = checked_sub(checked_sub(a, bi), bk);
    r[static_cast<std::size_t>(k)] = checked_sub(checked_sub(a, bi), bj);
    return r;
}

/// Permute the b-coordinates: result.b[sigma[i]] = C.b[i] for a
/// permutation sigma of {0, ..., delta-1}; a is fixed.
inline DivisorClass permute(const LatticeContext& ctx, const std::vector<int>& sigma,
                            const DivisorClass& c) {
    if (!ctx.is_blowup_plane()) throw std::invalid_argument("permute: needs a plane blow-up");
    require_in_context(ctx, c);
    int d = ctx.delta();
    if (static_cast<int>(sigma.size()) != d)
        throw std::invalid_argument("permute: permutation size must equal delta");
    std::vector<bool> hit(static_cast<std::size_t>(d), false);
    DivisorClass r = c;
    for (int i = 0; i < d; ++i) {
        int t = sigma[static_cast<std::size_t>(i)];
        if (t < 0 || t >= d || hit[static_cast<std::size_t>(t)])
            throw std::invalid_argument("permute: not a permutation of 0..delta-1");
        hit[static_cast<std::size_t>(t)] = true;
        r[static_cast<std::size_t>(t) + 1] = c[static_cast<std::size_t>(i) + 1];
    }
    return r;
}

/// Swap b_i and b_j (1-based basis indices).
inline DivisorClass transpose_indices(const LatticeContext& ctx, int i, int j,
                                      const DivisorClass& c) {
    if (!ctx.is_blowup_plane()) throw std::invalid_argument("transpose_indices: needs a plane blow-up");
    require_in_context(ctx, c);
    int d = ctx.delta();
    if (i < 1 || i > d || j < 1 || j > d)
        throw std::invalid_argument("transpose_indices: index out of range");
    DivisorClass r = c;
    std::swap(r[static_cast<std::size_t>(i)], r[static_cast<std::size_t>(j)]);
    return r;
}

/// Expected dimension chi(O(D)) - 1 = (D^2 - D.K)/2.  No cohomology
/// vanishing is checked; the value is the actual dimension exactly when
/// the higher cohomology of O(D) vanishes.
inline Coeff riemann_roch_dim(const LatticeContext& ctx, const DivisorClass& d) {
    Coeff num = checked_sub(self_intersection(ctx, d), intersect(ctx, d, canonical_class(ctx)));
    if (num % 2 != 0) throw std::domain_error("riemann_roch_dim: non-integral value");
    return num / 2;
}

enum class DegreeOneKind { exceptional_class, anticanonical_degree_one, neither };

/// Classify a class of anticanonical degree one: a (-1)-class, the
/// anticanonical class of the degree-one surface, or neither (lattice
/// solutions with even or too negative square).
inline DegreeOneKind classify_anticanonical_degree_one(const LatticeContext& ctx,
                                                       const DivisorClass& c) {
    if (anticanonical_degree(ctx, c) != 1)
        throw std::invalid_argument("classify_anticanonical_degree_one: -K.C must equal 1");
    Coeff s = self_intersection(ctx, c);
    if (s == -1) return DegreeOneKind::exceptional_class;
    if (s == 1 && ctx.is_blowup_plane() && ctx.delta() == 8 && c == anticanonical_class(ctx))
        return DegreeOneKind::anticanonical_degree_one;
    return DegreeOneKind::neither;
}

inline std::string to_string(const DivisorClass& c) {
    std::string s = "(";
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (i == 1) s += "; ";
        else if (i > 1) s += ",";
        s += std::to_string(c[i]);
    }
    s += ")";
    return s;
}

}  // namespace delpezzo
