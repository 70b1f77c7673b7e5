#pragma once

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "clgeo/geometry.hpp"
#include "clgeo/rng.hpp"

namespace clgeo {

enum class Ambient { affine, projective };

inline std::string to_string(Ambient a) { return a == Ambient::affine ? "affine" : "projective"; }

/// Pairwise disjoint lines. In the affine ambient only affine lines
/// qualify and disjoint means sharing no affine point, so parallel lines
/// are disjoint.
struct PartialSpread {
    Ambient ambient = Ambient::projective;
    std::vector<LineId> lines;  // sorted, duplicate-free
};

/// A partial spread that partitions the points of its ambient space:
/// q^2+1 lines in PG(3,q), q^2 lines in AG(3,q).
struct Spread {
    Ambient ambient = Ambient::projective;
    std::vector<LineId> lines;
    PartialSpread as_partial() const { return {ambient, lines}; }
};

/// Two disjoint partial spreads covering the same point set.
struct SwitchingPair {
    PartialSpread r1, r2;
};

namespace detail {

inline std::vector<LineId> sorted_unique(std::vector<LineId> lines) {
    std::ranges::sort(lines);
    lines.erase(std::unique(lines.begin(), lines.end()), lines.end());
    return lines;
}

// Covered point ids, or nullopt-like empty handling by caller; returns
// false through `ok` if a point repeats (i.e. two lines meet) or if a
// line does not belong to the ambient.
inline bool mark_cover(const Space& s, const std::vector<LineId>& lines, Ambient amb,
                       std::vector<char>& covered) {
    covered.assign(s.n_points(), 0);
    for (LineId l : lines) {
        if (amb == Ambient::affine && s.is_infinity_line(l)) return false;
        for (PointId p : s.points_on_line(l)) {
            if (amb == Ambient::affine && !s.is_affine_point(p)) continue;
            if (covered[p]) return false;
            covered[p] = 1;
        }
    }
    return true;
}

}  // namespace detail

inline bool validate_partial_spread(const Space& s, const std::vector<LineId>& lines, Ambient amb) {
    auto uniq = detail::sorted_unique(lines);
    if (uniq.size() != lines.size()) return false;
    std::vector<char> covered;
    return detail::mark_cover(s, uniq, amb, covered);
}

/// Partial spread that additionally covers every point of the ambient.
inline bool validate_spread(const Space& s, const std::vector<LineId>& lines, Ambient amb) {
    auto uniq = detail::sorted_unique(lines);
    if (uniq.size() != lines.size()) return false;
    std::vector<char> covered;
    if (!detail::mark_cover(s, uniq, amb, covered)) return false;
    if (amb == Ambient::projective) {
        if (static_cast<int>(lines.size()) != s.q() * s.q() + 1) return false;
        return std::ranges::count(covered, 1) == s.n_points();
    }
    if (static_cast<int>(lines.size()) != s.q() * s.q()) return false;
    return std::ranges::count(covered, 1) == s.n_affine_points();
}

inline bool validate_spread(const Space& s, const Spread& sp) {
    return validate_spread(s, sp.lines, sp.ambient);
}

/// The regular spread of PG(3,q) by field reduction: F_q^4 is read as
/// F_{q^2}^2 through the first irreducible quadratic x^2 + m1 x + m0
/// (lexicographic in (m0, m1)), and each F_{q^2}-line becomes an
/// F_q-plane, i.e. a line of PG(3,q). Deterministic; contains exactly
/// one infinity line.
inline Spread regular_spread(const Space& s) {
    const Gf& f = s.field();
    Fe m0{}, m1{};
    bool found = false;
    for (Fe c0 : f.elements()) {
        for (Fe c1 : f.elements()) {
            bool has_root = false;
            for (Fe x : f.elements())
                if (f.add(f.add(f.mul(x, x), f.mul(c1, x)), c0) == f.zero()) has_root = true;
            if (!has_root) {
                m0 = c0;
                m1 = c1;
                found = true;
                break;
            }
        }
        if (found) break;
    }

    Spread sp{Ambient::projective, {}};
    // (a + b*alpha) * (x0 + x1*alpha) with alpha^2 = -m1*alpha - m0 gives
    // the basis rows of the subspace {(w, w*s)}: already in RREF.
    for (Fe a : f.elements())
        for (Fe b : f.elements()) {
            Vec4 r1{f.one(), f.zero(), a, b};
            Vec4 r2{f.zero(), f.one(), f.neg(f.mul(m0, b)), f.sub(a, f.mul(m1, b))};
            sp.lines.push_back(s.line_id(Line{{r1, r2}}));
        }
    sp.lines.push_back(s.line_id(Line{{Vec4{f.zero(), f.zero(), f.one(), f.zero()},
                                       Vec4{f.zero(), f.zero(), f.zero(), f.one()}}}));
    sp.lines = detail::sorted_unique(sp.lines);
    return sp;
}

/// Affine restriction of a projective spread: drop its unique infinity
/// line.
inline Spread type1_affine_spread(const Space& s, const Spread& proj) {
    if (proj.ambient != Ambient::projective || !validate_spread(s, proj))
        throw std::invalid_argument("type I requires a valid projective spread");
    Spread out{Ambient::affine, {}};
    for (LineId l : proj.lines)
        if (s.is_affine_line(l)) out.lines.push_back(l);
    return out;
}

/// All q^2 affine lines through a fixed infinity point.
inline Spread type2_affine_spread(const Space& s, PointId p) {
    if (s.is_affine_point(p)) throw std::invalid_argument("type II anchor must be an infinity point");
    Spread out{Ambient::affine, {}};
    for (LineId l : s.star(p))
        if (s.is_affine_line(l)) out.lines.push_back(l);
    return out;
}

/// Generalized type II: for an infinity line ell, each of the q planes
/// through ell other than the infinity plane is assigned a point of ell,
/// and contributes the q affine lines through its point inside it.
inline Spread generalized_type2_spread(const Space& s, LineId ell,
                                       const std::map<PlaneId, PointId>& assignment) {
    if (!s.is_infinity_line(ell)) throw std::invalid_argument("generalized type II requires an infinity line");
    std::vector<PlaneId> planes;
    for (PlaneId pl : s.planes_through_line(ell))
        if (pl != s.infinity_plane()) planes.push_back(pl);
    if (assignment.size() != planes.size())
        throw std::invalid_argument("assignment must cover exactly the planes through the line");
    Spread out{Ambient::affine, {}};
    for (PlaneId pl : planes) {
        auto it = assignment.find(pl);
        if (it == assignment.end()) throw std::invalid_argument("assignment misses a plane through the line");
        PointId p = it->second;
        if (!s.point_on_line(p, ell)) throw std::invalid_argument("assigned point does not lie on the line");
        for (LineId l : s.pencil(p, pl))
            if (l != ell) out.lines.push_back(l);
    }
    out.lines = detail::sorted_unique(out.lines);
    return out;
}

/// The regulus through three pairwise skew lines, paired with its
/// opposite. r2 holds the q+1 common transversals, r1 the q+1 lines
/// meeting all of them (which include the three inputs); both cover the
/// same (q+1)^2 points of the underlying hyperbolic quadric.
inline SwitchingPair regulus(const Space& s, LineId l1, LineId l2, LineId l3) {
    if (l1 == l2 || l1 == l3 || l2 == l3 || s.lines_meet(l1, l2) || s.lines_meet(l1, l3) ||
        s.lines_meet(l2, l3))
        throw std::invalid_argument("regulus requires three pairwise skew lines");

    std::vector<LineId> transversals;
    for (PointId p : s.points_on_line(l1))
        for (LineId m : s.star(p))
            if (s.lines_meet(m, l2) && s.lines_meet(m, l3)) transversals.push_back(m);
    transversals = detail::sorted_unique(transversals);
    if (static_cast<int>(transversals.size()) != s.q() + 1)
        throw std::logic_error("unexpected transversal count for skew lines");

    std::vector<LineId> reg;
    for (PointId p : s.points_on_line(transversals[0]))
        for (LineId m : s.star(p)) {
            bool meets_all = true;
            for (LineId t : transversals) meets_all = meets_all && s.lines_meet(m, t);
            if (meets_all) reg.push_back(m);
        }
    reg = detail::sorted_unique(reg);
    if (static_cast<int>(reg.size()) != s.q() + 1)
        throw std::logic_error("unexpected regulus size");

    return {{Ambient::projective, std::move(reg)}, {Ambient::projective, std::move(transversals)}};
}

inline bool validate_switching_pair(const Space& s, const SwitchingPair& pair, Ambient amb) {
    if (pair.r1.ambient != amb || pair.r2.ambient != amb) return false;
    if (!validate_partial_spread(s, pair.r1.lines, amb) || !validate_partial_spread(s, pair.r2.lines, amb))
        return false;
    std::vector<LineId> common;
    std::ranges::set_intersection(detail::sorted_unique(pair.r1.lines), detail::sorted_unique(pair.r2.lines),
                                  std::back_inserter(common));
    if (!common.empty()) return false;
    std::vector<char> c1, c2;
    detail::mark_cover(s, pair.r1.lines, amb, c1);
    detail::mark_cover(s, pair.r2.lines, amb, c2);
    return c1 == c2;
}

enum class SpreadFamily { type1_collineations, type2_all, gen2_random };

inline SpreadFamily spread_family_from_string(const std::string& name) {
    if (name == "type1-from-regular-under-collineations") return SpreadFamily::type1_collineations;
    if (name == "type2-all") return SpreadFamily::type2_all;
    if (name == "generalized-type2-random") return SpreadFamily::gen2_random;
    throw std::invalid_argument("unknown spread family: " + name);
}

namespace detail {

using Mat4 = std::array<Vec4, 4>;

inline Mat4 random_invertible_matrix(const Gf& f, Rng& rng) {
    while (true) {
        Mat4 m;
        for (auto& row : m)
            for (auto& x : row) x = Fe(static_cast<unsigned>(rng.below(f.q())));
        std::vector<Vec4> copy(m.begin(), m.end());
        if (gf_rref(f, copy).size() == 4) return m;
    }
}

inline Vec4 apply_matrix(const Gf& f, const Vec4& v, const Mat4& m) {
    Vec4 out{};
    for (int j = 0; j < 4; ++j) {
        Fe acc = f.zero();
        for (int i = 0; i < 4; ++i) acc = f.add(acc, f.mul(v[i], m[i][j]));
        out[j] = acc;
    }
    return out;
}

inline Spread collineation_image(const Space& s, const Spread& sp, const Mat4& m) {
    Spread out{sp.ambient, {}};
    for (LineId l : sp.lines) {
        const auto& basis = s.line(l).basis;
        out.lines.push_back(s.line_from_span(apply_matrix(s.field(), basis[0], m),
                                             apply_matrix(s.field(), basis[1], m)));
    }
    out.lines = sorted_unique(out.lines);
    return out;
}

inline Spread random_gen2_spread(const Space& s, Rng& rng) {
    LineId ell = s.n_affine_lines() + static_cast<LineId>(rng.below(s.n_infinity_lines()));
    const auto& pts = s.points_on_line(ell);
    std::map<PlaneId, PointId> assignment;
    for (PlaneId pl : s.planes_through_line(ell)) {
        if (pl == s.infinity_plane()) continue;
        assignment[pl] = pts[rng.below(pts.size())];
    }
    return generalized_type2_spread(s, ell, assignment);
}

}  // namespace detail

/// Deterministic battery of affine spreads for the given seed. The
/// type2-all family ignores `count` and returns all q^2+q+1 spreads of
/// type II.
inline std::vector<Spread> spread_sampler(const Space& s, SpreadFamily family, int count,
                                          std::uint64_t seed) {
    std::vector<Spread> out;
    Rng rng(seed);
    switch (family) {
        case SpreadFamily::type2_all:
            for (PointId p = s.n_affine_points(); p < s.n_points(); ++p)
                out.push_back(type2_affine_spread(s, p));
            break;
        case SpreadFamily::type1_collineations: {
            Spread reg = regular_spread(s);
            for (int i = 0; i < count; ++i) {
                auto m = detail::random_invertible_matrix(s.field(), rng);
                out.push_back(type1_affine_spread(s, detail::collineation_image(s, reg, m)));
            }
            break;
        }
        case SpreadFamily::gen2_random:
            for (int i = 0; i < count; ++i) out.push_back(detail::random_gen2_spread(s, rng));
            break;
    }
    return out;
}

/// Seeded battery of fully checked switching pairs from reguli through
/// random skew line triples. In the affine ambient only pairs whose
/// 2(q+1) lines are all affine are kept.
inline std::vector<SwitchingPair> switching_pair_sampler(const Space& s, Ambient amb, int count,
                                                         std::uint64_t seed) {
    std::vector<SwitchingPair> out;
    Rng rng(seed);
    const int limit = amb == Ambient::affine ? s.n_affine_lines() : s.n_lines();
    while (static_cast<int>(out.size()) < count) {
        LineId l1 = static_cast<LineId>(rng.below(limit));
        LineId l2 = static_cast<LineId>(rng.below(limit));
        LineId l3 = static_cast<LineId>(rng.below(limit));
        if (l1 == l2 || l1 == l3 || l2 == l3) continue;
        if (s.lines_meet(l1, l2) || s.lines_meet(l1, l3) || s.lines_meet(l2, l3)) continue;
        SwitchingPair pair = regulus(s, l1, l2, l3);
        if (amb == Ambient::affine) {
            bool all_affine = true;
            for (LineId l : pair.r1.lines) all_affine = all_affine && s.is_affine_line(l);
            for (LineId l : pair.r2.lines) all_affine = all_affine && s.is_affine_line(l);
            if (!all_affine) continue;
            pair.r1.ambient = pair.r2.ambient = Ambient::affine;
        }
        out.push_back(std::move(pair));
    }
    return out;
}

}  // namespace clgeo
