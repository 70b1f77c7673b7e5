#pragma once

#include <algorithm>
#include <array>
#include <compare>
#include <cstddef>
#include <iterator>
#include <stdexcept>
#include <vector>

#include "clgeo/gf.hpp"

namespace clgeo {

using PointId = int;
using LineId = int;
using PlaneId = int;

using Vec4 = std::array<Fe, 4>;

/// Point of PG(3,q): nonzero coordinate vector normalized so the first
/// nonzero coordinate is 1, which makes the representative unique.
struct ProjPoint {
    Vec4 coords{};
    friend constexpr auto operator<=>(const ProjPoint&, const ProjPoint&) = default;
};

/// Plane of PG(3,q) as the normalized coefficient vector of its defining
/// linear form.
struct Plane {
    Vec4 dual{};
    friend constexpr auto operator<=>(const Plane&, const Plane&) = default;
};

/// Line of PG(3,q): 2x4 basis in reduced row echelon form. RREF is the
/// unique canonical representative of the 2-dimensional subspace, so
/// line equality is representational equality. Both basis rows are
/// themselves normalized points of the line.
struct Line {
    std::array<Vec4, 2> basis{};
    friend constexpr auto operator<=>(const Line&, const Line&) = default;
};

inline Vec4 normalized(const Gf& f, Vec4 raw) {
    for (auto& c : raw)
        if (c != f.zero()) {
            if (c == f.one()) return raw;
            Fe s = f.inv(c);
            for (auto& d : raw) d = f.mul(d, s);
            return raw;
        }
    throw std::invalid_argument("cannot normalize the zero vector");
}

inline ProjPoint make_point(const Gf& f, Vec4 raw) { return ProjPoint{normalized(f, raw)}; }
inline Plane make_plane(const Gf& f, Vec4 raw) { return Plane{normalized(f, raw)}; }

namespace detail {

// In-place RREF of a small matrix over GF(q); returns the pivot columns.
inline std::vector<int> gf_rref(const Gf& f, std::vector<Vec4>& m) {
    std::vector<int> pivots;
    std::size_t pivot_row = 0;
    for (int col = 0; col < 4 && pivot_row < m.size(); ++col) {
        std::size_t sel = pivot_row;
        while (sel < m.size() && m[sel][col] == f.zero()) ++sel;
        if (sel == m.size()) continue;
        std::swap(m[sel], m[pivot_row]);
        Fe s = f.inv(m[pivot_row][col]);
        for (auto& x : m[pivot_row]) x = f.mul(x, s);
        for (std::size_t r = 0; r < m.size(); ++r) {
            if (r == pivot_row || m[r][col] == f.zero()) continue;
            Fe factor = m[r][col];
            for (int c = 0; c < 4; ++c) m[r][c] = f.sub(m[r][c], f.mul(factor, m[pivot_row][c]));
        }
        pivots.push_back(col);
        ++pivot_row;
    }
    return pivots;
}

}  // namespace detail

/// Fully enumerated model of PG(3,q) with X0 = 0 as the hyperplane at
/// infinity; the affine space AG(3,q) is the complement. Immutable after
/// construction; every query is read-only.
///
/// Index conventions (all deterministic):
///   - points: the q^3 affine points (1,a,b,c) first, in lexicographic
///     order of the encodings (a,b,c), then the infinity points (0,...)
///     in lexicographic order. is_affine_point(id) == (id < q^3).
///   - lines: the q^2(q^2+q+1) affine lines first, then the infinity
///     lines, each block in lexicographic order of the flattened RREF
///     basis. is_affine_line(id) == (id < n_affine_lines()).
///   - planes: lexicographic over normalized dual vectors with the same
///     block scheme as points; the infinity plane (1,0,0,0) has id 0.
class Space {
public:
    explicit Space(Gf field) : field_(std::move(field)) {
        if (field_.q() > 9)
            throw std::invalid_argument("full line-level enumeration is limited to q <= 9");
        build();
    }

    const Gf& field() const { return field_; }
    int q() const { return field_.q(); }

    int n_points() const { return static_cast<int>(points_.size()); }
    int n_lines() const { return static_cast<int>(lines_.size()); }
    int n_planes() const { return static_cast<int>(planes_.size()); }
    int n_affine_points() const { return n_affine_points_; }
    int n_affine_lines() const { return n_affine_lines_; }
    int n_infinity_lines() const { return n_lines() - n_affine_lines_; }

    const std::vector<ProjPoint>& points() const { return points_; }
    const std::vector<Line>& lines() const { return lines_; }
    const std::vector<Plane>& planes() const { return planes_; }

    const ProjPoint& point(PointId id) const { return points_[id]; }
    const Line& line(LineId id) const { return lines_[id]; }
    const Plane& plane(PlaneId id) const { return planes_[id]; }

    bool is_affine_point(PointId id) const { return id < n_affine_points_; }
    bool is_affine_line(LineId id) const { return id < n_affine_lines_; }
    bool is_infinity_line(LineId id) const { return id >= n_affine_lines_; }
    PlaneId infinity_plane() const { return 0; }

    PointId point_id(const ProjPoint& p) const { return block_index(p.coords); }
    PlaneId plane_id(const Plane& pl) const { return block_index(pl.dual); }

    LineId line_id(const Line& l) const {
        bool affine = l.basis[0][0] == field_.one();
        auto begin = lines_.begin() + (affine ? 0 : n_affine_lines_);
        auto end = affine ? lines_.begin() + n_affine_lines_ : lines_.end();
        auto it = std::lower_bound(begin, end, l);
        if (it == end || *it != l) throw std::invalid_argument("not a canonical line of this space");
        return static_cast<LineId>(it - lines_.begin());
    }

    /// Canonical line spanned by two independent vectors.
    LineId line_from_span(Vec4 u, Vec4 v) const {
        std::vector<Vec4> m{u, v};
        if (detail::gf_rref(field_, m).size() != 2)
            throw std::invalid_argument("vectors do not span a line");
        return line_id(Line{{m[0], m[1]}});
    }

    LineId line_through(PointId p1, PointId p2) const {
        if (p1 == p2) throw std::invalid_argument("line_through requires two distinct points");
        return line_from_span(points_[p1].coords, points_[p2].coords);
    }

    const std::vector<PointId>& points_on_line(LineId l) const { return line_points_[l]; }
    const std::vector<PlaneId>& planes_through_line(LineId l) const { return line_planes_[l]; }

    /// All q^2+q+1 lines through a point.
    const std::vector<LineId>& star(PointId p) const { return point_lines_[p]; }

    /// All q^2+q+1 lines inside a plane.
    const std::vector<LineId>& line_set(PlaneId pl) const { return plane_lines_[pl]; }

    /// The q+1 lines through p inside pl; requires p on pl.
    std::vector<LineId> pencil(PointId p, PlaneId pl) const {
        if (!point_on_plane(p, pl)) throw std::invalid_argument("pencil requires an incident point-plane pair");
        std::vector<LineId> out;
        std::ranges::set_intersection(point_lines_[p], plane_lines_[pl], std::back_inserter(out));
        return out;
    }

    bool point_on_plane(PointId p, PlaneId pl) const {
        const Vec4& c = points_[p].coords;
        const Vec4& d = planes_[pl].dual;
        Fe acc = field_.zero();
        for (int i = 0; i < 4; ++i) acc = field_.add(acc, field_.mul(c[i], d[i]));
        return acc == field_.zero();
    }

    bool point_on_line(PointId p, LineId l) const {
        return std::ranges::binary_search(line_points_[l], p);
    }

    /// The unique point of an affine line on the infinity plane.
    PointId infinity_point_of(LineId l) const {
        if (is_infinity_line(l)) throw std::invalid_argument("infinity_point_of requires an affine line");
        return line_infinity_point_[l];
    }

    /// Lines sharing at least one projective point.
    bool lines_meet(LineId a, LineId b) const {
        return first_common_point(a, b) >= 0;
    }

    /// Lines sharing an affine point (parallel affine lines do not).
    bool lines_meet_affinely(LineId a, LineId b) const {
        PointId p = first_common_point(a, b);
        return p >= 0 && is_affine_point(p);
    }

private:
    // Distinct lines share at most one point; for a line paired with
    // itself this returns its lowest point id, which is affine exactly
    // when the line is.
    PointId first_common_point(LineId a, LineId b) const {
        const auto& pa = line_points_[a];
        const auto& pb = line_points_[b];
        std::size_t i = 0, j = 0;
        while (i < pa.size() && j < pb.size()) {
            if (pa[i] == pb[j]) return pa[i];
            (pa[i] < pb[j]) ? ++i : ++j;
        }
        return -1;
    }

    int block_index(const Vec4& v) const {
        const int q = field_.q();
        if (v[0] == field_.one()) return (v[1].v * q + v[2].v) * q + v[3].v;
        if (v[1] == field_.one()) return q * q * q + v[2].v * q + v[3].v;
        if (v[2] == field_.one()) return q * q * q + q * q + v[3].v;
        if (v[3] == field_.one()) return q * q * q + q * q + q;
        throw std::invalid_argument("vector is not normalized");
    }

    void build() {
        const int q = field_.q();
        const auto els = field_.elements();
        n_affine_points_ = q * q * q;

        // Points and planes share the normalized-vector enumeration.
        points_.reserve(q * q * q + q * q + q + 1);
        for (Fe a : els)
            for (Fe b : els)
                for (Fe c : els) points_.push_back(ProjPoint{{field_.one(), a, b, c}});
        for (Fe b : els)
            for (Fe c : els) points_.push_back(ProjPoint{{field_.zero(), field_.one(), b, c}});
        for (Fe c : els) points_.push_back(ProjPoint{{field_.zero(), field_.zero(), field_.one(), c}});
        points_.push_back(ProjPoint{{field_.zero(), field_.zero(), field_.zero(), field_.one()}});
        planes_.reserve(points_.size());
        for (const auto& p : points_) planes_.push_back(Plane{p.coords});

        build_lines();

        line_points_.resize(lines_.size());
        point_lines_.resize(points_.size());
        line_infinity_point_.assign(lines_.size(), -1);
        for (LineId l = 0; l < n_lines(); ++l) {
            const auto& [r1, r2] = lines_[l].basis;
            auto& pts = line_points_[l];
            pts.reserve(q + 1);
            for (Fe t : els) {
                Vec4 c;
                for (int i = 0; i < 4; ++i) c[i] = field_.add(r1[i], field_.mul(t, r2[i]));
                pts.push_back(block_index(c));  // r1 + t*r2 is already normalized
            }
            pts.push_back(block_index(r2));
            std::ranges::sort(pts);
            for (PointId p : pts) point_lines_[p].push_back(l);
            if (is_affine_line(l)) line_infinity_point_[l] = block_index(r2);
        }
        for (auto& star : point_lines_) std::ranges::sort(star);

        line_planes_.resize(lines_.size());
        plane_lines_.resize(planes_.size());
        for (LineId l = 0; l < n_lines(); ++l) {
            for (PlaneId pl : dual_span(lines_[l])) line_planes_[l].push_back(pl);
            std::ranges::sort(line_planes_[l]);
            for (PlaneId pl : line_planes_[l]) plane_lines_[pl].push_back(l);
        }
        for (auto& ls : plane_lines_) std::ranges::sort(ls);
    }

    // All 2x4 RREF matrices of rank 2, i.e. all canonical lines. A line
    // lies in the infinity plane exactly when its first pivot column is
    // not column 0.
    void build_lines() {
        const auto els = field_.elements();
        std::vector<Line> affine, infinity;
        for (int c1 = 0; c1 < 4; ++c1)
            for (int c2 = c1 + 1; c2 < 4; ++c2) {
                std::vector<int> free1, free2;
                for (int c = c1 + 1; c < 4; ++c)
                    if (c != c2) free1.push_back(c);
                for (int c = c2 + 1; c < 4; ++c) free2.push_back(c);
                const auto n_free = free1.size() + free2.size();
                std::vector<Fe> assignment(n_free, field_.zero());
                while (true) {
                    Line l;
                    l.basis[0][c1] = field_.one();
                    l.basis[1][c2] = field_.one();
                    std::size_t k = 0;
                    for (int c : free1) l.basis[0][c] = assignment[k++];
                    for (int c : free2) l.basis[1][c] = assignment[k++];
                    (c1 == 0 ? affine : infinity).push_back(l);
                    // odometer over the free entries
                    std::size_t i = 0;
                    while (i < n_free) {
                        if (assignment[i].v + 1U < static_cast<unsigned>(field_.q())) {
                            assignment[i] = Fe(assignment[i].v + 1);
                            break;
                        }
                        assignment[i] = field_.zero();
                        ++i;
                    }
                    if (i == n_free) break;
                }
            }
        std::ranges::sort(affine);
        std::ranges::sort(infinity);
        n_affine_lines_ = static_cast<int>(affine.size());
        lines_ = std::move(affine);
        lines_.insert(lines_.end(), infinity.begin(), infinity.end());
    }

    // The q+1 planes through a line: normalized vectors of the dual
    // (2-dimensional) null space of its basis.
    std::vector<PlaneId> dual_span(const Line& l) const {
        std::vector<Vec4> m{l.basis[0], l.basis[1]};
        auto pivots = detail::gf_rref(field_, m);
        std::array<bool, 4> is_pivot{};
        for (int c : pivots) is_pivot[c] = true;
        std::vector<Vec4> kernel;
        for (int fcol = 0; fcol < 4; ++fcol) {
            if (is_pivot[fcol]) continue;
            Vec4 v{};
            v[fcol] = field_.one();
            for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = field_.neg(m[r][fcol]);
            kernel.push_back(v);
        }
        std::vector<PlaneId> out;
        out.reserve(field_.q() + 1);
        for (Fe t : field_.elements()) {
            Vec4 d;
            for (int i = 0; i < 4; ++i) d[i] = field_.add(kernel[0][i], field_.mul(t, kernel[1][i]));
            out.push_back(plane_id(make_plane(field_, d)));
        }
        out.push_back(plane_id(make_plane(field_, kernel[1])));
        return out;
    }

    Gf field_;
    int n_affine_points_ = 0;
    int n_affine_lines_ = 0;
    std::vector<ProjPoint> points_;
    std::vector<Plane> planes_;
    std::vector<Line> lines_;
    std::vector<std::vector<PointId>> line_points_;
    std::vector<std::vector<LineId>> point_lines_;
    std::vector<std::vector<PlaneId>> line_planes_;
    std::vector<std::vector<LineId>> plane_lines_;
    std::vector<PointId> line_infinity_point_;
};

}  // namespace clgeo
