#pragma once

#include <cstddef>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "clgeo/exactla.hpp"
#include "clgeo/geometry.hpp"

namespace clgeo {

/// Point-line incidence of PG(3,q) in the affine-first block layout
///
///     p3 = [ affine   0  ]
///          [ b2      p2  ]
///
/// affine is the point-line incidence matrix of AG(3,q); p2 is the one
/// of the infinity plane, a projective plane PG(2,q). The top-right
/// block is identically zero since no affine point lies on an infinity
/// line. Rows and columns follow the Space id order, recorded in the
/// index maps.
struct BlockIncidence {
    RationalMatrix p3;
    RationalMatrix affine;
    RationalMatrix b2;
    RationalMatrix p2;
    std::vector<PointId> row_points;  // p3 row -> point id
    std::vector<LineId> col_lines;    // p3 column -> line id
};

inline BlockIncidence build_incidence(const Space& s) {
    const int np = s.n_points(), nl = s.n_lines();
    const int nap = s.n_affine_points(), nal = s.n_affine_lines();
    BlockIncidence b{RationalMatrix(np, nl), RationalMatrix(nap, nal),
                     RationalMatrix(np - nap, nal), RationalMatrix(np - nap, nl - nal),
                     std::vector<PointId>(np), std::vector<LineId>(nl)};
    std::iota(b.row_points.begin(), b.row_points.end(), 0);
    std::iota(b.col_lines.begin(), b.col_lines.end(), 0);
    for (LineId l = 0; l < nl; ++l)
        for (PointId p : s.points_on_line(l)) {
            b.p3.at(p, l) = 1;
            if (p < nap && l < nal) b.affine.at(p, l) = 1;
            if (p >= nap && l < nal) b.b2.at(p - nap, l) = 1;
            if (p >= nap && l >= nal) b.p2.at(p - nap, l - nal) = 1;
        }
    return b;
}

struct RankReport {
    std::size_t rank_p3 = 0;
    std::size_t rank_a = 0;
    std::size_t rank_p2 = 0;
    bool all_full = false;
};

/// Exact ranks of the three incidence blocks; all_full means each has
/// rank equal to its row count.
inline RankReport full_rank_check(const BlockIncidence& b) {
    RankReport r;
    r.rank_p3 = rank(b.p3);
    r.rank_a = rank(b.affine);
    r.rank_p2 = rank(b.p2);
    r.all_full = r.rank_p3 == b.p3.rows() && r.rank_a == b.affine.rows() && r.rank_p2 == b.p2.rows();
    return r;
}

/// Restriction of a 0/1 vector over all PG lines to the affine lines.
/// The vector must have no support on infinity-line coordinates.
inline std::vector<int> restrict_vector(const BlockIncidence& b, const std::vector<int>& chi) {
    if (chi.size() != b.p3.cols()) throw std::invalid_argument("characteristic vector length mismatch");
    const std::size_t nal = b.affine.cols();
    for (std::size_t i = nal; i < chi.size(); ++i)
        if (chi[i] != 0) throw std::invalid_argument("vector is supported on an infinity line");
    return std::vector<int>(chi.begin(), chi.begin() + nal);
}

/// Plain text dump for external cross-checks: a "rows cols" header line,
/// then one space-separated row per line.
inline void write_matrix_text(std::ostream& os, const RationalMatrix& m) {
    os << m.rows() << ' ' << m.cols() << '\n';
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) {
            if (c) os << ' ';
            os << m.at(r, c);
        }
        os << '\n';
    }
}

}  // namespace clgeo
