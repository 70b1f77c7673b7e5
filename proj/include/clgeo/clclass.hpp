#pragma once

#include <chrono>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "clgeo/incidence.hpp"
#include "clgeo/spreads.hpp"

namespace clgeo {

/// Thrown when two verification methods that are provably equivalent
/// disagree; this always signals an implementation bug, never a property
/// of the input.
class internal_error : public std::logic_error {
    using std::logic_error::logic_error;
};

/// Candidate Cameron-Liebler line class: a set of lines of AG(3,q) or
/// PG(3,q) together with its characteristic vector over the ambient's
/// line universe (the affine universe is the prefix of the projective
/// one).
struct LineSet {
    Ambient ambient = Ambient::affine;
    std::vector<LineId> members;  // sorted, duplicate-free
    std::vector<char> chi;
};

inline LineSet make_line_set(const Space& s, Ambient amb, std::vector<LineId> members) {
    members = detail::sorted_unique(std::move(members));
    const int universe = amb == Ambient::affine ? s.n_affine_lines() : s.n_lines();
    LineSet out{amb, std::move(members), std::vector<char>(universe, 0)};
    for (LineId l : out.members) {
        if (l < 0 || l >= universe)
            throw std::invalid_argument(amb == Ambient::affine && l >= s.n_affine_lines() && l < s.n_lines()
                                            ? "affine line set contains an infinity line"
                                            : "line id out of range");
        out.chi[l] = 1;
    }
    return out;
}

/// Lines through a point in AG(3,q) or PG(3,q); also the divisor every
/// Cameron-Liebler line class size must have.
inline long long gaussian_binomial(int n, int k, long long q) {
    if (k < 0 || k > n) throw std::invalid_argument("gaussian binomial requires 0 <= k <= n");
    BigInt num = 1, den = 1, qz(static_cast<long>(q));
    for (int i = 0; i < k; ++i) {
        BigInt qn, qd;
        mpz_pow_ui(qn.get_mpz_t(), qz.get_mpz_t(), n - i);
        mpz_pow_ui(qd.get_mpz_t(), qz.get_mpz_t(), i + 1);
        num *= qn - 1;
        den *= qd - 1;
    }
    BigInt result = num / den;
    if (!result.fits_slong_p()) throw std::overflow_error("gaussian binomial overflows");
    return result.get_si();
}

/// x with |L| = x(q^2+q+1); throws when the size admits no parameter.
inline long long parameter_of(const Space& s, const LineSet& l) {
    const long long unit = gaussian_binomial(3, 1, s.q());
    if (l.members.size() % unit != 0)
        throw std::invalid_argument("line set size " + std::to_string(l.members.size()) +
                                    " is not a multiple of " + std::to_string(unit));
    return static_cast<long long>(l.members.size()) / unit;
}

// ---------------------------------------------------------------------
// Individual verification methods. "kernel" and the exhaustive counting
// methods are complete characterizations; spread and switching batteries
// are necessary conditions whose strength depends on the sample.

/// chi orthogonal to ker(M) for the ambient's incidence matrix, computed
/// both as explicit kernel-basis orthogonality and as row-space
/// membership of M; the two routes must agree.
inline bool check_kernel(const BlockIncidence& b, const LineSet& l) {
    const RationalMatrix& m = l.ambient == Ambient::affine ? b.affine : b.p3;
    std::vector<Rational> chi(l.chi.begin(), l.chi.end());
    bool orthogonal = true;
    for (const auto& v : kernel_basis(m))
        if (dot(chi, v) != 0) {
            orthogonal = false;
            break;
        }
    bool member = row_space_contains(m, chi);
    if (orthogonal != member)
        throw internal_error("kernel orthogonality and row-space membership disagree");
    return orthogonal;
}

struct SpreadSampleResult {
    bool constant = false;
    long long x = -1;  // the common intersection size when constant
};

/// Intersection sizes against a battery of line spreads. A constant
/// result is evidence, not proof; a non-constant one is conclusive.
inline SpreadSampleResult check_spread_sample(const Space& s, const LineSet& l,
                                              const std::vector<Spread>& battery) {
    if (battery.empty()) throw std::invalid_argument("empty spread battery");
    SpreadSampleResult result;
    bool first = true;
    for (const auto& sp : battery) {
        if (sp.ambient != l.ambient || !validate_spread(s, sp))
            throw std::invalid_argument("battery contains an invalid spread");
        long long count = 0;
        for (LineId m : sp.lines) count += l.chi[m];
        if (first) {
            result.x = count;
            result.constant = true;
            first = false;
        } else if (count != result.x) {
            result.constant = false;
            result.x = -1;
            return result;
        }
    }
    return result;
}

/// Equal intersection sizes with the two sides of every switching pair.
inline bool check_switching_sets(const Space& s, const LineSet& l,
                                 const std::vector<SwitchingPair>& pairs) {
    for (const auto& pair : pairs) {
        if (!validate_switching_pair(s, pair, l.ambient))
            throw std::invalid_argument("invalid switching pair in battery");
        long long c1 = 0, c2 = 0;
        for (LineId m : pair.r1.lines) c1 += l.chi[m];
        for (LineId m : pair.r2.lines) c2 += l.chi[m];
        if (c1 != c2) return false;
    }
    return true;
}

namespace detail {

// members of l through each point, indexed by PointId
inline std::vector<int> members_through_points(const Space& s, const LineSet& l) {
    std::vector<int> count(s.n_points(), 0);
    for (LineId m : l.members)
        for (PointId p : s.points_on_line(m)) ++count[p];
    return count;
}

}  // namespace detail

/// Exhaustive affine disjointness counts: every affine line ell must
/// have exactly (q^2+1)(x - chi(ell)) members disjoint from it in AG,
/// and every infinity point must lie on exactly x members. Complete for
/// line sets of valid size.
inline bool check_disjoint_counts(const Space& s, const LineSet& l) {
    if (l.ambient != Ambient::affine) throw std::invalid_argument("affine check on a projective set");
    const long long x = parameter_of(s, l);
    const long long q = s.q();

    auto through = detail::members_through_points(s, l);
    for (PointId p = s.n_affine_points(); p < s.n_points(); ++p)
        if (through[p] != x) return false;

    for (LineId ell = 0; ell < s.n_affine_lines(); ++ell) {
        long long meets = -static_cast<long long>(q) * l.chi[ell];
        for (PointId p : s.points_on_line(ell))
            if (s.is_affine_point(p)) meets += through[p];
        long long disjoint = static_cast<long long>(l.members.size()) - l.chi[ell] - meets;
        if (disjoint != (q * q + 1) * (x - l.chi[ell])) return false;
    }
    return true;
}

/// Projective analogue: every line of PG(3,q) must have exactly
/// (x - chi(ell)) q^2 members disjoint from it.
inline bool check_disjoint_counts_projective(const Space& s, const LineSet& l) {
    if (l.ambient != Ambient::projective) throw std::invalid_argument("projective check on an affine set");
    const long long x = parameter_of(s, l);
    const long long q = s.q();

    auto through = detail::members_through_points(s, l);
    for (LineId ell = 0; ell < s.n_lines(); ++ell) {
        long long meets = -static_cast<long long>(q + 1) * l.chi[ell];
        for (PointId p : s.points_on_line(ell)) meets += through[p];
        long long disjoint = static_cast<long long>(l.members.size()) - l.chi[ell] - meets;
        if (disjoint != q * q * (x - l.chi[ell])) return false;
    }
    return true;
}

/// For every incident point-plane pair (p, pi):
///   |star(p) ^ L| + |line(pi) ^ L| = x + (q+1)|pencil(p,pi) ^ L|.
inline bool check_point_plane_identity(const Space& s, const LineSet& l) {
    if (l.ambient != Ambient::projective) throw std::invalid_argument("projective check on an affine set");
    const long long x = parameter_of(s, l);
    const long long q = s.q();

    std::vector<long long> star_count(s.n_points(), 0), plane_count(s.n_planes(), 0);
    for (LineId m : l.members) {
        for (PointId p : s.points_on_line(m)) ++star_count[p];
        for (PlaneId pl : s.planes_through_line(m)) ++plane_count[pl];
    }
    for (PlaneId pl = 0; pl < s.n_planes(); ++pl)
        for (PointId p = 0; p < s.n_points(); ++p) {
            if (!s.point_on_plane(p, pl)) continue;
            long long pencil_count = 0;
            for (LineId m : s.pencil(p, pl)) pencil_count += l.chi[m];
            if (star_count[p] + plane_count[pl] != x + (q + 1) * pencil_count) return false;
        }
    return true;
}

// ---------------------------------------------------------------------
// Orchestrated verification

struct VerifyOptions {
    bool kernel = true;
    bool spreads = true;
    bool switching = true;
    bool counts = true;
    int spread_sample_count = 20;  // sampled spreads besides the full type II family
    int switching_pair_count = 20;
    std::uint64_t spread_seed = 1;
    std::uint64_t switching_seed = 2;
};

struct VerificationReport {
    Ambient ambient = Ambient::affine;
    std::size_t size = 0;
    bool size_valid = false;
    long long x = -1;
    std::vector<std::pair<std::string, bool>> methods;  // verdicts in run order
    bool is_cl = false;
    std::uint64_t spread_seed = 0;
    std::uint64_t switching_seed = 0;
    double elapsed_seconds = 0;  // informational only, excluded from comparisons

    bool verdict_of(const std::string& name, bool& out) const {
        for (const auto& [n, v] : methods)
            if (n == name) {
                out = v;
                return true;
            }
        return false;
    }
};

/// Default spread battery: for affine sets all q^2+q+1 spreads of type
/// II plus `count` sampled ones (half collineation images of the regular
/// spread, half generalized type II); for projective sets the regular
/// spread and its collineation images.
inline std::vector<Spread> default_spread_battery(const Space& s, Ambient amb, int count,
                                                  std::uint64_t seed) {
    std::vector<Spread> battery;
    if (amb == Ambient::affine) {
        battery = spread_sampler(s, SpreadFamily::type2_all, 0, seed);
        auto t1 = spread_sampler(s, SpreadFamily::type1_collineations, count / 2, seed);
        auto g2 = spread_sampler(s, SpreadFamily::gen2_random, count - count / 2, seed + 1);
        battery.insert(battery.end(), t1.begin(), t1.end());
        battery.insert(battery.end(), g2.begin(), g2.end());
        return battery;
    }
    Spread reg = regular_spread(s);
    battery.push_back(reg);
    Rng rng(seed);
    for (int i = 0; i < count; ++i) {
        auto m = detail::random_invertible_matrix(s.field(), rng);
        Spread img = detail::collineation_image(s, reg, m);
        battery.push_back(img);
    }
    return battery;
}

/// Runs the selected methods and enforces their provable relations:
/// the complete methods must agree with each other, and no battery may
/// reject a set a complete method accepts. Throws internal_error on
/// violation. Sets whose size admits no parameter are reported as not
/// Cameron-Liebler without running any method.
inline VerificationReport verify(const Space& s, const BlockIncidence& b, const LineSet& l,
                                 const VerifyOptions& opts = {}) {
    auto start = std::chrono::steady_clock::now();
    VerificationReport report;
    report.ambient = l.ambient;
    report.size = l.members.size();
    report.spread_seed = opts.spread_seed;
    report.switching_seed = opts.switching_seed;

    const long long unit = gaussian_binomial(3, 1, s.q());
    report.size_valid = l.members.size() % unit == 0;
    if (!report.size_valid) {
        report.is_cl = false;
        report.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        return report;
    }
    report.x = static_cast<long long>(l.members.size()) / unit;

    std::optional<bool> complete_verdict;
    auto note_complete = [&](const std::string& name, bool v) {
        if (complete_verdict && *complete_verdict != v)
            throw internal_error("complete verification methods disagree on " + name);
        complete_verdict = v;
        report.methods.emplace_back(name, v);
    };

    if (opts.kernel) note_complete("kernel", check_kernel(b, l));
    if (opts.counts) {
        if (l.ambient == Ambient::affine) {
            note_complete("counts", check_disjoint_counts(s, l));
        } else {
            note_complete("counts", check_disjoint_counts_projective(s, l));
            note_complete("point-plane", check_point_plane_identity(s, l));
        }
    }
    if (opts.spreads) {
        auto battery = default_spread_battery(s, l.ambient, opts.spread_sample_count, opts.spread_seed);
        auto sample = check_spread_sample(s, l, battery);
        bool v = sample.constant && sample.x == report.x;
        if (complete_verdict && *complete_verdict && !v)
            throw internal_error("a spread battery rejected a verified class");
        report.methods.emplace_back("spreads", v);
    }
    if (opts.switching) {
        auto pairs = switching_pair_sampler(s, l.ambient, opts.switching_pair_count, opts.switching_seed);
        bool v = check_switching_sets(s, l, pairs);
        if (complete_verdict && *complete_verdict && !v)
            throw internal_error("a switching-set battery rejected a verified class");
        report.methods.emplace_back("switching", v);
    }

    report.is_cl = !report.methods.empty();
    for (const auto& [name, v] : report.methods) report.is_cl = report.is_cl && v;
    report.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

/// All-method verification of a projective line set.
inline VerificationReport check_projective(const Space& s, const BlockIncidence& b, const LineSet& l) {
    if (l.ambient != Ambient::projective) throw std::invalid_argument("check_projective requires a projective set");
    return verify(s, b, l);
}

// ---------------------------------------------------------------------
// Closure operations and ambient transfer

inline LineSet complement(const Space& s, const LineSet& l) {
    const int universe = l.ambient == Ambient::affine ? s.n_affine_lines() : s.n_lines();
    std::vector<LineId> out;
    out.reserve(universe - l.members.size());
    for (LineId m = 0; m < universe; ++m)
        if (!l.chi[m]) out.push_back(m);
    return make_line_set(s, l.ambient, std::move(out));
}

inline LineSet union_disjoint(const Space& s, const LineSet& a, const LineSet& b) {
    if (a.ambient != b.ambient) throw std::invalid_argument("union requires matching ambients");
    for (LineId m : b.members)
        if (a.chi[m]) throw std::invalid_argument("union requires disjoint line sets");
    std::vector<LineId> out = a.members;
    out.insert(out.end(), b.members.begin(), b.members.end());
    return make_line_set(s, a.ambient, std::move(out));
}

inline LineSet difference_nested(const Space& s, const LineSet& outer, const LineSet& inner) {
    if (outer.ambient != inner.ambient) throw std::invalid_argument("difference requires matching ambients");
    for (LineId m : inner.members)
        if (!outer.chi[m]) throw std::invalid_argument("difference requires a nested subset");
    std::vector<LineId> out;
    for (LineId m : outer.members)
        if (!inner.chi[m]) out.push_back(m);
    return make_line_set(s, outer.ambient, std::move(out));
}

/// Ambient re-tag; affine lines keep their ids in the projective
/// universe, so membership is unchanged.
inline LineSet affine_to_projective(const Space& s, const LineSet& l) {
    if (l.ambient != Ambient::affine) throw std::invalid_argument("expected an affine line set");
    return make_line_set(s, Ambient::projective, l.members);
}

inline LineSet projective_to_affine(const Space& s, const LineSet& l) {
    if (l.ambient != Ambient::projective) throw std::invalid_argument("expected a projective line set");
    for (LineId m : l.members)
        if (s.is_infinity_line(m))
            throw std::invalid_argument("projective set contains infinity lines; no affine restriction");
    return make_line_set(s, Ambient::affine, l.members);
}

// ---------------------------------------------------------------------
// Congruence and parameter machinery (pure integer arithmetic)

/// binom(x,2) + n(n-x) == 0 mod (q+1), for the member count n in any
/// plane or through any point.
inline bool gavrilyuk_metsch(long long x, long long n, long long q) {
    const long long m = q + 1;
    auto mod = [m](long long v) { return ((v % m) + m) % m; };
    long long binom = mod(x % 2 == 0 ? (x / 2) % m * mod(x - 1) : x % m * (((x - 1) / 2) % m));
    return mod(binom + mod(n) * mod(n - x)) % m == 0;
}

/// x(x-1)/2 == 0 mod (q+1): the plane-at-infinity instance (n = 0).
inline bool affine_congruence(long long x, long long q) { return gavrilyuk_metsch(x, 0, q); }

/// Member counts of a verified class satisfy, modulo q+1, 0 in every
/// plane and x through every point.
inline bool plane_point_congruences(const Space& s, const LineSet& l, const VerificationReport& report) {
    if (!report.is_cl) throw std::invalid_argument("plane_point_congruences requires a verified class");
    if (l.ambient != Ambient::affine) throw std::invalid_argument("expected an affine line set");
    const long long q = s.q();
    std::vector<long long> star_count(s.n_points(), 0), plane_count(s.n_planes(), 0);
    for (LineId m : l.members) {
        for (PointId p : s.points_on_line(m)) ++star_count[p];
        for (PlaneId pl : s.planes_through_line(m)) ++plane_count[pl];
    }
    for (PlaneId pl = 0; pl < s.n_planes(); ++pl)
        if (plane_count[pl] % (q + 1) != 0) return false;
    for (PointId p = 0; p < s.n_points(); ++p)
        if (((star_count[p] - report.x) % (q + 1) + (q + 1)) % (q + 1) != 0) return false;
    return true;
}

namespace detail {

inline std::vector<std::pair<long long, long long>> prime_power_factorization(long long n) {
    std::vector<std::pair<long long, long long>> factors;  // (prime, prime^exponent)
    for (long long p = 2; p * p <= n; ++p) {
        if (n % p) continue;
        long long pk = 1;
        while (n % p == 0) {
            pk *= p;
            n /= p;
        }
        factors.emplace_back(p, pk);
    }
    if (n > 1) factors.emplace_back(n, n);
    return factors;
}

// x = r1 mod m1 and x = r2 mod m2 for coprime moduli
inline long long crt_pair(long long r1, long long m1, long long r2, long long m2) {
    long long t = 0, newt = 1, r = m1, newr = m2 % m1;
    while (newr != 0) {
        long long quot = r / newr;
        t = std::exchange(newt, t - quot * newt);
        r = std::exchange(newr, r - quot * newr);
    }
    // t = inverse of m2 mod m1
    long long diff = ((r1 - r2) % m1 + m1) % m1;
    long long k = (__int128(diff) * ((t % m1 + m1) % m1)) % m1;
    return r2 + m2 * k;
}

}  // namespace detail

/// All x in [0, q^2] with x(x-1) == 0 mod 2(q+1), computed by direct
/// scan and independently by CRT recombination over the prime-power
/// factorization of 2(q+1); the two routes must agree.
inline std::vector<long long> admissible_parameters(long long q) {
    const long long m = 2 * (q + 1);
    const long long limit = q * q;

    std::vector<long long> scan;
    for (long long x = 0; x <= limit; ++x)
        if ((x % m) * ((x - 1 + m) % m) % m == 0) scan.push_back(x);

    // CRT route: modulo each prime power, x must be 0 or 1
    auto factors = detail::prime_power_factorization(m);
    std::vector<long long> crt;
    for (std::uint32_t mask = 0; mask < (1u << factors.size()); ++mask) {
        long long r = 0, mod = 1;
        for (std::size_t i = 0; i < factors.size(); ++i) {
            long long target = (mask >> i) & 1;
            r = detail::crt_pair(target, factors[i].second, r, mod);
            mod *= factors[i].second;
        }
        r = ((r % m) + m) % m;
        for (long long x = r; x <= limit; x += m) crt.push_back(x);
    }
    std::ranges::sort(crt);
    crt.erase(std::unique(crt.begin(), crt.end()), crt.end());
    if (scan != crt) throw internal_error("admissible parameter scan and CRT recombination disagree");
    return scan;
}

/// Upper bound on the number of admissible parameters: 2^(s-1) q for
/// even q and 2^(s-1) q - 2^(s-1) + 2 for odd q, where s is the number
/// of distinct primes of 2(q+1).
inline long long admissible_bound(long long q) {
    const long long s = static_cast<long long>(detail::prime_power_factorization(2 * (q + 1)).size());
    const long long half_pow = 1ll << (s - 1);
    return q % 2 == 0 ? half_pow * q : half_pow * q - half_pow + 2;
}

// ---------------------------------------------------------------------
// Settled classifications for small q

struct KnownClassification {
    int q = 0;
    std::vector<long long> congruence_scan;   // admissible parameters by the congruence
    std::vector<long long> final_parameters;  // parameters of classes that exist
    bool all_trivial = false;                 // every class is empty, a pencil, or a complement
    std::vector<std::string> derivation;      // the exclusion chain, one step per entry
};

/// The settled parameter lists for AG(3,q), q in {2,3,4,5}. For q <= 4
/// every class is trivial; for q = 5 the classes with x in {12, 13} come
/// from an imported construction and its complement.
inline KnownClassification known_classification(int q) {
    KnownClassification k;
    k.q = q;
    k.congruence_scan = admissible_parameters(q);
    auto fmt = [](const std::vector<long long>& v) {
        std::string s = "{";
        for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
        return s + "}";
    };
    switch (q) {
        case 2:
        case 3:
            k.final_parameters = k.congruence_scan;
            k.all_trivial = true;
            k.derivation = {"congruence scan over [0, q^2] leaves " + fmt(k.congruence_scan),
                            "each remaining parameter is realized only by a trivial class"};
            break;
        case 4:
            k.final_parameters = {0, 1, 15, 16};
            k.all_trivial = true;
            k.derivation = {
                "congruence scan over [0, 16] leaves " + fmt(k.congruence_scan),
                "x=5 excluded: no class of parameter 5 exists in PG(3,4), hence none in AG(3,4)",
                "x=6 excluded: such a class would meet every plane in 3 mod 5 lines, but every "
                "plane count must be 0 mod 5",
                "x=10 and x=11 excluded as complements of 6 and 5",
                "remaining parameters " + fmt(k.final_parameters) + " are realized only by trivial classes"};
            break;
        case 5: {
            std::vector<long long> projective{0, 1, 2, 10, 12, 13, 14, 16, 24, 25, 26};
            std::vector<long long> reduced;
            for (long long x : projective)
                if (affine_congruence(x, 5)) reduced.push_back(x);
            k.final_parameters = reduced;  // {0,1,12,13,16,24,25}
            std::erase(k.final_parameters, 16);
            k.all_trivial = false;
            k.derivation = {
                "parameters possible in PG(3,5): " + fmt(projective),
                "affine congruence x(x-1)/2 = 0 mod 6 reduces the list to " + fmt(reduced),
                "x=16 excluded: its complement would have parameter 9, which is not possible in PG(3,5)",
                "all of " + fmt(k.final_parameters) +
                    " occur: 0 and 1 are trivial, 12 is an imported construction, and 13, 24, 25 "
                    "are complements"};
            break;
        }
        default:
            throw std::invalid_argument("no settled classification for q = " + std::to_string(q));
    }
    return k;
}

enum class TrivialKind { empty, pencil, pencil_complement, all };

/// The trivial affine classes: empty (x=0), point-pencil of an affine
/// point (x=1), its complement (x=q^2-1), and all affine lines (x=q^2).
inline LineSet trivial_example(const Space& s, TrivialKind kind, PointId anchor = -1) {
    switch (kind) {
        case TrivialKind::empty:
            return make_line_set(s, Ambient::affine, {});
        case TrivialKind::all: {
            std::vector<LineId> all(s.n_affine_lines());
            std::iota(all.begin(), all.end(), 0);
            return make_line_set(s, Ambient::affine, std::move(all));
        }
        case TrivialKind::pencil:
        case TrivialKind::pencil_complement: {
            if (anchor < 0 || anchor >= s.n_points() || !s.is_affine_point(anchor))
                throw std::invalid_argument("pencil anchor must be an affine point");
            LineSet pencil = make_line_set(s, Ambient::affine, s.star(anchor));
            return kind == TrivialKind::pencil ? pencil : complement(s, pencil);
        }
    }
    throw std::invalid_argument("unknown trivial kind");
}

}  // namespace clgeo
