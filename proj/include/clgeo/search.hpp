#pragma once

#include <cstdlib>
#include <future>
#include <thread>

#include "clgeo/clclass.hpp"
#include "clgeo/rng.hpp"

namespace clgeo {

/// Search state for the backtracking classifier. Lines are grouped into
/// parallel classes by infinity point; a class of parameter x takes
/// exactly x members from each parallel class, which is the strongest
/// cheap constraint available.
struct SearchNode {
    long long x = 0;
    int modulus = 0;                         // q+1
    long long disjoint_cap = 0;              // (q^2+1)(x-1)
    std::vector<int> class_count;            // members chosen per parallel class
    std::vector<int> class_remaining;        // selectable lines left per class
    std::vector<int> completed_plane_count;  // member counts of fully decided planes
    std::vector<int> chosen_disjoint;        // per chosen member: chosen members disjoint from it
};

enum class PruneDecision { keep, cut };

/// Sound necessary conditions only: per-class quota overflow or
/// unreachability, a completed plane with member count != 0 mod (q+1),
/// or a chosen member with more disjoint chosen members than any class
/// of parameter x allows.
inline PruneDecision prune_rules(const SearchNode& n) {
    for (std::size_t c = 0; c < n.class_count.size(); ++c) {
        if (n.class_count[c] > n.x) return PruneDecision::cut;
        if (n.class_count[c] + n.class_remaining[c] < n.x) return PruneDecision::cut;
    }
    for (int count : n.completed_plane_count)
        if (count % n.modulus != 0) return PruneDecision::cut;
    for (int d : n.chosen_disjoint)
        if (d > n.disjoint_cap) return PruneDecision::cut;
    return PruneDecision::keep;
}

struct SearchStats {
    long long nodes = 0;
    long long leaves = 0;
    long long pruned = 0;
    long long kernel_rejected = 0;
};

struct SearchResult {
    std::vector<LineSet> classes;
    SearchStats stats;
};

namespace detail {

inline std::vector<std::vector<std::int64_t>> kernel_vectors_i64(const RationalMatrix& m) {
    std::vector<std::vector<std::int64_t>> out;
    for (const auto& v : kernel_basis_integral(m)) {
        std::vector<std::int64_t> w(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (!v[i].fits_slong_p()) throw std::overflow_error("kernel entry exceeds 64 bits");
            w[i] = v[i].get_si();
        }
        out.push_back(std::move(w));
    }
    return out;
}

inline bool kernel_accepts(const std::vector<std::vector<std::int64_t>>& kernel,
                           const std::vector<LineId>& members) {
    for (const auto& k : kernel) {
        std::int64_t acc = 0;
        for (LineId l : members) acc += k[l];
        if (acc != 0) return false;
    }
    return true;
}

}  // namespace detail

/// Exhaustive classification of the affine Cameron-Liebler line classes
/// of parameter x, organized by parallel class with sound pruning; the
/// surviving assignments are kernel-tested and every emitted class is
/// re-verified with the full method battery. Tractable for q=2 (any x)
/// and q=3 with x <= 1.
inline SearchResult exhaustive_classify(const Space& s, const BlockIncidence& b, long long x) {
    const long long q = s.q();
    if (!(q == 2 || (q == 3 && x <= 1)))
        throw std::invalid_argument("classification supports q=2 (any x) and q=3 with x <= 1");
    if (x < 0) throw std::invalid_argument("parameter must be nonnegative");

    // parallel classes ordered along infinity lines, so planes complete early
    std::vector<PointId> class_points;
    std::vector<int> class_of_point(s.n_points(), -1);
    for (LineId l = s.n_affine_lines(); l < s.n_lines(); ++l)
        for (PointId p : s.points_on_line(l))
            if (class_of_point[p] < 0) {
                class_of_point[p] = static_cast<int>(class_points.size());
                class_points.push_back(p);
            }
    const int n_classes = static_cast<int>(class_points.size());
    std::vector<std::vector<LineId>> class_lines(n_classes);
    for (LineId l = 0; l < s.n_affine_lines(); ++l)
        class_lines[class_of_point[s.infinity_point_of(l)]].push_back(l);

    // affine planes complete once every parallel class meeting them is done
    std::vector<std::vector<PlaneId>> class_planes(n_classes);  // planes whose last class this is
    std::vector<int> plane_pending(s.n_planes(), 0);
    {
        std::vector<int> last_class(s.n_planes(), -1);
        for (PlaneId pl = 0; pl < s.n_planes(); ++pl) {
            if (pl == s.infinity_plane()) continue;
            for (PointId p = s.n_affine_points(); p < s.n_points(); ++p)
                if (s.point_on_plane(p, pl)) last_class[pl] = std::max(last_class[pl], class_of_point[p]);
            class_planes[last_class[pl]].push_back(pl);
        }
    }

    auto kernel = detail::kernel_vectors_i64(b.affine);

    SearchNode node;
    node.x = x;
    node.modulus = static_cast<int>(q + 1);
    node.disjoint_cap = (q * q + 1) * (x - 1);
    node.class_count.assign(n_classes, 0);
    node.class_remaining.assign(n_classes, static_cast<int>(q * q));

    SearchResult result;
    std::vector<LineId> chosen;
    std::vector<int> plane_count(s.n_planes(), 0);

    auto descend = [&](auto&& self, int ci) -> void {
        ++result.stats.nodes;
        if (prune_rules(node) == PruneDecision::cut) {
            ++result.stats.pruned;
            return;
        }
        if (ci == n_classes) {
            ++result.stats.leaves;
            if (!detail::kernel_accepts(kernel, chosen)) {
                ++result.stats.kernel_rejected;
                return;
            }
            LineSet found = make_line_set(s, Ambient::affine, chosen);
            VerificationReport report = verify(s, b, found);
            if (!report.is_cl || report.x != x)
                throw internal_error("search emitted a set the full verification rejects");
            result.classes.push_back(std::move(found));
            return;
        }

        const auto& lines = class_lines[ci];
        std::vector<int> idx(x);
        // all x-subsets of this parallel class, lexicographic
        if (x > static_cast<long long>(lines.size())) return;  // caught by prune_rules too
        for (long long i = 0; i < x; ++i) idx[i] = static_cast<int>(i);
        while (true) {
            // apply the subset
            const std::size_t base = chosen.size();
            for (long long i = 0; i < x; ++i) chosen.push_back(lines[idx[i]]);
            node.class_count[ci] = static_cast<int>(x);
            node.class_remaining[ci] = 0;
            const std::size_t planes_before = node.completed_plane_count.size();
            for (std::size_t i = base; i < chosen.size(); ++i) {
                node.chosen_disjoint.push_back(0);
                for (std::size_t j = 0; j < i; ++j)
                    if (!s.lines_meet_affinely(chosen[i], chosen[j])) {
                        ++node.chosen_disjoint[i];
                        ++node.chosen_disjoint[j];
                    }
                for (PlaneId pl : s.planes_through_line(chosen[i])) ++plane_count[pl];
            }
            for (PlaneId pl : class_planes[ci]) node.completed_plane_count.push_back(plane_count[pl]);

            self(self, ci + 1);

            // roll back
            node.completed_plane_count.resize(planes_before);
            for (std::size_t i = chosen.size(); i-- > base;) {
                for (PlaneId pl : s.planes_through_line(chosen[i])) --plane_count[pl];
                for (std::size_t j = 0; j < i; ++j)
                    if (!s.lines_meet_affinely(chosen[i], chosen[j])) --node.chosen_disjoint[j];
            }
            node.chosen_disjoint.resize(base);
            chosen.resize(base);
            node.class_count[ci] = 0;
            node.class_remaining[ci] = static_cast<int>(lines.size());

            // next subset
            long long pos = x - 1;
            while (pos >= 0 && idx[pos] == static_cast<int>(lines.size()) - (x - pos)) --pos;
            if (pos < 0) break;
            ++idx[pos];
            for (long long i = pos + 1; i < x; ++i) idx[i] = idx[i - 1] + 1;
        }
    };
    descend(descend, 0);

    std::ranges::sort(result.classes, {}, &LineSet::members);
    return result;
}

/// Uniformly random line set of the size a class of parameter x would
/// have; deterministic per seed.
inline LineSet random_negative(const Space& s, long long x, std::uint64_t seed) {
    const long long size = x * gaussian_binomial(3, 1, s.q());
    if (size > s.n_affine_lines()) throw std::invalid_argument("requested size exceeds the affine line count");
    Rng rng(seed);
    auto indices = rng.sample_indices(s.n_affine_lines(), static_cast<std::uint32_t>(size));
    return make_line_set(s, Ambient::affine, std::vector<LineId>(indices.begin(), indices.end()));
}

/// Parallelism cap: CLGEO_THREADS when set, else hardware concurrency,
/// clamped to [1, 8].
inline int thread_cap() {
    if (const char* env = std::getenv("CLGEO_THREADS")) {
        int v = std::atoi(env);
        if (v >= 1) return v;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return static_cast<int>(std::min(hw ? hw : 1u, 8u));
}

struct ReferenceResult {
    std::vector<std::vector<LineId>> classes;  // sorted member lists
    long long candidates = 0;
};

/// No-pruning reference: kernel-tests every single subset of the right
/// size. Only tractable at q=2 with x <= 1 (C(28,7) = 1,184,040
/// candidates); chunked over the first member and merged in order, so
/// results do not depend on the thread count.
inline ReferenceResult reference_classify(const Space& s, const BlockIncidence& b, long long x,
                                          int max_threads = 0) {
    if (s.q() != 2 || x > 1 || x < 0)
        throw std::invalid_argument("reference enumeration is only tractable for q=2 with x <= 1");
    ReferenceResult result;
    if (x == 0) {
        result.candidates = 1;
        result.classes.push_back({});
        return result;
    }
    const int n = s.n_affine_lines();  // 28
    const int k = 7;                   // x * (q^2+q+1)
    auto kernel = detail::kernel_vectors_i64(b.affine);

    auto run_chunk = [&](int first) {
        ReferenceResult local;
        std::vector<LineId> c(k);
        c[0] = first;
        for (int i = 1; i < k; ++i) c[i] = first + i;
        while (true) {
            ++local.candidates;
            if (detail::kernel_accepts(kernel, c)) local.classes.push_back(c);
            int pos = k - 1;
            while (pos >= 1 && c[pos] == n - (k - pos)) --pos;
            if (pos < 1) break;  // keep c[0] fixed to the chunk
            ++c[pos];
            for (int i = pos + 1; i < k; ++i) c[i] = c[i - 1] + 1;
        }
        return local;
    };

    const int threads = std::max(1, max_threads > 0 ? max_threads : thread_cap());
    std::vector<std::future<ReferenceResult>> futures;
    std::vector<ReferenceResult> chunks(n - k + 1);
    int next = 0;
    while (next < n - k + 1 || !futures.empty()) {
        while (next < n - k + 1 && static_cast<int>(futures.size()) < threads) {
            futures.push_back(std::async(std::launch::async, run_chunk, next));
            ++next;
        }
        int done_first = next - static_cast<int>(futures.size());
        chunks[done_first] = futures.front().get();
        futures.erase(futures.begin());
    }
    for (auto& chunk : chunks) {
        result.candidates += chunk.candidates;
        result.classes.insert(result.classes.end(), chunk.classes.begin(), chunk.classes.end());
    }
    return result;
}

}  // namespace clgeo
