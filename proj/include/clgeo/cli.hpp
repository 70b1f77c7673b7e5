#pragma once

#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "clgeo/lineset_json.hpp"
#include "clgeo/search.hpp"

namespace clgeo::cli {

struct FieldSpec {
    int p = 0;
    int h = 1;
    long long q = 0;
};

inline std::pair<int, int> resolve_prime_power(long long q) {
    if (q < 2) throw input_error("q must be at least 2");
    long long p = 2;
    while (p * p <= q && q % p != 0) ++p;
    if (q % p != 0) p = q;
    long long t = q;
    int h = 0;
    while (t % p == 0) {
        t /= p;
        ++h;
    }
    if (t != 1) throw input_error(std::to_string(q) + " is not a prime power");
    return {static_cast<int>(p), h};
}

inline std::pair<int, int> resolve_field_spec(const FieldSpec& fs) {
    if (fs.q > 0) {
        if (fs.p > 0) throw input_error("give either --q or --p/--h, not both");
        return resolve_prime_power(fs.q);
    }
    if (fs.p <= 0) throw input_error("a field is required: --q or --p (with --h)");
    return {fs.p, fs.h};
}

inline Gf make_field(const FieldSpec& fs) {
    auto [p, h] = resolve_field_spec(fs);
    try {
        return Gf(p, h);
    } catch (const std::invalid_argument& e) {
        throw input_error(e.what());
    }
}

inline Space make_space(const FieldSpec& fs) {
    try {
        return Space(make_field(fs));
    } catch (const std::invalid_argument& e) {
        throw input_error(e.what());
    }
}

namespace detail {

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(item);
    return out;
}

inline long long parse_int(const std::string& s) {
    try {
        std::size_t pos = 0;
        long long v = std::stoll(s, &pos);
        if (pos != s.size()) throw input_error("not an integer: " + s);
        return v;
    } catch (const std::exception&) {
        throw input_error("not an integer: " + s);
    }
}

inline Vec4 parse_coords(const Space& s, const std::string& text) {
    auto parts = split(text, ',');
    if (parts.size() != 4) throw input_error("expected 4 comma-separated coordinates: " + text);
    Vec4 v;
    for (int i = 0; i < 4; ++i) {
        long long c = parse_int(parts[i]);
        if (c < 0 || c >= s.q()) throw input_error("coordinate encoding out of range: " + parts[i]);
        v[i] = Fe(static_cast<unsigned>(c));
    }
    return v;
}

inline Json lines_to_json(const Space& s, const std::vector<LineId>& members) {
    Json lines = Json::array();
    for (LineId id : members) {
        Json pts = Json::array();
        for (const auto& row : s.line(id).basis) {
            Json coords = Json::array();
            for (Fe c : row) coords.push_back(c.v);
            pts.push_back(coords);
        }
        lines.push_back(pts);
    }
    return lines;
}

}  // namespace detail

// ---------------------------------------------------------------- info

inline int run_info(const FieldSpec& fs) {
    Space s = make_space(fs);
    const Gf& f = s.field();
    std::cout << "field: GF(" << f.q() << ")";
    if (f.h() > 1) std::cout << " = GF(" << f.p() << "^" << f.h() << ")";
    std::cout << ", modulus coefficients (constant first):";
    for (int c : f.modulus()) std::cout << ' ' << c;
    std::cout << '\n';
    std::cout << "points: " << s.n_points() << " (affine " << s.n_affine_points() << ", infinity "
              << s.n_points() - s.n_affine_points() << ")\n";
    std::cout << "lines: " << s.n_lines() << " (affine " << s.n_affine_lines() << ", infinity "
              << s.n_infinity_lines() << ")\n";
    std::cout << "planes: " << s.n_planes() << '\n';
    RankReport r = full_rank_check(build_incidence(s));
    std::cout << "rank P3: " << r.rank_p3 << " of " << s.n_points() << '\n';
    std::cout << "rank A: " << r.rank_a << " of " << s.n_affine_points() << '\n';
    std::cout << "rank P2: " << r.rank_p2 << " of " << s.n_points() - s.n_affine_points() << '\n';
    std::cout << (r.all_full ? "all incidence matrices have full rank\n"
                             : "WARNING: an incidence matrix is rank-deficient\n");
    return r.all_full ? 0 : 3;  // rank deficiency would contradict a theorem
}

// -------------------------------------------------------------- spread

inline int run_spread(const FieldSpec& fs, const std::string& family, const std::string& point,
                      std::optional<std::uint64_t> seed, const std::string& output) {
    Space s = make_space(fs);
    auto parts = detail::split(family, ':');
    const std::string& kind = parts[0];
    Spread sp;

    if (kind == "regular") {
        sp = regular_spread(s);
    } else if (kind == "type1") {
        Spread proj = regular_spread(s);
        if (seed) {
            Rng rng(*seed);
            proj = clgeo::detail::collineation_image(s, proj,
                                                     clgeo::detail::random_invertible_matrix(s.field(), rng));
        }
        sp = type1_affine_spread(s, proj);
    } else if (kind == "type2") {
        std::string coords = parts.size() > 1 ? parts[1] : point;
        if (coords.empty()) throw input_error("type2 needs an infinity point: --point c0,c1,c2,c3");
        PointId anchor = s.point_id(make_point(s.field(), detail::parse_coords(s, coords)));
        try {
            sp = type2_affine_spread(s, anchor);
        } catch (const std::invalid_argument& e) {
            throw input_error(e.what());
        }
    } else if (kind == "gen2") {
        if (parts.size() <= 1 || parts[1] == "random" || (parts.size() > 2 && parts[2] == "random")) {
            if (parts.size() > 2) {
                // gen2:<line-id>:random — random assignment on a fixed line
                LineId ell = static_cast<LineId>(detail::parse_int(parts[1]));
                if (ell < s.n_affine_lines() || ell >= s.n_lines())
                    throw input_error("gen2 needs an infinity line id");
                Rng rng(seed.value_or(0));
                const auto& pts = s.points_on_line(ell);
                std::map<PlaneId, PointId> assignment;
                for (PlaneId pl : s.planes_through_line(ell))
                    if (pl != s.infinity_plane()) assignment[pl] = pts[rng.below(pts.size())];
                sp = generalized_type2_spread(s, ell, assignment);
            } else {
                sp = spread_sampler(s, SpreadFamily::gen2_random, 1, seed.value_or(0)).front();
            }
        } else {
            // gen2:<line-id>:<i0,i1,...>: per-plane indices into the points on the line,
            // planes ordered by increasing plane id (infinity plane excluded)
            LineId ell = static_cast<LineId>(detail::parse_int(parts[1]));
            if (ell < s.n_affine_lines() || ell >= s.n_lines())
                throw input_error("gen2 needs an infinity line id");
            auto idx = detail::split(parts[2], ',');
            const auto& pts = s.points_on_line(ell);
            std::vector<PlaneId> planes;
            for (PlaneId pl : s.planes_through_line(ell))
                if (pl != s.infinity_plane()) planes.push_back(pl);
            if (idx.size() != planes.size())
                throw input_error("gen2 assignment needs one point index per plane (" +
                                  std::to_string(planes.size()) + ")");
            std::map<PlaneId, PointId> assignment;
            for (std::size_t i = 0; i < planes.size(); ++i) {
                long long k = detail::parse_int(idx[i]);
                if (k < 0 || k >= static_cast<long long>(pts.size()))
                    throw input_error("point index out of range: " + idx[i]);
                assignment[planes[i]] = pts[k];
            }
            sp = generalized_type2_spread(s, ell, assignment);
        }
    } else {
        throw input_error("unknown spread family: " + kind +
                          " (expected regular, type1, type2, gen2)");
    }

    if (!validate_spread(s, sp)) throw internal_error("constructed spread failed validation");

    Json meta{{"role", "spread"}, {"family", family}};
    if (seed)
        meta["seed"] = *seed;
    else
        meta["seed"] = nullptr;
    LineSet as_set = make_line_set(s, sp.ambient, sp.lines);
    write_json_atomic(output, line_set_to_json(s, as_set, meta));
    std::cout << "wrote " << sp.lines.size() << "-line " << to_string(sp.ambient) << " spread to "
              << output << '\n';
    return 0;
}

// -------------------------------------------------------------- verify

inline VerifyOptions parse_methods(const std::string& methods) {
    VerifyOptions opts;
    opts.kernel = opts.spreads = opts.switching = opts.counts = false;
    for (const std::string& m : detail::split(methods, ',')) {
        if (m == "all")
            opts.kernel = opts.spreads = opts.switching = opts.counts = true;
        else if (m == "kernel")
            opts.kernel = true;
        else if (m == "spreads")
            opts.spreads = true;
        else if (m == "switching")
            opts.switching = true;
        else if (m == "counts")
            opts.counts = true;
        else
            throw input_error("unknown method: " + m + " (expected kernel,spreads,switching,counts,all)");
    }
    if (!(opts.kernel || opts.spreads || opts.switching || opts.counts))
        throw input_error("no verification method selected");
    return opts;
}

inline int run_verify(const std::string& input, const std::string& ambient_flag,
                      const std::string& methods, std::optional<std::uint64_t> seed,
                      std::string output) {
    if (ambient_flag != "affine" && ambient_flag != "projective")
        throw input_error("--ambient must be affine or projective");
    Json j = read_json_file(input);
    if (!j.is_object() || !j.contains("field")) throw input_error("not a line-set file");
    Gf f = field_from_json(j.at("field"));
    Space s = [&] {
        try {
            return Space(std::move(f));
        } catch (const std::invalid_argument& e) {
            throw input_error(e.what());
        }
    }();
    LoadedLineSet loaded = line_set_from_json(s, j);
    Ambient requested = ambient_flag == "affine" ? Ambient::affine : Ambient::projective;
    if (loaded.set.ambient != requested)
        throw input_error("file ambient is " + to_string(loaded.set.ambient) + ", not " + ambient_flag);

    VerifyOptions opts = parse_methods(methods);
    if (seed) {
        opts.spread_seed = *seed;
        opts.switching_seed = *seed + 1;
    }
    BlockIncidence b = build_incidence(s);
    VerificationReport report = verify(s, b, loaded.set, opts);

    Json rj = report_to_json(s.field(), report);
    rj["input"] = input;
    if (output.empty()) output = input + ".report.json";
    write_json_atomic(output, rj);

    if (report.is_cl)
        std::cout << "Cameron-Liebler line class, x = " << report.x << " (report: " << output << ")\n";
    else
        std::cout << "not a Cameron-Liebler line class (report: " << output << ")\n";
    return report.is_cl ? 0 : 1;
}

// -------------------------------------------------------------- params

inline int run_params(const FieldSpec& fs, const std::string& output) {
    auto [p, h] = resolve_field_spec(fs);
    if (!clgeo::detail::is_prime(p)) throw input_error(std::to_string(p) + " is not prime");
    long long q = 1;
    for (int i = 0; i < h; ++i) q *= p;
    if (q > 1024) throw input_error("params supports q up to 1024");

    auto admissible = admissible_parameters(q);
    long long bound = admissible_bound(q);
    std::cout << "q = " << q << '\n';
    std::cout << "admissible x in [0, q^2] by the congruence x(x-1) = 0 mod 2(q+1):";
    for (long long x : admissible) std::cout << ' ' << x;
    std::cout << '\n';
    std::cout << "count " << admissible.size() << ", upper bound " << bound << '\n';

    Json cj = nullptr;
    if (q >= 2 && q <= 5) {
        KnownClassification k = known_classification(static_cast<int>(q));
        std::cout << "settled parameters:";
        for (long long x : k.final_parameters) std::cout << ' ' << x;
        std::cout << (k.all_trivial ? "  (all classes trivial)\n" : "\n");
        for (const auto& step : k.derivation) std::cout << "  - " << step << '\n';
        cj = Json{{"final_parameters", k.final_parameters},
                  {"all_trivial", k.all_trivial},
                  {"derivation", k.derivation}};
    } else {
        std::cout << "no settled classification for this q\n";
    }

    if (!output.empty()) {
        Json j{{"format", "clgeo-params-v1"},
               {"q", q},
               {"admissible", admissible},
               {"bound", bound},
               {"classification", cj}};
        write_json_atomic(output, j);
    }
    return 0;
}

// ------------------------------------------------------------ classify

inline int run_classify(const FieldSpec& fs, long long x, const std::string& output,
                        bool with_reference) {
    Space s = make_space(fs);
    BlockIncidence b = build_incidence(s);
    SearchResult result = [&] {
        try {
            return exhaustive_classify(s, b, x);
        } catch (const std::invalid_argument& e) {
            throw input_error(e.what());
        }
    }();

    std::ostringstream lines;
    for (const auto& c : result.classes) {
        Json record{{"type", "class"}, {"x", x}, {"lines", detail::lines_to_json(s, c.members)}};
        lines << record.dump() << '\n';
    }
    Json summary{{"type", "summary"},      {"q", s.q()},
                 {"x", x},                 {"count", result.classes.size()},
                 {"nodes", result.stats.nodes}, {"leaves", result.stats.leaves},
                 {"pruned", result.stats.pruned}, {"kernel_rejected", result.stats.kernel_rejected}};
    if (with_reference) {
        ReferenceResult ref = [&] {
            try {
                return reference_classify(s, b, x);
            } catch (const std::invalid_argument& e) {
                throw input_error(e.what());
            }
        }();
        std::set<std::vector<LineId>> found, expect;
        for (const auto& c : result.classes) found.insert(c.members);
        for (const auto& c : ref.classes) expect.insert(c);
        if (found != expect)
            throw internal_error("pruned search and no-pruning reference enumeration disagree");
        summary["reference_candidates"] = ref.candidates;
        summary["reference_count"] = ref.classes.size();
        summary["reference_agrees"] = true;
    }
    lines << summary.dump() << '\n';
    write_text_atomic(output, lines.str());
    std::cout << "found " << result.classes.size() << " classes of parameter " << x << " (results: "
              << output << ")\n";
    return 0;
}

// ---------------------------------------------------------------- main

inline int cli_main(int argc, const char* const* argv) {
    CLI::App app{"Cameron-Liebler line classes in PG(3,q) and AG(3,q)"};
    app.require_subcommand(1);
    app.set_help_flag("--help", "print help");  // frees -h/--h for the field degree

    FieldSpec info_fs;
    auto* info = app.add_subcommand("info", "geometry counts and incidence ranks");
    info->set_help_flag("--help", "print help");
    info->add_option("--p", info_fs.p, "prime characteristic");
    info->add_option("--h", info_fs.h, "extension degree");
    info->add_option("--q", info_fs.q, "field order (prime power)");

    FieldSpec spread_fs;
    std::string spread_family, spread_point, spread_output;
    std::uint64_t spread_seed = 0;
    auto* spread = app.add_subcommand("spread", "construct a validated line spread file");
    spread->set_help_flag("--help", "print help");
    spread->add_option("--p", spread_fs.p, "prime characteristic");
    spread->add_option("--h", spread_fs.h, "extension degree");
    spread->add_option("--q", spread_fs.q, "field order (prime power)");
    spread->add_option("--family", spread_family,
                       "regular | type1 | type2[:<point>] | gen2[:<line-id>:<assignment|random>]")
        ->required();
    spread->add_option("--point", spread_point, "infinity point for type2, as c0,c1,c2,c3");
    auto* spread_seed_opt = spread->add_option("--seed", spread_seed, "seed for randomized families");
    spread->add_flag("--random", "draw the gen2 line and assignment at random (the default "
                                 "when no explicit assignment is given)");
    spread->add_option("--output", spread_output, "output line-set JSON path")->required();

    std::string verify_input, verify_ambient, verify_methods = "all", verify_output;
    std::uint64_t verify_seed = 0;
    auto* verify_cmd = app.add_subcommand("verify", "verify a line-set file");
    verify_cmd->set_help_flag("--help", "print help");
    verify_cmd->add_option("--input", verify_input, "line-set JSON path")->required();
    verify_cmd->add_option("--ambient", verify_ambient, "affine | projective")->required();
    verify_cmd->add_option("--methods", verify_methods, "comma list of kernel,spreads,switching,counts,all");
    auto* verify_seed_opt = verify_cmd->add_option("--seed", verify_seed, "battery seed");
    verify_cmd->add_option("--output", verify_output, "report JSON path (default <input>.report.json)");

    FieldSpec params_fs;
    std::string params_output;
    auto* params = app.add_subcommand("params", "admissible parameters, bound, settled classifications");
    params->set_help_flag("--help", "print help");
    params->add_option("--p", params_fs.p, "prime characteristic");
    params->add_option("--h", params_fs.h, "extension degree");
    params->add_option("--q", params_fs.q, "field order (prime power)");
    params->add_option("--output", params_output, "optional JSON output path");

    FieldSpec classify_fs;
    long long classify_x = -1;
    std::string classify_output;
    bool classify_reference = false;
    auto* classify = app.add_subcommand("classify", "exhaustive classification at desk scale");
    classify->set_help_flag("--help", "print help");
    classify->add_option("--p", classify_fs.p, "prime characteristic");
    classify->add_option("--h", classify_fs.h, "extension degree");
    classify->add_option("--q", classify_fs.q, "field order (prime power)");
    classify->add_option("--x", classify_x, "class parameter")->required();
    classify->add_option("--output", classify_output, "JSON-lines output path")->required();
    classify->add_flag("--reference", classify_reference,
                       "also run the no-pruning reference enumeration and compare");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (info->parsed()) return run_info(info_fs);
        if (spread->parsed())
            return run_spread(spread_fs, spread_family, spread_point,
                              spread_seed_opt->count() ? std::optional(spread_seed) : std::nullopt,
                              spread_output);
        if (verify_cmd->parsed())
            return run_verify(verify_input, verify_ambient, verify_methods,
                              verify_seed_opt->count() ? std::optional(verify_seed) : std::nullopt,
                              verify_output);
        if (params->parsed()) return run_params(params_fs, params_output);
        if (classify->parsed())
            return run_classify(classify_fs, classify_x, classify_output, classify_reference);
    } catch (const internal_error& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 3;
    } catch (const input_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}

}  // namespace clgeo::cli
