#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>

#include "clgeo/cli.hpp"

using namespace clgeo;
namespace fs = std::filesystem;

namespace {

struct CliFixture {
    fs::path dir;
    CliFixture() {
        dir = fs::temp_directory_path() / ("clgeo_cli_test_" + std::to_string(::getpid()));
        fs::create_directories(dir);
    }
    ~CliFixture() { fs::remove_all(dir); }
    std::string file(const std::string& name) const { return (dir / name).string(); }
};

// in-process invocation with captured stdout
int run(const std::vector<std::string>& args, std::string* out = nullptr) {
    std::vector<const char*> argv{"clgeo"};
    for (const auto& a : args) argv.push_back(a.c_str());
    std::stringstream captured;
    std::streambuf* old = std::cout.rdbuf(captured.rdbuf());
    int code = cli::cli_main(static_cast<int>(argv.size()), argv.data());
    std::cout.rdbuf(old);
    if (out) *out = captured.str();
    return code;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("info") {
    std::string out;
    CHECK(run({"info", "--p", "2", "--h", "1"}, &out) == 0);
    CHECK(out.find("lines: 35 (affine 28, infinity 7)") != std::string::npos);

    CHECK(run({"info", "--p", "3"}, &out) == 0);
    CHECK(out.find("points: 40") != std::string::npos);

    CHECK(run({"info", "--p", "4", "--h", "1"}) == 2);   // 4 is not prime
    CHECK(run({"info", "--q", "6"}) == 2);               // not a prime power
    CHECK(run({"info", "--q", "11"}) == 2);              // beyond enumeration scope
    CHECK(run({"info"}) == 2);                           // no field given
    CHECK(run({"nonsense"}) == 2);
}

TEST_CASE("spread command") {
    CliFixture t;

    SECTION("type2 by point flag") {
        auto path = t.file("type2.json");
        CHECK(run({"spread", "--q", "2", "--family", "type2", "--point", "0,1,0,0", "--output", path}) == 0);
        Json j = read_json_file(path);
        CHECK(j.at("format") == "clgeo-lineset-v1");
        CHECK(j.at("ambient") == "affine");
        CHECK(j.at("lines").size() == 4);
        CHECK(j.at("meta").at("role") == "spread");

        // loads back as a valid spread
        Space s(Gf(2, 1));
        auto loaded = line_set_from_json(s, j);
        CHECK(validate_spread(s, loaded.set.members, Ambient::affine));

        // byte-identical on re-run
        std::string first = slurp(path);
        CHECK(run({"spread", "--q", "2", "--family", "type2", "--point", "0,1,0,0", "--output", path}) == 0);
        CHECK(slurp(path) == first);
    }

    SECTION("type2 by colon syntax") {
        auto path = t.file("type2c.json");
        CHECK(run({"spread", "--q", "2", "--family", "type2:0,1,0,0", "--output", path}) == 0);
        CHECK(read_json_file(path).at("lines").size() == 4);
    }

    SECTION("regular and type1") {
        auto path = t.file("reg.json");
        CHECK(run({"spread", "--q", "3", "--family", "regular", "--output", path}) == 0);
        Json j = read_json_file(path);
        CHECK(j.at("ambient") == "projective");
        CHECK(j.at("lines").size() == 10);

        auto path2 = t.file("type1.json");
        CHECK(run({"spread", "--q", "3", "--family", "type1", "--seed", "5", "--output", path2}) == 0);
        Space s(Gf(3, 1));
        auto loaded = line_set_from_json(s, read_json_file(path2));
        CHECK(loaded.set.members.size() == 9);
        CHECK(validate_spread(s, loaded.set.members, Ambient::affine));
    }

    SECTION("gen2 random is reproducible") {
        auto p1 = t.file("g1.json"), p2 = t.file("g2.json");
        CHECK(run({"spread", "--q", "3", "--family", "gen2", "--seed", "7", "--output", p1}) == 0);
        CHECK(run({"spread", "--q", "3", "--family", "gen2", "--seed", "7", "--output", p2}) == 0);
        CHECK(slurp(p1) == slurp(p2));
        Space s(Gf(3, 1));
        CHECK(validate_spread(s, line_set_from_json(s, read_json_file(p1)).set.members, Ambient::affine));
    }

    SECTION("gen2 with explicit assignment") {
        Space s(Gf(2, 1));
        LineId ell = s.n_affine_lines();
        auto path = t.file("g3.json");
        std::string family = "gen2:" + std::to_string(ell) + ":0,0";
        CHECK(run({"spread", "--q", "2", "--family", family, "--output", path}) == 0);
        // constant assignment: equals the type II spread at the first point of ell
        auto loaded = line_set_from_json(s, read_json_file(path));
        CHECK(loaded.set.members == type2_affine_spread(s, s.points_on_line(ell)[0]).lines);
    }

    SECTION("errors") {
        CHECK(run({"spread", "--q", "2", "--family", "hexagonal", "--output", t.file("x.json")}) == 2);
        CHECK(run({"spread", "--q", "2", "--family", "type2", "--output", t.file("x.json")}) == 2);
        // affine anchor for type2
        CHECK(run({"spread", "--q", "2", "--family", "type2", "--point", "1,0,0,0", "--output",
                   t.file("x.json")}) == 2);
        // gen2 with an affine line id
        CHECK(run({"spread", "--q", "2", "--family", "gen2:0:random", "--seed", "1", "--output",
                   t.file("x.json")}) == 2);
    }
}

TEST_CASE("verify command") {
    CliFixture t;
    Space s(Gf(3, 1));

    auto pencil_path = t.file("pencil.json");
    write_json_atomic(pencil_path, line_set_to_json(s, trivial_example(s, TrivialKind::pencil, 0)));

    SECTION("verified class") {
        std::string out;
        auto report_path = t.file("report.json");
        CHECK(run({"verify", "--input", pencil_path, "--ambient", "affine", "--output", report_path},
                  &out) == 0);
        CHECK(out.find("x = 1") != std::string::npos);
        Json r = read_json_file(report_path);
        CHECK(r.at("is_cl") == true);
        CHECK(r.at("x") == 1);
        CHECK(r.at("methods").size() == 4);

        // reports are deterministic apart from the timing field
        auto report2 = t.file("report2.json");
        CHECK(run({"verify", "--input", pencil_path, "--ambient", "affine", "--output", report2}) == 0);
        Json a = read_json_file(report_path), b = read_json_file(report2);
        a.erase("timing");
        b.erase("timing");
        b["input"] = a["input"];
        CHECK(a == b);
    }

    SECTION("method subset") {
        auto report_path = t.file("rk.json");
        CHECK(run({"verify", "--input", pencil_path, "--ambient", "affine", "--methods",
                   "kernel,counts", "--output", report_path}) == 0);
        CHECK(read_json_file(report_path).at("methods").size() == 2);
        CHECK(run({"verify", "--input", pencil_path, "--ambient", "affine", "--methods", "bogus",
                   "--output", report_path}) == 2);
    }

    SECTION("non-class input exits 1") {
        auto neg_path = t.file("neg.json");
        // 13 arbitrary affine lines: right size for x=1, almost surely no class
        std::vector<LineId> arbitrary;
        for (LineId l = 0; l < 13; ++l) arbitrary.push_back(l * 3);
        write_json_atomic(neg_path, line_set_to_json(s, make_line_set(s, Ambient::affine, arbitrary)));
        auto report_path = t.file("neg.report.json");
        CHECK(run({"verify", "--input", neg_path, "--ambient", "affine", "--output", report_path}) == 1);
        CHECK(read_json_file(report_path).at("is_cl") == false);
    }

    SECTION("input errors exit 2") {
        // affine-tagged file holding an infinity line
        Json j = line_set_to_json(s, trivial_example(s, TrivialKind::empty));
        j["lines"] = Json::array({Json::array({Json::array({0, 1, 0, 0}), Json::array({0, 0, 1, 0})})});
        auto bad_path = t.file("bad.json");
        write_json_atomic(bad_path, j);
        CHECK(run({"verify", "--input", bad_path, "--ambient", "affine"}) == 2);

        // ambient mismatch between file and flag
        CHECK(run({"verify", "--input", pencil_path, "--ambient", "projective"}) == 2);

        // unknown modulus
        Json wrong = line_set_to_json(s, trivial_example(s, TrivialKind::empty));
        wrong["field"]["modulus"] = std::vector<int>{2, 1};
        auto wrong_path = t.file("wrong.json");
        write_json_atomic(wrong_path, wrong);
        CHECK(run({"verify", "--input", wrong_path, "--ambient", "affine"}) == 2);

        CHECK(run({"verify", "--input", t.file("missing.json"), "--ambient", "affine"}) == 2);
        CHECK(run({"verify", "--input", pencil_path, "--ambient", "diagonal"}) == 2);
    }

    SECTION("unknown meta fields survive the load") {
        Json j = line_set_to_json(s, trivial_example(s, TrivialKind::pencil, 0),
                                  Json{{"custom", 17}, {"note", "keep me"}});
        auto path = t.file("meta.json");
        write_json_atomic(path, j);
        auto loaded = line_set_from_json(s, read_json_file(path));
        CHECK(loaded.meta.at("custom") == 17);
        CHECK(loaded.meta.at("note") == "keep me");
        // re-serializing with the loaded meta reproduces the file
        CHECK(line_set_to_json(s, loaded.set, loaded.meta) == j);
    }

    SECTION("projective input") {
        auto proj_path = t.file("star.json");
        write_json_atomic(proj_path,
                          line_set_to_json(s, make_line_set(s, Ambient::projective, s.star(0))));
        auto report_path = t.file("star.report.json");
        CHECK(run({"verify", "--input", proj_path, "--ambient", "projective", "--output",
                   report_path}) == 0);
        Json r = read_json_file(report_path);
        CHECK(r.at("x") == 1);
        CHECK(r.at("methods").size() == 5);  // kernel, counts, point-plane, spreads, switching
    }
}

TEST_CASE("params command") {
    CliFixture t;
    auto path = t.file("params5.json");
    CHECK(run({"params", "--q", "5", "--output", path}) == 0);
    Json j = read_json_file(path);
    CHECK(j.at("admissible") == std::vector<long long>{0, 1, 4, 9, 12, 13, 16, 21, 24, 25});
    CHECK(j.at("bound") == 10);
    CHECK(j.at("classification").at("final_parameters") == std::vector<long long>{0, 1, 12, 13, 24, 25});

    std::string out;
    CHECK(run({"params", "--q", "4"}, &out) == 0);
    CHECK(out.find("0 1 5 6 10 11 15 16") != std::string::npos);
    CHECK(out.find("settled parameters: 0 1 15 16") != std::string::npos);

    CHECK(run({"params", "--q", "7"}, &out) == 0);
    CHECK(out.find("no settled classification") != std::string::npos);

    CHECK(run({"params", "--q", "6"}) == 2);
    CHECK(run({"params", "--q", "2048"}) == 2);
}

TEST_CASE("classify command") {
    CliFixture t;
    auto path = t.file("q2x1.jsonl");
    std::string out;
    CHECK(run({"classify", "--q", "2", "--x", "1", "--output", path}, &out) == 0);
    CHECK(out.find("found 8 classes") != std::string::npos);

    std::ifstream in(path);
    std::string line;
    int classes = 0;
    Json summary;
    while (std::getline(in, line)) {
        Json record = Json::parse(line);
        if (record.at("type") == "class") {
            ++classes;
            CHECK(record.at("lines").size() == 7);
        } else {
            summary = record;
        }
    }
    CHECK(classes == 8);
    CHECK(summary.at("count") == 8);
    CHECK(summary.at("nodes").get<long long>() > 0);

    auto path2 = t.file("q2x2.jsonl");
    CHECK(run({"classify", "--q", "2", "--x", "2", "--output", path2}, &out) == 0);
    CHECK(out.find("found 0 classes") != std::string::npos);

    CHECK(run({"classify", "--q", "3", "--x", "5", "--output", t.file("no.jsonl")}) == 2);
    CHECK(run({"classify", "--q", "2", "--output", t.file("no.jsonl")}) == 2);  // missing --x
}
