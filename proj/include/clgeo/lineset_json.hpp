#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <string>

#include <json.hpp>

#include "clgeo/clclass.hpp"
#include "clgeo/spreads.hpp"

namespace clgeo {

using Json = nlohmann::json;

/// Malformed or unsupported interchange data; maps to CLI exit code 2.
class input_error : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr const char* kLineSetFormat = "clgeo-lineset-v1";
inline constexpr const char* kReportFormat = "clgeo-report-v1";

inline Json field_to_json(const Gf& f) {
    return Json{{"p", f.p()}, {"h", f.h()}, {"modulus", f.modulus()}};
}

/// Reconstructs the field and rejects moduli that differ from the
/// built-in table; line ids and canonical forms depend on it.
inline Gf field_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("p") || !j.contains("h"))
        throw input_error("field description must contain p and h");
    Gf f = [&] {
        try {
            return Gf(j.at("p").get<int>(), j.at("h").get<int>());
        } catch (const std::invalid_argument& e) {
            throw input_error(std::string("invalid field: ") + e.what());
        }
    }();
    if (j.contains("modulus") && j.at("modulus").get<std::vector<int>>() != f.modulus())
        throw input_error("field modulus does not match the built-in modulus for this order");
    return f;
}

inline Json line_set_to_json(const Space& s, const LineSet& l, Json meta = Json::object()) {
    Json lines = Json::array();
    for (LineId id : l.members) {
        const auto& basis = s.line(id).basis;
        Json pts = Json::array();
        for (const auto& row : basis) {
            Json coords = Json::array();
            for (Fe c : row) coords.push_back(c.v);
            pts.push_back(coords);
        }
        lines.push_back(pts);
    }
    return Json{{"format", kLineSetFormat},
                {"field", field_to_json(s.field())},
                {"ambient", to_string(l.ambient)},
                {"lines", lines},
                {"meta", meta}};
}

struct LoadedLineSet {
    LineSet set;
    Json meta;
};

/// Parses a line-set file against an existing space. Lines are given as
/// two points and canonicalized; for an affine set any line inside the
/// infinity plane is rejected.
inline LoadedLineSet line_set_from_json(const Space& s, const Json& j) {
    if (!j.is_object() || j.value("format", "") != std::string(kLineSetFormat))
        throw input_error("not a clgeo-lineset-v1 document");
    Gf f = field_from_json(j.at("field"));
    if (!(f == s.field())) throw input_error("file field does not match the requested field");

    std::string amb_str = j.value("ambient", "");
    Ambient amb;
    if (amb_str == "affine")
        amb = Ambient::affine;
    else if (amb_str == "projective")
        amb = Ambient::projective;
    else
        throw input_error("ambient must be \"affine\" or \"projective\"");

    if (!j.contains("lines") || !j.at("lines").is_array()) throw input_error("missing lines array");
    std::vector<LineId> members;
    for (const auto& entry : j.at("lines")) {
        if (!entry.is_array() || entry.size() != 2) throw input_error("each line needs exactly two points");
        std::array<Vec4, 2> pts;
        for (int i = 0; i < 2; ++i) {
            const auto& coords = entry[i];
            if (!coords.is_array() || coords.size() != 4) throw input_error("points need exactly 4 coordinates");
            for (int c = 0; c < 4; ++c) {
                long long v = coords[c].get<long long>();
                if (v < 0 || v >= s.q()) throw input_error("coordinate encoding out of range");
                pts[i][c] = Fe(static_cast<unsigned>(v));
            }
        }
        LineId id = [&] {
            try {
                return s.line_from_span(pts[0], pts[1]);
            } catch (const std::invalid_argument& e) {
                throw input_error(std::string("invalid line: ") + e.what());
            }
        }();
        if (amb == Ambient::affine && s.is_infinity_line(id))
            throw input_error("affine line set contains a line inside the infinity plane");
        members.push_back(id);
    }
    return {make_line_set(s, amb, std::move(members)), j.value("meta", Json::object())};
}

inline Json report_to_json(const Gf& f, const VerificationReport& r) {
    Json methods = Json::array();
    for (const auto& [name, verdict] : r.methods)
        methods.push_back(Json{{"method", name}, {"verdict", verdict}});
    Json j{{"format", kReportFormat},
           {"field", field_to_json(f)},
           {"ambient", to_string(r.ambient)},
           {"size", r.size},
           {"size_valid", r.size_valid},
           {"methods", methods},
           {"is_cl", r.is_cl},
           {"seeds", Json{{"spreads", r.spread_seed}, {"switching", r.switching_seed}}},
           {"timing", Json{{"seconds", r.elapsed_seconds}}}};
    if (r.size_valid)
        j["x"] = r.x;
    else
        j["x"] = nullptr;
    return j;
}

/// Writes via a temp file in the target directory plus rename.
inline void write_json_atomic(const std::filesystem::path& path, const Json& j) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp);
        if (!out) throw input_error("cannot open " + tmp.string() + " for writing");
        out << j.dump(2) << '\n';
    }
    std::filesystem::rename(tmp, path);
}

inline void write_text_atomic(const std::filesystem::path& path, const std::string& text) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp);
        if (!out) throw input_error("cannot open " + tmp.string() + " for writing");
        out << text;
    }
    std::filesystem::rename(tmp, path);
}

inline Json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot read " + path.string());
    Json j;
    try {
        in >> j;
    } catch (const Json::parse_error& e) {
        throw input_error(std::string("invalid JSON: ") + e.what());
    }
    return j;
}

}  // namespace clgeo
