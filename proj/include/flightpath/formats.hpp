#pragma once

// Emitters (and re-parsers, used by tests and tooling) for the two on-disk
// artifact formats: the OSSIM-style geometry sidecar that places a
// photograph on the globe, and the KML document that marks the trajectory.

#include <array>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "flightpath/errors.hpp"
#include "flightpath/geodesy.hpp"
#include "flightpath/text_util.hpp"
#include "flightpath/trajectory.hpp"

namespace flightpath {

struct GeometryHeader {
    std::string type = "ossimEquDistCylProjection";
    double origin_latitude = 0.0;
    double central_meridian = 0.0;
    std::string pixel_scale_units = "degrees";
    double pixel_scale_x = 0.0;
    double pixel_scale_y = 0.0;
    std::string datum = "WGE";
    std::string tie_point_units = "degrees";
    double tie_point_lon = 0.0;
    double tie_point_lat = 0.0;
    std::string pixel_type = "area";

    bool operator==(const GeometryHeader&) const = default;
};

inline void validate(const GeometryHeader& g) {
    if (!(g.pixel_scale_x > 0.0) || !(g.pixel_scale_y > 0.0))
        throw ValidationError("pixel scales must be positive");
    if (g.tie_point_lon < -180.0 || g.tie_point_lon > 180.0)
        throw ValidationError("tie point longitude outside [-180, 180]");
    if (g.tie_point_lat < -90.0 || g.tie_point_lat > 90.0)
        throw ValidationError("tie point latitude outside [-90, 90]");
}

// Tie point is the photo's upper-left corner, deduced from its center and
// pixel footprint.
inline GeometryHeader make_geometry_header(const PhotoMeta& meta,
                                           const GeodeticPoint& center) {
    GeometryHeader g;
    g.pixel_scale_x = meta.pixel_scale_deg_x;
    g.pixel_scale_y = meta.pixel_scale_deg_y;
    g.tie_point_lon = center.lon - meta.width_px * meta.pixel_scale_deg_x / 2.0;
    g.tie_point_lat = center.lat + meta.height_px * meta.pixel_scale_deg_y / 2.0;
    validate(g);
    return g;
}

inline std::string emit_geometry_file(const GeometryHeader& g) {
    validate(g);
    std::string out;
    out += "type: " + g.type + "\n";
    out += "origin_latitude: " + format_decimal_value(g.origin_latitude) + "\n";
    out += "central_meridian: " + format_decimal_value(g.central_meridian) + "\n";
    out += "pixel_scale_units: " + g.pixel_scale_units + "\n";
    out += "pixel_scale_xy: (" + format_decimal_value(g.pixel_scale_x) + ", " +
           format_decimal_value(g.pixel_scale_y) + ")\n";
    out += "datum: " + g.datum + "\n";
    out += "tie_point_units: " + g.tie_point_units + "\n";
    out += "tie_point_xy: (" + format_decimal_value(g.tie_point_lon) + ", " +
           format_decimal_value(g.tie_point_lat) + ")\n";
    out += "pixel_type: " + g.pixel_type + "\n";
    return out;
}

inline std::string emit_geometry_file(const PhotoMeta& meta, const GeodeticPoint& center) {
    return emit_geometry_file(make_geometry_header(meta, center));
}

namespace detail {

// "(a, b)" with optional inner spacing; values may omit a leading zero.
inline std::pair<double, double> parse_pair_value(std::string_view value, int line_no) {
    std::string_view v = trim(value);
    if (v.size() < 2 || v.front() != '(' || v.back() != ')')
        throw ParseError("line " + std::to_string(line_no) +
                         ": expected \"(x, y)\" pair");
    v = v.substr(1, v.size() - 2);
    const auto comma = v.find(',');
    if (comma == std::string_view::npos)
        throw ParseError("line " + std::to_string(line_no) +
                         ": expected \"(x, y)\" pair");
    const auto x = parse_double(v.substr(0, comma));
    const auto y = parse_double(v.substr(comma + 1));
    if (!x || !y)
        throw ParseError("line " + std::to_string(line_no) + ": malformed pair number");
    return {*x, *y};
}

} // namespace detail

// Strict parser for the nine known keys; anything else is rejected.
inline GeometryHeader parse_geometry_file(std::string_view text) {
    std::map<std::string, std::pair<std::string, int>> kv;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto eol = text.find('\n', pos);
        std::string_view line = text.substr(pos, eol == std::string_view::npos
                                                     ? std::string_view::npos
                                                     : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_no;
        const std::string_view stripped = trim(line);
        if (stripped.empty())
            continue;
        const auto pair = split_key_value(stripped);
        if (!pair)
            throw ParseError("line " + std::to_string(line_no) + ": expected \"key: value\"");
        static const char* known[] = {"type",           "origin_latitude", "central_meridian",
                                      "pixel_scale_units", "pixel_scale_xy", "datum",
                                      "tie_point_units", "tie_point_xy",    "pixel_type"};
        const std::string key(pair->first);
        bool ok = false;
        for (const char* k : known)
            ok = ok || key == k;
        if (!ok)
            throw ParseError("line " + std::to_string(line_no) + ": unknown key \"" + key +
                             "\"");
        if (kv.count(key))
            throw ParseError("line " + std::to_string(line_no) + ": duplicate key \"" + key +
                             "\"");
        kv[key] = {std::string(pair->second), line_no};
    }

    auto require = [&](const char* key) -> const std::pair<std::string, int>& {
        const auto it = kv.find(key);
        if (it == kv.end())
            throw ParseError(std::string("missing required key \"") + key + "\"");
        return it->second;
    };
    auto number = [&](const char* key) {
        const auto& [value, line] = require(key);
        const auto v = parse_double(value);
        if (!v)
            throw ParseError("line " + std::to_string(line) + ": malformed number for \"" +
                             std::string(key) + "\"");
        return *v;
    };

    GeometryHeader g;
    g.type = require("type").first;
    g.origin_latitude = number("origin_latitude");
    g.central_meridian = number("central_meridian");
    g.pixel_scale_units = require("pixel_scale_units").first;
    {
        const auto& [value, line] = require("pixel_scale_xy");
        std::tie(g.pixel_scale_x, g.pixel_scale_y) = detail::parse_pair_value(value, line);
    }
    g.datum = require("datum").first;
    g.tie_point_units = require("tie_point_units").first;
    {
        const auto& [value, line] = require("tie_point_xy");
        std::tie(g.tie_point_lon, g.tie_point_lat) = detail::parse_pair_value(value, line);
    }
    g.pixel_type = require("pixel_type").first;
    validate(g);
    return g;
}

// ---------------------------------------------------------------------------
// KML trajectory document

struct KmlStyle {
    std::string id;
    std::string icon_href;
};

struct KmlPlacemark {
    std::string style_ref; // must name one of the document styles
    double lon = 0.0;
    double lat = 0.0;
    double alt = 0.0;
};

struct KmlTrajectoryDoc {
    std::array<KmlStyle, 2> styles;
    std::vector<KmlPlacemark> placemarks;
};

inline constexpr const char* kInputMarkStyleId = "inputMark";
inline constexpr const char* kInterpMarkStyleId = "interpMark";

// Input marks first (the red dots), interpolated marks after (the green
// ones), each group in the order given.
inline KmlTrajectoryDoc build_trajectory_kml(std::span<const PathPoint> inputs,
                                             std::span<const SampledPose> interpolated) {
    KmlTrajectoryDoc doc;
    doc.styles[0] = {kInputMarkStyleId, "icons/mark-red.png"};
    doc.styles[1] = {kInterpMarkStyleId, "icons/mark-green.png"};
    for (const auto& p : inputs)
        doc.placemarks.push_back({kInputMarkStyleId, p.lon, p.lat, p.height});
    for (const auto& s : interpolated)
        doc.placemarks.push_back(
            {kInterpMarkStyleId, s.geodetic.lon, s.geodetic.lat, s.geodetic.h});
    return doc;
}

namespace detail {

inline std::string xml_escape(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

} // namespace detail

// Serializes with the namespace declarations of the reference template.
// Coordinates print lon,lat,alt with up to six decimals, trailing zeros
// trimmed.
inline std::string emit_kml(const KmlTrajectoryDoc& doc) {
    for (const auto& p : doc.placemarks) {
        if (p.style_ref != doc.styles[0].id && p.style_ref != doc.styles[1].id)
            throw DomainError("placemark references undefined style \"" + p.style_ref +
                              "\"");
    }
    std::string out;
    out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<kml xmlns=\"http://www.opengis.net/kml/2.2\"\n";
    out += "  xmlns:gx=\"http://www.google.com/kml/ext/2.2\">\n";
    out += "  <Document>\n";
    for (const auto& style : doc.styles) {
        out += "    <Style id=\"" + detail::xml_escape(style.id) + "\">\n";
        out += "      <IconStyle>\n";
        out += "        <Icon><href>" + detail::xml_escape(style.icon_href) +
               "</href></Icon>\n";
        out += "      </IconStyle>\n";
        out += "    </Style>\n";
    }
    for (const auto& p : doc.placemarks) {
        out += "    <Placemark>\n";
        out += "      <styleUrl>#" + detail::xml_escape(p.style_ref) + "</styleUrl>\n";
        out += "      <Point>\n";
        out += "        <coordinates>" + format_double_fixed_trim(p.lon, 6) + "," +
               format_double_fixed_trim(p.lat, 6) + "," + format_double_fixed_trim(p.alt, 6) +
               "</coordinates>\n";
        out += "      </Point>\n";
        out += "    </Placemark>\n";
    }
    out += "  </Document>\n";
    out += "</kml>\n";
    return out;
}

inline std::string emit_trajectory_kml(std::span<const PathPoint> inputs,
                                       std::span<const SampledPose> interpolated) {
    return emit_kml(build_trajectory_kml(inputs, interpolated));
}

} // namespace flightpath
