#pragma once

// Flight ingestion and the interpolation pipeline: spline-smoothed
// longitude/latitude, linear posture angles along the shortest arc, and
// step-hold heights, feeding a time-keyed animation path of camera
// control points.

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "flightpath/camera.hpp"
#include "flightpath/errors.hpp"
#include "flightpath/geodesy.hpp"
#include "flightpath/spline.hpp"
#include "flightpath/text_util.hpp"

namespace flightpath {

// One input flight sample as read from a configuration file.
struct PathPoint {
    double time = 0.0;    // seconds, nonnegative
    double lon = 0.0;     // degrees
    double lat = 0.0;     // degrees
    double height = 0.0;  // meters
    double heading = 0.0; // degrees, [0, 360)
    double pitch = 0.0;   // degrees, [-90, 90]
    double roll = 0.0;    // degrees, [-180, 180]
    std::string photo_ref;
};

// Raster placement inputs for the photograph attached to a sample.
struct PhotoMeta {
    std::string image_file;
    int width_px = 0;
    int height_px = 0;
    double pixel_scale_deg_x = 0.0;
    double pixel_scale_deg_y = 0.0;
};

// Pose produced by the interpolation pipeline; is_input marks the original
// samples among the interpolated ones.
struct SampledPose {
    double time = 0.0;
    GeodeticPoint geodetic;
    Posture posture;
    bool is_input = false;
};

// Playback keyframe (ECEF position, unit rotation, scale).
struct ControlPoint {
    EcefPoint position;
    Quat rotation;
    Vec3 scale{1.0, 1.0, 1.0};
};

inline double wrap_deg_signed(double d) { // to (-180, 180]
    double x = std::fmod(d, 360.0);
    if (x <= -180.0)
        x += 360.0;
    else if (x > 180.0)
        x -= 360.0;
    return x;
}

inline double wrap_deg_360(double d) { // to [0, 360)
    double x = std::fmod(d, 360.0);
    if (x < 0.0)
        x += 360.0;
    if (x >= 360.0)
        x = 0.0;
    return x;
}

// Linear blend along the shortest arc, result in (-180, 180].
inline double interpolate_angle(double a0, double a1, double u) {
    if (!(u >= 0.0 && u <= 1.0))
        throw DomainError("blend fraction outside [0, 1]");
    return wrap_deg_signed(a0 + wrap_deg_signed(a1 - a0) * u);
}

struct FlightConfig {
    PathPoint point; // time filled only when the file carried one
    PhotoMeta photo;
    std::optional<double> time;
    std::vector<std::string> warnings; // unknown keys, one note per line
};

namespace detail {

inline double require_number(const std::map<std::string, std::pair<std::string, int>>& kv,
                             const std::string& key) {
    const auto it = kv.find(key);
    if (it == kv.end())
        throw ParseError("missing required key \"" + key + "\"");
    const auto v = parse_double(it->second.first);
    if (!v)
        throw ParseError("line " + std::to_string(it->second.second) +
                         ": malformed number for \"" + key + "\"");
    return *v;
}

inline int require_positive_int(const std::map<std::string, std::pair<std::string, int>>& kv,
                                const std::string& key) {
    const auto it = kv.find(key);
    if (it == kv.end())
        throw ParseError("missing required key \"" + key + "\"");
    const auto v = parse_int(it->second.first);
    if (!v)
        throw ParseError("line " + std::to_string(it->second.second) +
                         ": malformed integer for \"" + key + "\"");
    if (*v < 1)
        throw ValidationError(key + " must be at least 1");
    return static_cast<int>(*v);
}

} // namespace detail

// Parses one `key: value` configuration file. Unknown keys are collected as
// warnings; missing required keys, malformed numbers and out-of-range values
// throw. The heading is normalized into [0, 360).
inline FlightConfig parse_flight_config(std::string_view text) {
    static const char* known_keys[] = {
        "image_file",     "time",           "longitude",         "latitude",
        "height",         "heading",        "pitch",             "roll",
        "image_width_px", "image_height_px", "pixel_scale_deg_x", "pixel_scale_deg_y"};

    std::map<std::string, std::pair<std::string, int>> kv; // key -> (value, line)
    FlightConfig out;

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
        if (stripped.empty() || stripped.front() == '#')
            continue;
        const auto pair = split_key_value(stripped);
        if (!pair)
            throw ParseError("line " + std::to_string(line_no) + ": expected \"key: value\"");
        const std::string key(pair->first);
        if (std::find_if(std::begin(known_keys), std::end(known_keys),
                         [&](const char* k) { return key == k; }) == std::end(known_keys)) {
            out.warnings.push_back("line " + std::to_string(line_no) +
                                   ": unknown key \"" + key + "\" ignored");
            continue;
        }
        if (kv.count(key))
            throw ParseError("line " + std::to_string(line_no) + ": duplicate key \"" +
                             key + "\"");
        kv[key] = {std::string(pair->second), line_no};
    }

    const auto file_it = kv.find("image_file");
    if (file_it == kv.end())
        throw ParseError("missing required key \"image_file\"");
    out.photo.image_file = file_it->second.first;
    if (out.photo.image_file.empty())
        throw ParseError("line " + std::to_string(file_it->second.second) +
                         ": image_file must not be empty");
    out.point.photo_ref = out.photo.image_file;

    out.point.lon = detail::require_number(kv, "longitude");
    out.point.lat = detail::require_number(kv, "latitude");
    out.point.height = detail::require_number(kv, "height");
    out.point.heading = detail::require_number(kv, "heading");
    out.point.pitch = detail::require_number(kv, "pitch");
    out.point.roll = detail::require_number(kv, "roll");
    out.photo.width_px = detail::require_positive_int(kv, "image_width_px");
    out.photo.height_px = detail::require_positive_int(kv, "image_height_px");
    out.photo.pixel_scale_deg_x = detail::require_number(kv, "pixel_scale_deg_x");
    out.photo.pixel_scale_deg_y = detail::require_number(kv, "pixel_scale_deg_y");

    if (kv.count("time")) {
        const double t = detail::require_number(kv, "time");
        if (t < 0.0)
            throw ValidationError("time must be nonnegative");
        out.time = t;
        out.point.time = t;
    }

    if (out.point.lon < -180.0 || out.point.lon > 180.0)
        throw ValidationError("longitude outside [-180, 180]");
    if (out.point.lat < -90.0 || out.point.lat > 90.0)
        throw ValidationError("latitude outside [-90, 90]");
    if (out.point.pitch < -90.0 || out.point.pitch > 90.0)
        throw ValidationError("pitch outside [-90, 90]");
    if (out.point.roll < -180.0 || out.point.roll > 180.0)
        throw ValidationError("roll outside [-180, 180]");
    if (!std::isfinite(out.point.heading))
        throw ValidationError("heading must be finite");
    if (!(out.photo.pixel_scale_deg_x > 0.0) || !(out.photo.pixel_scale_deg_y > 0.0))
        throw ValidationError("pixel scales must be positive");
    out.point.heading = wrap_deg_360(out.point.heading);
    return out;
}

struct FlightRecord {
    PathPoint point;
    PhotoMeta photo;
};

struct SourceText {
    std::string name; // diagnostic label, usually the file name
    std::string text;
};

struct Flight {
    std::vector<FlightRecord> records; // sorted by time ascending
    std::vector<std::string> warnings;
};

// Parses and validates a whole flight. Configs lacking a time key are
// assigned 0, 1, 2, ... seconds in listing order (all files must agree on
// carrying or omitting the key). Antimeridian-spanning flights are refused:
// the spline treats lon/lat as plain planar numbers.
inline Flight ingest_flight(std::span<const SourceText> sources) {
    Flight flight;
    std::vector<FlightConfig> configs;
    configs.reserve(sources.size());
    for (const auto& src : sources) {
        try {
            configs.push_back(parse_flight_config(src.text));
        } catch (const ParseError& e) {
            throw ParseError(src.name + ": " + e.what());
        } catch (const ValidationError& e) {
            throw ValidationError(src.name + ": " + e.what());
        }
        for (const auto& w : configs.back().warnings)
            flight.warnings.push_back(src.name + ": " + w);
    }

    if (configs.size() < 2)
        throw DomainError("need at least 2 valid configuration files");

    const std::size_t with_time =
        std::count_if(configs.begin(), configs.end(),
                      [](const FlightConfig& c) { return c.time.has_value(); });
    if (with_time != 0 && with_time != configs.size())
        throw ValidationError("some configuration files carry a time key and some do not");
    for (std::size_t i = 0; i < configs.size(); ++i) {
        auto& c = configs[i];
        if (!c.time)
            c.point.time = static_cast<double>(i);
        flight.records.push_back({c.point, c.photo});
    }

    std::stable_sort(flight.records.begin(), flight.records.end(),
                     [](const FlightRecord& a, const FlightRecord& b) {
                         return a.point.time < b.point.time;
                     });
    for (std::size_t i = 1; i < flight.records.size(); ++i) {
        if (flight.records[i].point.time == flight.records[i - 1].point.time)
            throw ValidationError("duplicate timestamp " +
                                  format_double_shortest(flight.records[i].point.time));
        if (std::fabs(flight.records[i].point.lon - flight.records[i - 1].point.lon) > 180.0)
            throw UnsupportedInputError(
                "flight crosses the antimeridian; planar lon/lat interpolation "
                "does not apply");
    }
    return flight;
}

// The smoothing pipeline: the spline interpolates lon/lat, posture angles
// blend linearly along the shortest arc, heights step-hold at the preceding
// input point, and times blend linearly between the bracketing inputs. Each
// segment receives k interior samples at even parameter fractions.
inline std::vector<SampledPose> interpolate_trajectory(std::span<const PathPoint> points,
                                                       int samples_per_segment) {
    if (points.size() < 2)
        throw DomainError("need at least 2 path points");
    if (samples_per_segment < 0)
        throw DomainError("samples per segment must be nonnegative");
    for (std::size_t i = 1; i < points.size(); ++i)
        if (points[i].time <= points[i - 1].time)
            throw DomainError("path points must be sorted by strictly increasing time");

    auto as_pose = [](const PathPoint& p) {
        SampledPose s;
        s.time = p.time;
        s.geodetic = {p.lon, p.lat, p.height};
        s.posture = {p.heading, p.pitch, p.roll};
        s.is_input = true;
        return s;
    };

    std::vector<SampledPose> out;
    const int k = samples_per_segment;
    out.reserve(points.size() + (points.size() - 1) * k);
    if (k == 0) {
        for (const auto& p : points)
            out.push_back(as_pose(p));
        return out;
    }

    std::vector<Vec2> data;
    data.reserve(points.size());
    for (const auto& p : points)
        data.push_back({p.lon, p.lat});
    const CurveInterpolation ci = interpolate_points(data, 3);

    for (std::size_t i = 0; i + 1 < points.size(); ++i) {
        const PathPoint& a = points[i];
        const PathPoint& b = points[i + 1];
        out.push_back(as_pose(a));
        for (int j = 1; j <= k; ++j) {
            const double u = static_cast<double>(j) / (k + 1);
            const double t = ci.params[i] + (ci.params[i + 1] - ci.params[i]) * u;
            const Vec2 pos = de_boor(ci.curve, t);
            SampledPose s;
            s.time = a.time + (b.time - a.time) * u;
            s.geodetic = {pos.x, pos.y, a.height}; // height step-holds
            s.posture.heading = wrap_deg_360(interpolate_angle(a.heading, b.heading, u));
            s.posture.pitch = interpolate_angle(a.pitch, b.pitch, u);
            s.posture.roll = interpolate_angle(a.roll, b.roll, u);
            s.is_input = false;
            out.push_back(s);
        }
    }
    out.push_back(as_pose(points.back()));
    return out;
}

// ECEF position plus the world rotation of the eye, packed as a keyframe.
inline ControlPoint pose_to_control_point(const SampledPose& pose) {
    ControlPoint cp;
    cp.position = geodetic_to_ecef(wgs84(), pose.geodetic);
    const Mat3 rotation = rotation_in_lsr(rotation_from_posture(pose.posture),
                                          lsr_basis_at(pose.geodetic.lon, pose.geodetic.lat));
    cp.rotation = quat_from_matrix(rotation);
    cp.scale = {1.0, 1.0, 1.0};
    return cp;
}

// Time-keyed keyframe store with interpolated lookup between keys.
class AnimationPath {
public:
    void insert(double time, const ControlPoint& cp) {
        if (!keys_.emplace(time, cp).second)
            throw DomainError("duplicate animation key time " + format_double_shortest(time));
    }

    std::size_t size() const { return keys_.size(); }
    bool empty() const { return keys_.empty(); }

    double first_time() const {
        require_nonempty();
        return keys_.begin()->first;
    }
    double last_time() const {
        require_nonempty();
        return keys_.rbegin()->first;
    }
    double period() const { return last_time() - first_time(); }

    // Stored key at an exact key time; between keys, position and scale
    // blend linearly and the rotation takes the shortest spherical arc.
    ControlPoint sample(double t) const {
        require_nonempty();
        if (t < first_time() || t > last_time())
            throw RangeError("time outside the animation path range");
        const auto exact = keys_.find(t);
        if (exact != keys_.end())
            return exact->second;

        const auto upper = keys_.upper_bound(t);
        const auto lower = std::prev(upper);
        const double u = (t - lower->first) / (upper->first - lower->first);
        const ControlPoint& a = lower->second;
        const ControlPoint& b = upper->second;
        ControlPoint cp;
        cp.position = {a.position.x + (b.position.x - a.position.x) * u,
                       a.position.y + (b.position.y - a.position.y) * u,
                       a.position.z + (b.position.z - a.position.z) * u};
        cp.scale = a.scale + (b.scale - a.scale) * u;
        cp.rotation = slerp(a.rotation, b.rotation, u);
        return cp;
    }

    const std::map<double, ControlPoint>& keys() const { return keys_; }

private:
    void require_nonempty() const {
        if (keys_.empty())
            throw StateError("animation path has no keys");
    }

    std::map<double, ControlPoint> keys_;
};

inline AnimationPath build_animation_path(std::span<const SampledPose> samples) {
    if (samples.empty())
        throw DomainError("cannot build an animation path from zero samples");
    for (std::size_t i = 1; i < samples.size(); ++i)
        if (samples[i].time <= samples[i - 1].time)
            throw DomainError("samples must be time-sorted with unique times");
    AnimationPath path;
    for (const auto& s : samples)
        path.insert(s.time, pose_to_control_point(s));
    return path;
}

} // namespace flightpath
