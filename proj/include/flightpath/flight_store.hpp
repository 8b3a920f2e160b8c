#pragma once

// The flight file: a versioned, line-oriented snapshot of one ingested
// flight (inputs, photo metadata, interpolation settings and the produced
// samples). Field order is stable and numbers round-trip exactly, so
// generated files can be diffed byte-for-byte.

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "flightpath/errors.hpp"
#include "flightpath/text_util.hpp"
#include "flightpath/trajectory.hpp"

namespace flightpath {

struct FlightStore {
    int samples_per_segment = 5;
    std::vector<PathPoint> inputs;   // sorted by time
    std::vector<PhotoMeta> photos;   // parallel to inputs
    std::vector<SampledPose> samples;
};

inline void validate(const FlightStore& store) {
    if (store.samples_per_segment < 0)
        throw ValidationError("samples_per_segment must be nonnegative");
    if (store.inputs.size() < 2)
        throw ValidationError("flight must hold at least 2 input points");
    if (store.photos.size() != store.inputs.size())
        throw ValidationError("one photo record per input point required");
    for (std::size_t i = 1; i < store.inputs.size(); ++i)
        if (store.inputs[i].time <= store.inputs[i - 1].time)
            throw ValidationError("input points must be sorted by strictly increasing time");
    for (std::size_t i = 1; i < store.samples.size(); ++i)
        if (store.samples[i].time <= store.samples[i - 1].time)
            throw ValidationError("samples must be sorted by strictly increasing time");
    const std::size_t expected =
        store.inputs.size() +
        (store.inputs.size() - 1) * static_cast<std::size_t>(store.samples_per_segment);
    if (store.samples.size() != expected)
        throw ValidationError("sample count inconsistent with samples_per_segment");
}

inline std::string save_flight_store(const FlightStore& store) {
    validate(store);
    auto num = [](double v) { return format_double_shortest(v); };
    std::string out;
    out += "flight_store_version: 1\n";
    out += "samples_per_segment: " + std::to_string(store.samples_per_segment) + "\n";
    out += "input_count: " + std::to_string(store.inputs.size()) + "\n";
    out += "sample_count: " + std::to_string(store.samples.size()) + "\n";
    for (std::size_t i = 0; i < store.inputs.size(); ++i) {
        const PathPoint& p = store.inputs[i];
        out += "input " + std::to_string(i) + ": " + num(p.time) + " " + num(p.lon) + " " +
               num(p.lat) + " " + num(p.height) + " " + num(p.heading) + " " +
               num(p.pitch) + " " + num(p.roll) + " " + p.photo_ref + "\n";
    }
    for (std::size_t i = 0; i < store.photos.size(); ++i) {
        const PhotoMeta& m = store.photos[i];
        out += "photo " + std::to_string(i) + ": " + std::to_string(m.width_px) + " " +
               std::to_string(m.height_px) + " " + num(m.pixel_scale_deg_x) + " " +
               num(m.pixel_scale_deg_y) + " " + m.image_file + "\n";
    }
    for (std::size_t i = 0; i < store.samples.size(); ++i) {
        const SampledPose& s = store.samples[i];
        out += "sample " + std::to_string(i) + ": " + num(s.time) + " " +
               num(s.geodetic.lon) + " " + num(s.geodetic.lat) + " " + num(s.geodetic.h) +
               " " + num(s.posture.heading) + " " + num(s.posture.pitch) + " " +
               num(s.posture.roll) + " " + (s.is_input ? "input" : "interp") + "\n";
    }
    return out;
}

namespace detail {

// Pulls count space-separated tokens off the front; returns the rest.
inline std::vector<std::string_view> take_tokens(std::string_view& rest, std::size_t count,
                                                 int line_no) {
    std::vector<std::string_view> tokens;
    for (std::size_t i = 0; i < count; ++i) {
        rest = trim(rest);
        const auto space = rest.find_first_of(" \t");
        if (rest.empty())
            throw ParseError("line " + std::to_string(line_no) + ": too few fields");
        if (space == std::string_view::npos) {
            tokens.push_back(rest);
            rest = {};
        } else {
            tokens.push_back(rest.substr(0, space));
            rest = rest.substr(space + 1);
        }
    }
    rest = trim(rest);
    return tokens;
}

inline double token_double(std::string_view tok, int line_no) {
    const auto v = parse_double(tok);
    if (!v)
        throw ParseError("line " + std::to_string(line_no) + ": malformed number \"" +
                         std::string(tok) + "\"");
    return *v;
}

inline long long token_int(std::string_view tok, int line_no) {
    const auto v = parse_int(tok);
    if (!v)
        throw ParseError("line " + std::to_string(line_no) + ": malformed integer \"" +
                         std::string(tok) + "\"");
    return *v;
}

} // namespace detail

inline FlightStore load_flight_store(std::string_view text) {
    FlightStore store;
    store.samples_per_segment = -1;
    long long input_count = -1, sample_count = -1;
    bool seen_version = false;

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
        const std::string_view key = pair->first;
        std::string_view value = pair->second;

        if (key == "flight_store_version") {
            if (detail::token_int(value, line_no) != 1)
                throw ParseError("unsupported flight_store_version (expected 1)");
            seen_version = true;
        } else if (key == "samples_per_segment") {
            store.samples_per_segment = static_cast<int>(detail::token_int(value, line_no));
        } else if (key == "input_count") {
            input_count = detail::token_int(value, line_no);
        } else if (key == "sample_count") {
            sample_count = detail::token_int(value, line_no);
        } else if (key.starts_with("input ")) {
            const auto toks = detail::take_tokens(value, 7, line_no);
            PathPoint p;
            p.time = detail::token_double(toks[0], line_no);
            p.lon = detail::token_double(toks[1], line_no);
            p.lat = detail::token_double(toks[2], line_no);
            p.height = detail::token_double(toks[3], line_no);
            p.heading = detail::token_double(toks[4], line_no);
            p.pitch = detail::token_double(toks[5], line_no);
            p.roll = detail::token_double(toks[6], line_no);
            p.photo_ref = std::string(value); // remainder, may contain spaces
            store.inputs.push_back(std::move(p));
        } else if (key.starts_with("photo ")) {
            const auto toks = detail::take_tokens(value, 4, line_no);
            PhotoMeta m;
            m.width_px = static_cast<int>(detail::token_int(toks[0], line_no));
            m.height_px = static_cast<int>(detail::token_int(toks[1], line_no));
            m.pixel_scale_deg_x = detail::token_double(toks[2], line_no);
            m.pixel_scale_deg_y = detail::token_double(toks[3], line_no);
            m.image_file = std::string(value);
            if (m.image_file.empty())
                throw ParseError("line " + std::to_string(line_no) + ": missing image file");
            store.photos.push_back(std::move(m));
        } else if (key.starts_with("sample ")) {
            const auto toks = detail::take_tokens(value, 8, line_no);
            SampledPose s;
            s.time = detail::token_double(toks[0], line_no);
            s.geodetic.lon = detail::token_double(toks[1], line_no);
            s.geodetic.lat = detail::token_double(toks[2], line_no);
            s.geodetic.h = detail::token_double(toks[3], line_no);
            s.posture.heading = detail::token_double(toks[4], line_no);
            s.posture.pitch = detail::token_double(toks[5], line_no);
            s.posture.roll = detail::token_double(toks[6], line_no);
            if (toks[7] == "input")
                s.is_input = true;
            else if (toks[7] == "interp")
                s.is_input = false;
            else
                throw ParseError("line " + std::to_string(line_no) +
                                 ": origin must be \"input\" or \"interp\"");
            store.samples.push_back(s);
        } else {
            throw ParseError("line " + std::to_string(line_no) + ": unknown record \"" +
                             std::string(key) + "\"");
        }
    }

    if (!seen_version)
        throw ParseError("missing flight_store_version header");
    if (store.samples_per_segment < 0)
        throw ParseError("missing samples_per_segment header");
    if (input_count != static_cast<long long>(store.inputs.size()))
        throw ValidationError("input_count does not match the number of input records");
    if (sample_count != static_cast<long long>(store.samples.size()))
        throw ValidationError("sample_count does not match the number of sample records");
    validate(store);
    return store;
}

} // namespace flightpath
