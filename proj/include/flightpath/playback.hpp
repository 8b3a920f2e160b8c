#pragma once

// Headless recreation of the viewer's rendering cycle: every frame runs the
// event, update and render traversals in that order, driven by a scripted
// event file instead of GUI input. The loop is strictly single-threaded and
// fixed-timestep (dt = 1/fps), so two runs over the same inputs produce
// byte-identical frame dumps.
//
// Command semantics:
//  - start     begins playback at the first key time (no-op while playing)
//  - pause     freezes the clock; a later start restarts from the beginning
//  - seek:<t>  repositions the clock, clamped into the key range; seeking at
//              or past the end reaches the end and goes idle
//  - rate:<r>  changes the time multiplier (r > 0)
//  - stop      goes idle and rewinds to the first key time
//
// Within a run the clock is advanced as base + steps * (dt * rate) with an
// integer step count, not by accumulation, so frame times are reproducible.

#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "flightpath/camera.hpp"
#include "flightpath/errors.hpp"
#include "flightpath/geodesy.hpp"
#include "flightpath/text_util.hpp"
#include "flightpath/trajectory.hpp"

namespace flightpath {

enum class SimMode { idle, simulation };

enum class SimCommand { start, pause, seek, set_rate, stop };

struct SimEvent {
    long at_frame = 0;
    SimCommand command = SimCommand::start;
    double arg = 0.0; // seek target (seconds) or rate multiplier
};

struct SimState {
    SimMode mode = SimMode::idle;
    double sim_time = 0.0;
    double rate = 1.0;
    long frame_index = 0;
    std::optional<ControlPoint> current_control;
    const AnimationPath* path = nullptr;

    // stepping bookkeeping; reset whenever the clock is repositioned
    double step_base = 0.0;
    long steps_since_base = 0;
    bool fresh_position = false; // render the repositioned time before advancing
};

struct FrameRecord {
    long frame_index = 0;
    double sim_time = 0.0;
    GeodeticPoint eye_geodetic;
    EcefPoint eye_ecef;
    Mat4 view_matrix;
};

inline SimState event_traversal(SimState state, std::span<const SimEvent> due) {
    if (!state.path)
        throw StateError("simulation state has no animation path");
    const AnimationPath& path = *state.path;
    for (const auto& ev : due) {
        switch (ev.command) {
        case SimCommand::start:
            if (state.mode == SimMode::idle) {
                state.mode = SimMode::simulation;
                state.sim_time = path.first_time();
                state.step_base = state.sim_time;
                state.steps_since_base = 0;
                state.fresh_position = true;
            }
            break;
        case SimCommand::pause:
            state.mode = SimMode::idle;
            break;
        case SimCommand::stop:
            state.mode = SimMode::idle;
            state.sim_time = path.first_time();
            state.step_base = state.sim_time;
            state.steps_since_base = 0;
            state.current_control.reset();
            break;
        case SimCommand::set_rate:
            if (!(ev.arg > 0.0))
                throw DomainError("rate must be positive");
            state.rate = ev.arg;
            state.step_base = state.sim_time;
            state.steps_since_base = 0;
            break;
        case SimCommand::seek:
            if (ev.arg >= path.last_time()) {
                state.sim_time = path.last_time();
                state.mode = SimMode::idle; // end reached
            } else {
                state.sim_time = std::max(ev.arg, path.first_time());
            }
            state.step_base = state.sim_time;
            state.steps_since_base = 0;
            state.fresh_position = true;
            break;
        }
    }
    return state;
}

inline SimState update_traversal(SimState state, double dt) {
    if (!(dt > 0.0))
        throw DomainError("frame timestep must be positive");
    if (state.mode != SimMode::simulation)
        return state;
    const AnimationPath& path = *state.path;
    if (state.fresh_position) {
        state.fresh_position = false;
    } else {
        state.steps_since_base += 1;
        state.sim_time = state.step_base + state.steps_since_base * (dt * state.rate);
    }
    if (state.sim_time >= path.last_time()) {
        state.sim_time = path.last_time();
        state.mode = SimMode::idle; // end of path
    }
    state.current_control = path.sample(state.sim_time);
    return state;
}

inline FrameRecord render_traversal(const SimState& state) {
    if (!state.current_control)
        throw StateError("no current control point; update traversal has not run");
    const ControlPoint& cp = *state.current_control;
    const CameraPose pose{matrix_from_quat(cp.rotation), cp.position};
    FrameRecord rec;
    rec.frame_index = state.frame_index;
    rec.sim_time = state.sim_time;
    rec.eye_ecef = cp.position;
    rec.eye_geodetic = ecef_to_geodetic(wgs84(), cp.position);
    rec.view_matrix = view_matrix_of(pose);
    return rec;
}

// One rendering-cycle iteration: events, then update, then render. A record
// is produced whenever the frame entered the update simulating, including
// the final clamped frame. The frame index is owned by the caller's loop.
inline std::pair<SimState, std::optional<FrameRecord>>
frame(SimState state, std::span<const SimEvent> due, double dt) {
    state = event_traversal(std::move(state), due);
    std::optional<FrameRecord> rec;
    if (state.mode == SimMode::simulation) {
        state = update_traversal(std::move(state), dt);
        rec = render_traversal(state);
    }
    return {std::move(state), rec};
}

// Fixed-timestep loop; runs until the mode returns to idle with no script
// events left to deliver.
inline std::vector<FrameRecord> run_playback(const AnimationPath& path,
                                             std::span<const SimEvent> script, int fps) {
    if (fps < 1)
        throw DomainError("fps must be at least 1");
    for (std::size_t i = 0; i < script.size(); ++i) {
        if (script[i].at_frame < 0)
            throw DomainError("script frame indices must be nonnegative");
        if (i > 0 && script[i].at_frame < script[i - 1].at_frame)
            throw DomainError("script events must be sorted by frame");
    }

    const double dt = 1.0 / fps;
    SimState state;
    state.path = &path;
    state.sim_time = path.first_time();
    state.step_base = state.sim_time;

    std::vector<FrameRecord> records;
    std::size_t next = 0;
    while (next < script.size() || state.mode == SimMode::simulation) {
        const std::size_t lo = next;
        while (next < script.size() && script[next].at_frame == state.frame_index)
            ++next;
        auto [advanced, rec] = frame(std::move(state), script.subspan(lo, next - lo), dt);
        state = std::move(advanced);
        if (rec)
            records.push_back(*rec);
        state.frame_index += 1;
    }
    return records;
}

// ---------------------------------------------------------------------------
// Event script file: `frame=<n> cmd=<start|pause|stop|seek:<t>|rate:<r>>`

inline std::vector<SimEvent> parse_event_script(std::string_view text) {
    std::vector<SimEvent> events;
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

        const auto space = stripped.find_first_of(" \t");
        if (space == std::string_view::npos)
            throw ParseError("line " + std::to_string(line_no) +
                             ": expected \"frame=<n> cmd=<command>\"");
        const std::string_view frame_tok = trim(stripped.substr(0, space));
        const std::string_view cmd_tok = trim(stripped.substr(space + 1));
        if (!frame_tok.starts_with("frame=") || !cmd_tok.starts_with("cmd="))
            throw ParseError("line " + std::to_string(line_no) +
                             ": expected \"frame=<n> cmd=<command>\"");

        SimEvent ev;
        const auto n = parse_int(frame_tok.substr(6));
        if (!n || *n < 0)
            throw ParseError("line " + std::to_string(line_no) +
                             ": malformed frame index");
        ev.at_frame = static_cast<long>(*n);

        const std::string_view cmd = cmd_tok.substr(4);
        if (cmd == "start") {
            ev.command = SimCommand::start;
        } else if (cmd == "pause") {
            ev.command = SimCommand::pause;
        } else if (cmd == "stop") {
            ev.command = SimCommand::stop;
        } else if (cmd.starts_with("seek:")) {
            ev.command = SimCommand::seek;
            const auto t = parse_double(cmd.substr(5));
            if (!t || !std::isfinite(*t))
                throw ParseError("line " + std::to_string(line_no) +
                                 ": malformed seek target");
            ev.arg = *t;
        } else if (cmd.starts_with("rate:")) {
            ev.command = SimCommand::set_rate;
            const auto r = parse_double(cmd.substr(5));
            if (!r)
                throw ParseError("line " + std::to_string(line_no) +
                                 ": malformed rate value");
            if (!(*r > 0.0))
                throw ValidationError("line " + std::to_string(line_no) +
                                      ": rate must be positive");
            ev.arg = *r;
        } else {
            throw ParseError("line " + std::to_string(line_no) + ": unknown command \"" +
                             std::string(cmd) + "\"");
        }

        if (!events.empty() && ev.at_frame < events.back().at_frame)
            throw ValidationError("line " + std::to_string(line_no) +
                                  ": script events must be sorted by frame");
        events.push_back(ev);
    }
    return events;
}

// One line per frame: index, time, geodetic eye, ECEF eye, then the sixteen
// view-matrix entries row-major; 12 significant digits throughout.
inline std::string emit_frame_dump(std::span<const FrameRecord> records) {
    std::string out;
    for (const auto& r : records) {
        out += std::to_string(r.frame_index);
        out += ' ';
        out += format_double_general(r.sim_time, 12);
        out += ' ';
        out += format_double_general(r.eye_geodetic.lon, 12);
        out += ' ';
        out += format_double_general(r.eye_geodetic.lat, 12);
        out += ' ';
        out += format_double_general(r.eye_geodetic.h, 12);
        out += ' ';
        out += format_double_general(r.eye_ecef.x, 12);
        out += ' ';
        out += format_double_general(r.eye_ecef.y, 12);
        out += ' ';
        out += format_double_general(r.eye_ecef.z, 12);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                out += ' ';
                out += format_double_general(r.view_matrix.m[i][j], 12);
            }
        out += '\n';
    }
    return out;
}

} // namespace flightpath
