#include "detangle/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>

namespace detangle {

namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void bad(std::string_view key, std::string_view value, std::string_view why) {
    throw InvalidArgument("config key '" + std::string(key) + "' = '" + std::string(value) + "': " +
                          std::string(why));
}

double to_double(std::string_view key, std::string_view v) {
    double out = 0.0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size()) bad(key, v, "expected a number");
    return out;
}

int to_int(std::string_view key, std::string_view v) {
    int out = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size()) bad(key, v, "expected an integer");
    return out;
}

Rgb to_rgb(std::string_view key, std::string_view v) {
    if (v.size() < 2 || v.front() != '[' || v.back() != ']') bad(key, v, "expected [r,g,b]");
    std::string_view body = v.substr(1, v.size() - 2);
    int ch[3];
    for (int i = 0; i < 3; ++i) {
        const auto comma = body.find(',');
        if ((i < 2) == (comma == std::string_view::npos)) bad(key, v, "expected three channels");
        const int x = to_int(key, trim(body.substr(0, comma)));
        if (x < 0 || x > 255) bad(key, v, "channel out of range");
        ch[i] = x;
        body = comma == std::string_view::npos ? std::string_view{} : body.substr(comma + 1);
    }
    return {static_cast<std::uint8_t>(ch[0]), static_cast<std::uint8_t>(ch[1]), static_cast<std::uint8_t>(ch[2])};
}

} // namespace

void PipelineConfig::validate() const {
    if (color && color->tolerance < 0.0) throw InvalidArgument("color.tolerance must be >= 0");
    if (blur.size < 1 || blur.size % 2 == 0) throw InvalidArgument("blur.size must be odd and >= 1");
    if (!(blur.sigma > 0.0)) throw InvalidArgument("blur.sigma must be > 0");
    if (window.w < 1 || window.h < 1 || window.stride < 1)
        throw InvalidArgument("window.w, window.h and window.stride must be >= 1");
    if (window.min_patch_pixels < 1) throw InvalidArgument("window.min_patch_pixels must be >= 1");
    if (fit.max_degree < 1) throw InvalidArgument("fit.max_degree must be >= 1");
    if (fit.tolerance_px < 0.0) throw InvalidArgument("fit.tolerance_px must be >= 0");
    if (fit.holdout_tolerance_px < 0.0) throw InvalidArgument("fit.holdout_tolerance_px must be >= 0");
    if (decide.tie_epsilon_px < 0.0) throw InvalidArgument("decide.tie_epsilon_px must be >= 0");
    if (min_crossing_angle_deg < 0.0 || min_crossing_angle_deg > 90.0)
        throw InvalidArgument("intersect.min_angle_deg must be within [0, 90]");
    if (!(max_reach_px > 0.0)) throw InvalidArgument("intersect.max_reach_px must be > 0");
    if (border_margin_px < 0.0) throw InvalidArgument("intersect.border_margin_px must be >= 0");
    if (merge_radius_px < 0.0) throw InvalidArgument("merge.radius_px must be >= 0");
    if (match_radius_px < 0.0) throw InvalidArgument("eval.match_radius_px must be >= 0");
}

PipelineConfig parse_config(std::string_view text, PipelineConfig cfg) {
    std::optional<double> tolerance;
    std::istringstream in{std::string(text)};
    std::string raw;
    while (std::getline(in, raw)) {
        std::string_view line = raw;
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw InvalidArgument("config line without '=': " + raw);
        const std::string_view key = trim(line.substr(0, eq));
        const std::string_view v = trim(line.substr(eq + 1));

        if (key == "color.target") {
            if (v == "none") cfg.color.reset();
            else cfg.color = ColorTarget{to_rgb(key, v), cfg.color ? cfg.color->tolerance : 60.0};
        } else if (key == "color.tolerance") tolerance = to_double(key, v);
        else if (key == "blur.size") cfg.blur.size = to_int(key, v);
        else if (key == "blur.sigma") cfg.blur.sigma = to_double(key, v);
        else if (key == "blur.preset") {
            if (v == "indoor") cfg.blur = BlurConfig::indoor();
            else if (v == "outdoor") cfg.blur = BlurConfig::outdoor();
            else bad(key, v, "expected indoor or outdoor");
        }
        else if (key == "window.w") cfg.window.w = to_int(key, v);
        else if (key == "window.h") cfg.window.h = to_int(key, v);
        else if (key == "window.stride") cfg.window.stride = to_int(key, v);
        else if (key == "window.min_patch_pixels") cfg.window.min_patch_pixels = to_int(key, v);
        else if (key == "trace.connectivity") {
            if (v == "8" || v == "eight") cfg.connectivity = Connectivity::Eight;
            else if (v == "4" || v == "four") cfg.connectivity = Connectivity::Four;
            else bad(key, v, "expected 4 or 8");
        }
        else if (key == "fit.max_degree") cfg.fit.max_degree = to_int(key, v);
        else if (key == "fit.tolerance_px") cfg.fit.tolerance_px = to_double(key, v);
        else if (key == "fit.holdout_tolerance_px") cfg.fit.holdout_tolerance_px = to_double(key, v);
        else if (key == "decide.tie_epsilon_px") cfg.decide.tie_epsilon_px = to_double(key, v);
        else if (key == "intersect.min_angle_deg") cfg.min_crossing_angle_deg = to_double(key, v);
        else if (key == "intersect.max_reach_px") cfg.max_reach_px = to_double(key, v);
        else if (key == "intersect.border_margin_px") cfg.border_margin_px = to_double(key, v);
        else if (key == "merge.radius_px") cfg.merge_radius_px = to_double(key, v);
        else if (key == "eval.match_radius_px") cfg.match_radius_px = to_double(key, v);
        else if (key == "run.mode") {
            if (v == "sequential") cfg.mode = ExecutionMode::Sequential;
            else if (v == "concurrent") cfg.mode = ExecutionMode::Concurrent;
            else bad(key, v, "expected sequential or concurrent");
        }
        else throw InvalidArgument("unknown config key: " + std::string(key));
    }
    if (tolerance) {
        if (!cfg.color) throw InvalidArgument("color.tolerance given without color.target");
        cfg.color->tolerance = *tolerance;
    }
    cfg.validate();
    return cfg;
}

PipelineConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw FileNotFound("cannot open config: " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

} // namespace detangle
