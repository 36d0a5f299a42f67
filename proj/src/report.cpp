#include "detangle/report.hpp"

#include <json.hpp>

namespace detangle {

using json = nlohmann::ordered_json;

std::string tangles_to_json(std::span<const Tangle> tangles) {
    json doc;
    doc["tangles"] = json::array();
    for (const auto& t : tangles) {
        const auto& w = t.over_patch.window;
        json item;
        item["x"] = t.position.x;
        item["y"] = t.position.y;
        item["over_patch"] = {{"direction", std::string(to_string(t.over_patch.direction))},
                              {"window", json::array({w.x0, w.y0, w.w, w.h})},
                              {"patch_id", t.over_patch.patch_id}};
        item["confidence"] = t.confidence;
        item["over_angle_deg"] = t.over_angle_deg;
        doc["tangles"].push_back(std::move(item));
    }
    return doc.dump(2) + "\n";
}

std::vector<Tangle> tangles_from_json(std::string_view text) {
    try {
        const json doc = json::parse(text);
        std::vector<Tangle> out;
        for (const auto& item : doc.at("tangles")) {
            Tangle t;
            t.position = {item.at("x").get<double>(), item.at("y").get<double>()};
            const auto& op = item.at("over_patch");
            const auto dir = parse_direction(op.at("direction").get<std::string>());
            if (!dir) throw InvalidArgument("unknown direction in detections");
            t.over_patch.direction = *dir;
            const auto& w = op.at("window");
            t.over_patch.window = {w.at(0).get<int>(), w.at(1).get<int>(), w.at(2).get<int>(), w.at(3).get<int>()};
            t.over_patch.patch_id = op.at("patch_id").get<int>();
            t.confidence = item.at("confidence").get<double>();
            t.over_angle_deg = item.value("over_angle_deg", 0.0);
            out.push_back(t);
        }
        return out;
    } catch (const json::exception& e) {
        throw InvalidArgument(std::string("malformed detections JSON: ") + e.what());
    }
}

} // namespace detangle
