#include <doctest.h>

#include <cmath>
#include <random>

#include <json.hpp>

#include "detangle/config.hpp"
#include "detangle/evaluate.hpp"
#include "detangle/pipeline.hpp"
#include "detangle/report.hpp"
#include "detangle/scene.hpp"

using namespace detangle;

namespace {

SceneSpec two_diagonals() {
    SceneSpec s;
    s.width = 120;
    s.height = 120;
    s.wires = {WireSpec{{{0, 0}, {100, 100}}, 4.0, {200, 60, 40}},
               WireSpec{{{0, 100}, {100, 0}}, 4.0, {40, 200, 60}}};
    return s;
}

Tangle tangle_at(Point2 p, double angle) {
    Tangle t;
    t.position = p;
    t.over_angle_deg = angle;
    t.confidence = 0.5;
    return t;
}

// Shifts the image content by (dx, dy), padding with `fill`.
RgbImage translated(const RgbImage& img, int dx, int dy, Rgb fill) {
    RgbImage out(img.width(), img.height(), fill);
    for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < img.width(); ++x) {
            const int sx = x - dx, sy = y - dy;
            if (sx >= 0 && sy >= 0 && sx < img.width() && sy < img.height()) out.set(x, y, img.at(sx, sy));
        }
    return out;
}

} // namespace

TEST_CASE("scene generation") {
    SUBCASE("same spec, same output") {
        auto spec = random_x_crossing(3);
        spec.background_style = BackgroundStyle::Texture;
        const auto [a, ta] = generate_scene(spec);
        const auto [b, tb] = generate_scene(spec);
        CHECK(a == b);
        CHECK(to_json(ta) == to_json(tb));
        spec.seed = 4;
        CHECK_FALSE(generate_scene(spec).first == a);
    }
    SUBCASE("two diagonals cross at the centre with the later wire on top") {
        const auto [img, truth] = generate_scene(two_diagonals());
        REQUIRE(truth.crossings.size() == 1);
        const Crossing& c = truth.crossings[0];
        CHECK(c.position.x == doctest::Approx(50.0));
        CHECK(c.position.y == doctest::Approx(50.0));
        CHECK(c.over_wire == 1);
        CHECK(c.under_wire == 0);
        CHECK(c.over_angle_deg == doctest::Approx(135.0));
        CHECK(c.under_angle_deg == doctest::Approx(45.0));
        CHECK(img.at(50, 50) == Rgb{40, 200, 60});
        CHECK(img.at(20, 20) == Rgb{200, 60, 40});
        // The gap cut into the lower wire beside the upper one.
        CHECK(img.at(46, 46) == Rgb{30, 30, 30});
        CHECK(img.at(42, 42) == Rgb{200, 60, 40});
    }
    SUBCASE("no wires") {
        SceneSpec s;
        s.width = 40;
        s.height = 30;
        const auto [img, truth] = generate_scene(s);
        CHECK(img == RgbImage(40, 30, s.background));
        CHECK(truth.crossings.empty());
        CHECK(truth.width == 40);
    }
    SUBCASE("invalid wires") {
        auto s = two_diagonals();
        s.wires[0].thickness = 0.0;
        CHECK_THROWS_AS(generate_scene(s), InvalidArgument);
        s = two_diagonals();
        s.wires[1].points[0] = {-1.0, 50.0};
        CHECK_THROWS_AS(generate_scene(s), InvalidArgument);
        s = two_diagonals();
        s.wires[1].points.resize(1);
        CHECK_THROWS_AS(generate_scene(s), InvalidArgument);
    }
    SUBCASE("every crossing sits on both centrelines and inside the frame") {
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            const auto spec = random_x_crossing(seed);
            const auto [img, truth] = generate_scene(spec);
            REQUIRE(truth.crossings.size() == 1);
            const Crossing& c = truth.crossings[0];
            CHECK(c.over_wire == 1);
            CHECK(img.at(static_cast<int>(std::lround(c.position.x)), static_cast<int>(std::lround(c.position.y))) !=
                  spec.background);
            for (const auto& w : spec.wires) {
                const Point2 a = w.points.front(), b = w.points.back();
                const double cross = (b.x - a.x) * (c.position.y - a.y) - (b.y - a.y) * (c.position.x - a.x);
                CHECK(std::abs(cross) / distance(a, b) < 1e-6);
            }
        }
    }
}

TEST_CASE("scene and truth JSON round-trip") {
    auto spec = random_x_crossing(11);
    spec.background_style = BackgroundStyle::Texture;
    const SceneSpec back = scene_spec_from_json(to_json(spec));
    CHECK(to_json(back) == to_json(spec));
    CHECK(generate_scene(back).first == generate_scene(spec).first);

    const auto truth = generate_scene(spec).second;
    CHECK(to_json(ground_truth_from_json(to_json(truth))) == to_json(truth));

    CHECK_THROWS_AS(scene_spec_from_json("{"), InvalidArgument);
    CHECK_THROWS_AS(scene_spec_from_json(R"({"background_style":"stripes"})"), InvalidArgument);
    CHECK_THROWS_AS(scene_spec_from_json(R"({"wires":[{"points":[[0,0],[1,1]],"color":[0,0,300]}]})"),
                    InvalidArgument);
}

TEST_CASE("accuracy") {
    SUBCASE("table rates") {
        const ConfusionRates r{0.479, 0.270, 0.175, 0.075};
        CHECK(std::trunc(r.accuracy() * 1000.0) / 1000.0 == 0.749);
        CHECK(std::abs(r.accuracy() - 0.749) < 1e-3);
        CHECK(r.sum() == doctest::Approx(0.999));
    }
    SUBCASE("from counts") {
        const auto r = ConfusionRates::from_counts({3, 5, 1, 1});
        CHECK(r.tp == doctest::Approx(0.3));
        CHECK(r.accuracy() == doctest::Approx(0.8));
        CHECK(ConfusionRates::from_counts({}).sum() == 0.0);
    }
}

TEST_CASE("window-level evaluation") {
    const auto [img, truth] = generate_scene(two_diagonals());
    const auto ws = windows(120, 120, 32, 32, 16);
    const int W = static_cast<int>(ws.size());
    int k = 0;
    for (const auto& w : ws) k += w.contains(50.0, 50.0) ? 1 : 0;
    REQUIRE(k > 0);
    REQUIRE(k < W);

    SUBCASE("perfect detection") {
        const std::vector<Tangle> d{tangle_at({51.0, 49.0}, 135.0)};
        const auto r = evaluate(d, truth, ws);
        CHECK(r.fp == 0.0);
        CHECK(r.fn == 0.0);
        CHECK(r.tp == doctest::Approx(double(k) / W));
        CHECK(r.accuracy() == doctest::Approx(1.0));
    }
    SUBCASE("no detections") {
        const auto r = evaluate({}, truth, ws);
        CHECK(r.tp == 0.0);
        CHECK(r.fp == 0.0);
        CHECK(r.fn == doctest::Approx(double(k) / W));
        CHECK(r.tn == doctest::Approx(double(W - k) / W));
        CHECK(r.accuracy() == doctest::Approx(double(W - k) / W));
    }
    SUBCASE("right place, wrong wire counts both ways") {
        const std::vector<Tangle> d{tangle_at({50.0, 50.0}, 45.0)};
        const auto c = count_outcomes(d, truth, ws, 10.0);
        CHECK(c.tp == 0);
        CHECK(c.fn == k);
        CHECK(c.fp == k);
    }
    SUBCASE("too far away") {
        const std::vector<Tangle> d{tangle_at({50.0, 62.0}, 135.0)};
        const auto c = count_outcomes(d, truth, ws, 10.0);
        CHECK(c.tp == 0);
        CHECK(c.fn == k);
    }
    SUBCASE("spurious detection in an empty window") {
        const std::vector<Tangle> d{tangle_at({100.0, 10.0}, 0.0)};
        const auto c = count_outcomes(d, truth, ws, 10.0);
        int holding = 0;
        for (const auto& w : ws) holding += w.contains(100.0, 10.0) ? 1 : 0;
        CHECK(c.fp == holding);
        CHECK(c.tn == W - k - holding);
    }
    SUBCASE("no crossings and no detections is all negative") {
        GroundTruth empty{120, 120, {}};
        const auto r = evaluate({}, empty, ws);
        CHECK(r.tn == doctest::Approx(1.0));
        CHECK(r.accuracy() == doctest::Approx(1.0));
    }
}

TEST_CASE("rates sum to one") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> pos(0.0, 119.0), ang(0.0, 180.0);
    const auto truth = generate_scene(two_diagonals()).second;
    const auto ws = windows(120, 120, 40, 40, 20);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<Tangle> d;
        for (int i = 0; i < trial % 6; ++i) d.push_back(tangle_at({pos(rng), pos(rng)}, ang(rng)));
        const auto r = evaluate(d, truth, ws, 5.0 + trial % 20);
        CHECK(std::abs(r.sum() - 1.0) < 1e-9);
        CHECK(r.accuracy() >= 0.0);
        CHECK(r.accuracy() <= 1.0);
    }
}

TEST_CASE("config parsing") {
    SUBCASE("defaults validate") { CHECK_NOTHROW(PipelineConfig{}.validate()); }
    SUBCASE("keys are applied") {
        const auto c = parse_config(R"(# tuned
color.target = [0, 0, 255]
color.tolerance = 25
blur.size = 7
blur.sigma = 1.2   # inline comment
window.w = 48
window.stride = 24
trace.connectivity = 4
fit.max_degree = 3
merge.radius_px = 12
run.mode = concurrent
)");
        REQUIRE(c.color.has_value());
        CHECK(c.color->color == Rgb{0, 0, 255});
        CHECK(c.color->tolerance == 25.0);
        CHECK(c.blur.size == 7);
        CHECK(c.blur.sigma == 1.2);
        CHECK(c.window.w == 48);
        CHECK(c.window.stride == 24);
        CHECK(c.connectivity == Connectivity::Four);
        CHECK(c.fit.max_degree == 3);
        CHECK(c.merge_radius_px == 12.0);
        CHECK(c.mode == ExecutionMode::Concurrent);
    }
    SUBCASE("errors") {
        CHECK_THROWS_AS(parse_config("nonsense.key = 1"), InvalidArgument);
        CHECK_THROWS_AS(parse_config("blur.size = 4"), InvalidArgument);
        CHECK_THROWS_AS(parse_config("blur.size = three"), InvalidArgument);
        CHECK_THROWS_AS(parse_config("blur.sigma"), InvalidArgument);
        CHECK_THROWS_AS(parse_config("color.target = [1,2]"), InvalidArgument);
        CHECK_THROWS_AS(parse_config("color.target = [1,2,256]"), InvalidArgument);
        CHECK_THROWS_AS(parse_config("color.tolerance = 5"), InvalidArgument);
        CHECK_THROWS_AS(parse_config("fit.max_degree = 0"), InvalidArgument);
        CHECK_THROWS_AS(load_config("/nonexistent/detangle.conf"), FileNotFound);
    }
}

TEST_CASE("detection JSON") {
    Tangle t;
    t.position = {12.5, 40.25};
    t.over_patch = {CompassDirection::NW, {32, 64, 64, 64}, 3};
    t.confidence = 0.8125;
    t.over_angle_deg = 30.5;
    const std::vector<Tangle> ts{t};
    const std::string text = tangles_to_json(ts);

    const auto doc = nlohmann::ordered_json::parse(text);
    const auto& item = doc.at("tangles").at(0);
    std::vector<std::string> keys;
    for (auto it = item.begin(); it != item.end(); ++it) keys.push_back(it.key());
    CHECK(keys == std::vector<std::string>{"x", "y", "over_patch", "confidence", "over_angle_deg"});
    std::vector<std::string> inner;
    for (auto it = item["over_patch"].begin(); it != item["over_patch"].end(); ++it) inner.push_back(it.key());
    CHECK(inner == std::vector<std::string>{"direction", "window", "patch_id"});
    CHECK(item["over_patch"]["direction"] == "NW");

    const auto back = tangles_from_json(text);
    REQUIRE(back.size() == 1);
    CHECK(back[0].position == t.position);
    CHECK(back[0].over_patch == t.over_patch);
    CHECK(back[0].confidence == t.confidence);
    CHECK(tangles_to_json(back) == text);

    CHECK(tangles_to_json({}) == "{\n  \"tangles\": []\n}\n");
    CHECK_THROWS_AS(tangles_from_json("[]"), InvalidArgument);
    CHECK_THROWS_AS(tangles_from_json(R"({"tangles":[{"x":1}]})"), InvalidArgument);
}

TEST_CASE("pipeline on synthetic scenes") {
    const PipelineConfig cfg;
    SUBCASE("blank image") {
        const auto r = run_pipeline(RgbImage(200, 150, Rgb{30, 30, 30}), cfg);
        CHECK(r.tangles.empty());
        CHECK(r.skipped_directions.size() == 8);
    }
    SUBCASE("one X crossing") {
        const auto spec = random_x_crossing(0);
        const auto [img, truth] = generate_scene(spec);
        const auto r = run_pipeline(img, cfg);
        REQUIRE(r.tangles.size() == 1);
        CHECK(distance(r.tangles[0].position, truth.crossings[0].position) <= 10.0);
        CHECK(names_correct_over_wire(r.tangles[0], truth.crossings[0]));
        for (const auto& c : r.candidates) {
            CHECK(c.confidence >= 0.0);
            CHECK(c.confidence <= 1.0);
        }
    }
    SUBCASE("sequential and concurrent runs agree") {
        const auto img = generate_scene(random_x_crossing(5)).first;
        PipelineConfig conc = cfg;
        conc.mode = ExecutionMode::Concurrent;
        CHECK(tangles_to_json(run_pipeline(img, cfg).tangles) == tangles_to_json(run_pipeline(img, conc).tangles));
    }
}

// Window placement is tied to the image grid, so this holds only as far as
// the per-window fits agree.
TEST_CASE("pipeline output follows image translation") {
    const PipelineConfig cfg;
    const auto spec = random_x_crossing(0);
    const auto img = generate_scene(spec).first;
    const auto base = run_pipeline(img, cfg);
    REQUIRE(base.tangles.size() == 1);
    for (auto [dx, dy] : {std::pair{5, 0}, std::pair{0, -7}, std::pair{-9, 4}, std::pair{13, 11}}) {
        CAPTURE(dx);
        CAPTURE(dy);
        const auto moved = run_pipeline(translated(img, dx, dy, spec.background), cfg);
        REQUIRE(moved.tangles.size() == 1);
        CHECK(std::abs(moved.tangles[0].position.x - base.tangles[0].position.x - dx) <= 2.0);
        CHECK(std::abs(moved.tangles[0].position.y - base.tangles[0].position.y - dy) <= 2.0);
    }
}
