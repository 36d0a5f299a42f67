#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "detangle/verdict.hpp"

using namespace detangle;

namespace {

PatchAnalysis patch_at(int id, Point2 mean) {
    PatchAnalysis a;
    a.patch_id = id;
    a.midpoints.mean = mean;
    a.midpoints.points = {mean};
    a.poly = make_polynomial(FitAxis::XMajor, {mean.y, 0.0});
    return a;
}

IntersectionPoint at(Point2 p) {
    IntersectionPoint ip;
    ip.position = p;
    return ip;
}

TangleCandidate cand(Point2 p, double conf, CompassDirection d = CompassDirection::N,
                     WindowRect w = {0, 0, 64, 64}, int patch = 0) {
    TangleCandidate c;
    c.position = p;
    c.confidence = conf;
    c.direction = d;
    c.window = w;
    c.over_patch = patch;
    return c;
}

bool same(const std::vector<Tangle>& a, const std::vector<Tangle>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i].position != b[i].position || a[i].confidence != b[i].confidence ||
            !(a[i].over_patch == b[i].over_patch) ||
            a[i].contributing_candidate_count != b[i].contributing_candidate_count)
            return false;
    return true;
}

const WindowRect kWin{0, 0, 64, 64};

} // namespace

TEST_CASE("window decision examples") {
    SUBCASE("nearest patch is on top") {
        const std::vector<PatchAnalysis> ps{patch_at(1, {22.0, 2.0}), patch_at(2, {38.0, 50.0})};
        const auto c = decide_window(ps, at({2.0, 2.0}), kWin, CompassDirection::E);
        REQUIRE(c.has_value());
        CHECK(c->over_patch == 1);
        CHECK(c->under_patches == std::vector<int>{2});
        CHECK(c->d_over == doctest::Approx(20.0));
        const double dw = std::sqrt(8192.0);
        CHECK(c->confidence == doctest::Approx((dw - 20.0) / dw));
        CHECK(c->confidence == doctest::Approx(0.779).epsilon(1e-3));
        CHECK(c->direction == CompassDirection::E);
        CHECK(c->window == kWin);
    }
    SUBCASE("equal distances are a tie") {
        const std::vector<PatchAnalysis> ps{patch_at(0, {20.0, 10.0}), patch_at(1, {0.0, 10.0})};
        CHECK_FALSE(decide_window(ps, at({10.0, 10.0}), kWin, CompassDirection::N).has_value());
    }
    SUBCASE("gap inside the tie epsilon") {
        const std::vector<PatchAnalysis> ps{patch_at(0, {20.3, 10.0}), patch_at(1, {0.0, 10.0})};
        CHECK_FALSE(decide_window(ps, at({10.0, 10.0}), kWin, CompassDirection::N).has_value());
    }
    SUBCASE("one patch gives nothing") {
        const std::vector<PatchAnalysis> ps{patch_at(0, {20.0, 10.0})};
        CHECK_FALSE(decide_window(ps, at({10.0, 10.0}), kWin, CompassDirection::N).has_value());
    }
    SUBCASE("under patches come nearest first") {
        const std::vector<PatchAnalysis> ps{patch_at(0, {50.0, 50.0}), patch_at(1, {12.0, 10.0}),
                                            patch_at(2, {30.0, 10.0})};
        const auto c = decide_window(ps, at({10.0, 10.0}), kWin, CompassDirection::N);
        REQUIRE(c.has_value());
        CHECK(c->over_patch == 1);
        CHECK(c->under_patches == std::vector<int>{2, 0});
    }
    SUBCASE("window offset is respected") {
        const WindowRect r{100, 200, 64, 64};
        const std::vector<PatchAnalysis> ps{patch_at(4, {5.0, 5.0}), patch_at(7, {40.0, 40.0})};
        const auto c = decide_window(ps, at({104.0, 205.0}), r, CompassDirection::SW);
        REQUIRE(c.has_value());
        CHECK(c->over_patch == 4);
        CHECK(c->d_over == doctest::Approx(1.0));
        CHECK(c->position == Point2{104.0, 205.0});
    }
}

TEST_CASE("decision properties on random windows") {
    std::mt19937_64 rng(515);
    std::uniform_real_distribution<double> pos(0.0, 63.0), scale(0.1, 1.0);
    for (int trial = 0; trial < 300; ++trial) {
        const int n = 2 + trial % 4;
        const Point2 ip{pos(rng), pos(rng)};
        std::vector<PatchAnalysis> ps;
        for (int j = 0; j < n; ++j) ps.push_back(patch_at(j, {pos(rng), pos(rng)}));
        const auto c = decide_window(ps, at(ip), kWin, CompassDirection::N, DecideConfig{0.0});
        REQUIRE(c.has_value());
        CHECK(c->confidence >= 0.0);
        CHECK(c->confidence <= 1.0);

        // Brute-force argmin.
        int best = 0;
        for (int j = 1; j < n; ++j)
            if (distance(ps[j].midpoints.mean, ip) < distance(ps[best].midpoints.mean, ip)) best = j;
        CHECK(c->over_patch == best);

        // Shrinking every d_j about the intersection keeps the decision.
        const double s = scale(rng);
        std::vector<PatchAnalysis> scaled = ps;
        for (auto& a : scaled)
            a.midpoints.mean = {ip.x + s * (a.midpoints.mean.x - ip.x), ip.y + s * (a.midpoints.mean.y - ip.y)};
        const auto cs = decide_window(scaled, at(ip), kWin, CompassDirection::N, DecideConfig{0.0});
        REQUIRE(cs.has_value());
        CHECK(cs->over_patch == c->over_patch);
        CHECK(cs->confidence >= c->confidence - 1e-12);
    }
}

TEST_CASE("merge examples") {
    SUBCASE("same place keeps the higher confidence") {
        const std::vector<TangleCandidate> cs{cand({20, 20}, 0.6), cand({20, 20}, 0.9, CompassDirection::E)};
        const auto ts = merge_candidates(cs, 10.0);
        REQUIRE(ts.size() == 1);
        CHECK(ts[0].confidence == doctest::Approx(0.9));
        CHECK(ts[0].over_patch.direction == CompassDirection::E);
        CHECK(ts[0].contributing_candidate_count == 2);
    }
    SUBCASE("five pixels apart merge") {
        CHECK(merge_candidates(std::vector{cand({20, 20}, 0.5), cand({25, 20}, 0.4)}, 10.0).size() == 1);
    }
    SUBCASE("fifty pixels apart stay separate, sorted by confidence") {
        const auto ts = merge_candidates(std::vector{cand({20, 20}, 0.5), cand({70, 20}, 0.8)}, 10.0);
        REQUIRE(ts.size() == 2);
        CHECK(ts[0].confidence == doctest::Approx(0.8));
        CHECK(ts[1].confidence == doctest::Approx(0.5));
    }
    SUBCASE("chains link") {
        const auto ts = merge_candidates(std::vector{cand({0, 0}, 0.5), cand({8, 0}, 0.6), cand({16, 0}, 0.7)}, 10.0);
        REQUIRE(ts.size() == 1);
        CHECK(ts[0].position == Point2{16, 0});
    }
    SUBCASE("confidence ties go to the earlier direction, then the earlier window") {
        const auto ts = merge_candidates(
            std::vector{cand({5, 5}, 0.7, CompassDirection::NE), cand({5, 6}, 0.7, CompassDirection::S),
                        cand({5, 7}, 0.7, CompassDirection::NW)},
            10.0);
        REQUIRE(ts.size() == 1);
        CHECK(ts[0].over_patch.direction == CompassDirection::S);

        const auto tw = merge_candidates(std::vector{cand({5, 5}, 0.7, CompassDirection::W, {32, 0, 64, 64}),
                                                     cand({5, 6}, 0.7, CompassDirection::W, {0, 32, 64, 64}),
                                                     cand({5, 7}, 0.7, CompassDirection::W, {0, 0, 64, 64})},
                                         10.0);
        REQUIRE(tw.size() == 1);
        CHECK(tw[0].over_patch.window == WindowRect{0, 0, 64, 64});
    }
    SUBCASE("nothing in, nothing out") { CHECK(merge_candidates({}, 10.0).empty()); }
}

TEST_CASE("merge properties") {
    std::mt19937_64 rng(8675309);
    std::uniform_real_distribution<double> pos(0.0, 200.0), conf(0.0, 1.0);
    std::uniform_int_distribution<int> dir(0, 7), win(0, 3);
    const double radius = 10.0;
    for (int trial = 0; trial < 60; ++trial) {
        std::vector<TangleCandidate> cs;
        const int n = 1 + trial % 30;
        for (int i = 0; i < n; ++i)
            cs.push_back(cand({pos(rng), pos(rng)}, std::round(conf(rng) * 4) / 4, kAllDirections[dir(rng)],
                              {32 * win(rng), 0, 64, 64}, i));
        const auto ts = merge_candidates(cs, radius);

        // Representatives are pairwise separated.
        for (std::size_t i = 0; i < ts.size(); ++i)
            for (std::size_t j = i + 1; j < ts.size(); ++j) CHECK(distance(ts[i].position, ts[j].position) > radius);

        // Each candidate belongs to exactly one cluster, found by linkage from its representative.
        std::vector<int> owner(cs.size(), -1);
        for (std::size_t k = 0; k < ts.size(); ++k) {
            std::vector<std::size_t> frontier;
            for (std::size_t i = 0; i < cs.size(); ++i)
                if (cs[i].position == ts[k].position && owner[i] == -1) {
                    owner[i] = static_cast<int>(k);
                    frontier.push_back(i);
                }
            while (!frontier.empty()) {
                const std::size_t i = frontier.back();
                frontier.pop_back();
                for (std::size_t j = 0; j < cs.size(); ++j)
                    if (distance(cs[i].position, cs[j].position) <= radius) {
                        CHECK((owner[j] == -1 || owner[j] == static_cast<int>(k)));
                        if (owner[j] == -1) {
                            owner[j] = static_cast<int>(k);
                            frontier.push_back(j);
                        }
                    }
            }
            int members = 0;
            double top = 0.0;
            for (std::size_t i = 0; i < cs.size(); ++i)
                if (owner[i] == static_cast<int>(k)) {
                    ++members;
                    top = std::max(top, cs[i].confidence);
                }
            CHECK(members == ts[k].contributing_candidate_count);
            CHECK(ts[k].confidence == top);
        }
        CHECK(std::none_of(owner.begin(), owner.end(), [](int o) { return o == -1; }));
        for (std::size_t i = 1; i < ts.size(); ++i) CHECK(ts[i - 1].confidence >= ts[i].confidence);

        // Input order does not matter.
        for (int shuffle = 0; shuffle < 3; ++shuffle) {
            std::vector<TangleCandidate> perm = cs;
            std::shuffle(perm.begin(), perm.end(), rng);
            CHECK(same(merge_candidates(perm, radius), ts));
        }
    }
}
