// detangle: tangle detection, synthetic scenes and scoring from the command line.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "detangle/annotate.hpp"
#include "detangle/config.hpp"
#include "detangle/evaluate.hpp"
#include "detangle/image_io.hpp"
#include "detangle/pipeline.hpp"
#include "detangle/report.hpp"
#include "detangle/scene.hpp"

namespace fs = std::filesystem;
using namespace detangle;

namespace {

constexpr int kExitBadInput = 1;
constexpr int kExitInternal = 2;

std::string read_text(const fs::path& p) {
    std::ifstream in(p);
    if (!in) throw FileNotFound("cannot open: " + p.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw WriteError("cannot write: " + p.string());
    out << text;
    if (!out) throw WriteError("write failed: " + p.string());
}

void print_rates(const ConfusionCounts& counts) {
    const auto r = ConfusionRates::from_counts(counts);
    std::printf("%-8s %-8s %-8s %-8s %-8s\n", "TP", "TN", "FP", "FN", "Accuracy");
    std::printf("%-8.3f %-8.3f %-8.3f %-8.3f %-8.3f\n", r.tp, r.tn, r.fp, r.fn, r.accuracy());
    std::printf("windows: %d (tp %d, tn %d, fp %d, fn %d)\n", counts.total(), counts.tp, counts.tn,
                counts.fp, counts.fn);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Detect wire tangles in images"};
    app.require_subcommand(1);

    std::string config_path;
    bool concurrent = false;

    auto* detect = app.add_subcommand("detect", "Run the detector on one image");
    std::string image_path, out_path, annotate_path;
    detect->add_option("image", image_path, "PPM (P6) or PNG image")->required();
    detect->add_option("--config", config_path, "key = value configuration file");
    detect->add_option("--out", out_path, "write detections JSON here instead of stdout");
    detect->add_option("--annotate", annotate_path, "write an annotated copy of the image");
    detect->add_flag("--concurrent", concurrent, "process the compass directions in parallel");

    auto* synth = app.add_subcommand("synth", "Render a synthetic scene with ground truth");
    std::string spec_path, synth_image, synth_truth;
    std::uint64_t seed = 0;
    bool x_crossing = false;
    auto* spec_opt = synth->add_option("--spec", spec_path, "scene description JSON");
    auto* x_opt = synth->add_flag("--x-crossing", x_crossing, "random two-wire X crossing instead of --spec");
    spec_opt->excludes(x_opt);
    synth->add_option("--seed", seed, "random seed")->required();
    synth->add_option("--out-image", synth_image, "output image (.ppm or .png)")->required();
    synth->add_option("--out-truth", synth_truth, "output ground-truth JSON")->required();

    auto* eval = app.add_subcommand("eval", "Score detections against ground truth");
    std::string det_path, truth_path;
    double match_radius = -1.0;
    eval->add_option("--detections", det_path)->required();
    eval->add_option("--truth", truth_path)->required();
    eval->add_option("--match-radius", match_radius, "localization tolerance in pixels");
    eval->add_option("--config", config_path, "configuration (window geometry)");

    auto* bench = app.add_subcommand("bench", "Detect and score every scene in a directory");
    std::string scenes_dir;
    bench->add_option("--scenes", scenes_dir, "directory of <name>.ppm|png with <name>.truth.json")->required();
    bench->add_option("--config", config_path, "configuration file");
    bench->add_flag("--concurrent", concurrent, "process the compass directions in parallel");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // --help and friends exit 0; any real parse error is bad input.
        return app.exit(e) == 0 ? 0 : kExitBadInput;
    }

    try {
        PipelineConfig config = config_path.empty() ? PipelineConfig{} : load_config(config_path);
        if (concurrent) config.mode = ExecutionMode::Concurrent;

        if (*detect) {
            const RgbImage image = load_image(image_path);
            const auto result = run_pipeline(image, config);
            const std::string doc = tangles_to_json(result.tangles);
            if (out_path.empty()) std::cout << doc;
            else write_text(out_path, doc);
            if (!annotate_path.empty()) save_annotated(image, result.tangles, annotate_path);
        } else if (*synth) {
            if (spec_path.empty() && !x_crossing) throw InvalidArgument("synth needs --spec or --x-crossing");
            SceneSpec spec = x_crossing ? random_x_crossing(seed) : scene_spec_from_json(read_text(spec_path));
            spec.seed = seed;
            const auto [image, truth] = generate_scene(spec);
            save_image(image, synth_image);
            write_text(synth_truth, to_json(truth) + "\n");
        } else if (*eval) {
            const auto dets = tangles_from_json(read_text(det_path));
            const auto truth = ground_truth_from_json(read_text(truth_path));
            const double r = match_radius >= 0.0 ? match_radius : config.match_radius_px;
            const auto wins = windows(truth.width, truth.height, config.window);
            print_rates(count_outcomes(dets, truth, wins, r));
        } else if (*bench) {
            std::vector<fs::path> images;
            for (const auto& e : fs::directory_iterator(scenes_dir)) {
                const auto ext = e.path().extension().string();
                if (ext == ".ppm" || ext == ".png") images.push_back(e.path());
            }
            std::sort(images.begin(), images.end());
            ConfusionCounts total;
            int scored = 0;
            for (const auto& img : images) {
                fs::path truth_file = img;
                truth_file.replace_extension(".truth.json");
                if (!fs::exists(truth_file)) continue;
                const auto result = run_pipeline(load_image(img), config);
                const auto truth = ground_truth_from_json(read_text(truth_file));
                const auto wins = windows(truth.width, truth.height, config.window);
                total += count_outcomes(result.tangles, truth, wins, config.match_radius_px);
                ++scored;
            }
            if (scored == 0) throw InvalidArgument("no <name>.truth.json pairs found in " + scenes_dir);
            std::printf("scenes: %d\n", scored);
            print_rates(total);
        }
    } catch (const InvalidArgument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadInput;
    } catch (const FileNotFound& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadInput;
    } catch (const UnsupportedFormat& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadInput;
    } catch (const CorruptData& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadInput;
    } catch (const WriteError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadInput;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
    return 0;
}
