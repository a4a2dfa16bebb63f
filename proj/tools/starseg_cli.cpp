// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 starseg contributors

// Command-line front end for the starseg library.
//
//   starseg decompose  --input img.pgm --levels 6 --out-dir out/
//   starseg segment    --input img.pgm --levels 6 --out mask.pgm
//   starseg evaluate   --pred mask.pgm --gt truth.pgm --overlay ov.ppm --csv m.csv
//   starseg sweep      --input img.pgm --gt truth.pgm --range 3..10 --out report.csv
//   starseg synth      --width 256 --height 256 --blobs 12 --seed 42
//                      --out img.pgm --truth truth.pgm
//
// Exit codes: 0 success, 1 usage error, 2 data error. Output files are
// written to a temporary name and renamed into place, so failed runs leave
// no partial outputs behind.

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "starseg/starseg.hpp"

namespace fs = std::filesystem;
using namespace starseg;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

/// Thrown for argument problems CLI11 cannot see (cross-flag constraints).
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<std::uint8_t> read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open input file: " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    if (in.bad()) throw Error("failed reading input file: " + path.string());
    return bytes;
}

void write_file_atomic(const fs::path& path, const std::vector<std::uint8_t>& bytes) {
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot open output file: " + tmp.string());
        out.write(reinterpret_cast<const char*>(bytes.data()),
                  static_cast<std::streamsize>(bytes.size()));
        if (!out) {
            out.close();
            std::error_code ec;
            fs::remove(tmp, ec);
            throw Error("failed writing output file: " + tmp.string());
        }
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw Error("failed to move output into place: " + path.string());
    }
}

void write_file_atomic(const fs::path& path, const std::string& text) {
    write_file_atomic(path, std::vector<std::uint8_t>(text.begin(), text.end()));
}

ImageFileFormat gray_format_for(const fs::path& path) {
    return path.extension() == ".png" ? ImageFileFormat::png_gray_8 : ImageFileFormat::pgm_binary;
}

ImageFileFormat overlay_format_for(const fs::path& path) {
    return path.extension() == ".png" ? ImageFileFormat::png_rgb_8 : ImageFileFormat::ppm_binary;
}

/// Min-max normalization for viewable exports of signed planes; a constant
/// plane maps to all zeros.
Image normalized_for_view(const Image& plane) {
    const double lo = min_value(plane), hi = max_value(plane);
    Image out(plane.width(), plane.height(), 0.0);
    if (hi > lo) {
        const double inv = 1.0 / (hi - lo);
        for (std::size_t i = 0; i < plane.size(); ++i)
            out.data()[i] = (plane.data()[i] - lo) * inv;
    }
    return out;
}

/// Raw plane dump: one CSV line per row, shortest round-trippable doubles.
std::string plane_to_csv(const Image& plane) {
    std::string out;
    char buf[64];
    for (int y = 0; y < plane.height(); ++y) {
        for (int x = 0; x < plane.width(); ++x) {
            const auto res = std::to_chars(buf, buf + sizeof buf, plane.at(x, y));
            if (x) out += ',';
            out.append(buf, res.ptr);
        }
        out += '\n';
    }
    return out;
}

ThresholdPolicy make_policy(const std::string& name, bool threshold_set, double threshold) {
    if (name == "otsu") return ThresholdPolicy::otsu();
    if (name == "positive") return ThresholdPolicy::positive();
    if (name == "fixed") {
        if (!threshold_set) throw UsageError("--policy fixed requires --threshold");
        return ThresholdPolicy::fixed(threshold);
    }
    throw UsageError("unknown threshold policy '" + name + "' (expected otsu, positive or fixed)");
}

std::pair<int, int> parse_range(const std::string& text) {
    const auto sep = text.find("..");
    if (sep == std::string::npos)
        throw UsageError("--range expects LO..HI, got '" + text + "'");
    int lo = 0, hi = 0;
    const char* begin = text.data();
    auto r1 = std::from_chars(begin, begin + sep, lo);
    auto r2 = std::from_chars(begin + sep + 2, begin + text.size(), hi);
    if (r1.ec != std::errc{} || r1.ptr != begin + sep || r2.ec != std::errc{} ||
        r2.ptr != begin + text.size())
        throw UsageError("--range expects LO..HI, got '" + text + "'");
    if (lo < 1 || lo > hi) throw UsageError("--range bounds must satisfy 1 <= LO <= HI");
    return {lo, hi};
}

struct CommonSegmentOptions {
    std::string input;
    int levels = 6;
    int j_min = 3;
    std::string policy_name = "otsu";
    double threshold = 0.0;
    bool threshold_set = false;
};

void add_policy_flags(CLI::App* cmd, CommonSegmentOptions& opt) {
    cmd->add_option("--policy", opt.policy_name, "Threshold policy: otsu, positive or fixed")
        ->default_str("otsu");
    cmd->add_option("--threshold", opt.threshold, "Threshold value for --policy fixed")
        ->each([&opt](const std::string&) { opt.threshold_set = true; });
}

int run_decompose(const std::string& input, int levels, const std::string& out_dir, bool dump_csv) {
    const Image img = read_image(read_file(input));
    const Decomposition d = starlet_decompose(img, levels);

    const fs::path dir(out_dir);
    if (!dir.empty()) fs::create_directories(dir);
    const std::string stem = fs::path(input).stem().string();

    for (int j = 1; j <= d.levels(); ++j) {
        const Image& plane = d.details[static_cast<std::size_t>(j - 1)];
        const fs::path base = dir / (stem + "_w" + std::to_string(j));
        write_file_atomic(base.string() + ".pgm",
                          write_image(normalized_for_view(plane), ImageFileFormat::pgm_binary));
        if (dump_csv) write_file_atomic(base.string() + ".csv", plane_to_csv(plane));
    }
    const fs::path residual_base = dir / (stem + "_c" + std::to_string(d.levels()));
    write_file_atomic(residual_base.string() + ".pgm",
                      write_image(d.residual, ImageFileFormat::pgm_binary));
    if (dump_csv) write_file_atomic(residual_base.string() + ".csv", plane_to_csv(d.residual));

    std::cerr << "decompose: wrote " << d.levels() << " detail plane(s) and the residual to "
              << (dir.empty() ? fs::path(".") : dir).string() << "\n";
    return 0;
}

int run_segment(const CommonSegmentOptions& opt, const std::string& out,
                const std::string& score_out) {
    if (opt.levels < opt.j_min)
        throw UsageError("--levels " + std::to_string(opt.levels) + " is below --jmin " +
                         std::to_string(opt.j_min) +
                         ": detail levels below j_min carry noise and are excluded, so at least "
                         "j_min decomposition levels are required");
    const ThresholdPolicy policy = make_policy(opt.policy_name, opt.threshold_set, opt.threshold);
    const Image img = read_image(read_file(opt.input));

    const Decomposition d = starlet_decompose(img, opt.levels);
    const ScoreMap scores = detail_sum_map(d, img, opt.j_min);
    const BinaryMask mask = binarize(scores, policy);

    write_file_atomic(out, write_mask(mask, gray_format_for(out)));
    if (!score_out.empty())
        write_file_atomic(score_out,
                          write_image(normalized_for_view(scores), gray_format_for(score_out)));
    return 0;
}

int run_evaluate(const std::string& pred_path, const std::string& gt_path,
                 const std::string& overlay_path, const std::string& csv_path, std::string image_id) {
    const BinaryMask pred = read_mask(read_file(pred_path));
    const BinaryMask gt = read_mask(read_file(gt_path));
    const ConfusionCounts counts = confusion(pred, gt);
    const Metrics m = metrics(counts);

    if (!overlay_path.empty())
        write_file_atomic(overlay_path,
                          write_overlay(overlay(pred, gt), overlay_format_for(overlay_path)));
    if (!csv_path.empty()) {
        if (image_id.empty()) image_id = fs::path(pred_path).stem().string();
        MetricsReport report;
        report.rows.push_back({image_id, 0, counts, m, false});
        write_file_atomic(csv_path, write_metrics_csv(report));
    }
    std::cerr << "evaluate: precision " << m.precision << ", recall " << m.recall << ", accuracy "
              << m.accuracy << ", f1 " << m.f1 << "\n";
    return 0;
}

int run_sweep(const CommonSegmentOptions& opt, const std::string& gt_path,
              const std::string& range_text, const std::string& out, std::string image_id) {
    const auto [lo, hi] = parse_range(range_text);
    if (lo < opt.j_min)
        throw UsageError("--range low end " + std::to_string(lo) + " is below --jmin " +
                         std::to_string(opt.j_min));
    const ThresholdPolicy policy = make_policy(opt.policy_name, opt.threshold_set, opt.threshold);
    const Image img = read_image(read_file(opt.input));
    const BinaryMask gt = read_mask(read_file(gt_path));

    const std::vector<SweepEntry> entries = sweep_levels(img, gt, lo, hi, policy, opt.j_min);
    if (entries.empty())
        throw Error("sweep: no level in " + std::to_string(lo) + ".." + std::to_string(hi) +
                    " fits a " + std::to_string(img.width()) + "x" + std::to_string(img.height()) +
                    " image");
    if (entries.back().level < hi)
        std::cerr << "sweep: range capped at level " << entries.back().level << " (image size limit)\n";

    const int chosen = select_optimal_level(entries);
    if (image_id.empty()) image_id = fs::path(opt.input).stem().string();
    MetricsReport report;
    for (const SweepEntry& e : entries)
        report.rows.push_back({image_id, e.level, e.counts, e.metrics, e.level == chosen});
    write_file_atomic(out, write_metrics_csv(report));
    std::cerr << "sweep: chose level " << chosen << " for " << image_id << "\n";
    return 0;
}

int run_synth(const SynthParams& params, const std::string& out, const std::string& truth_out) {
    const LabeledSample sample = generate(params);
    write_file_atomic(out, write_image(sample.image, gray_format_for(out)));
    write_file_atomic(truth_out, write_mask(sample.truth, gray_format_for(truth_out)));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Starlet-based segmentation of bright isotropic objects in grayscale images"};
    app.require_subcommand(1);

    // decompose
    auto* decompose_cmd = app.add_subcommand("decompose", "Write detail planes w_1..w_L and residual c_L");
    std::string dec_input, dec_out_dir = ".";
    int dec_levels = 6;
    bool dec_csv = false;
    decompose_cmd->add_option("--input", dec_input, "Input grayscale image (PGM or PNG)")->required();
    decompose_cmd->add_option("--levels", dec_levels, "Decomposition depth L")->default_val(6);
    decompose_cmd->add_option("--out-dir", dec_out_dir, "Output directory");
    decompose_cmd->add_flag("--csv", dec_csv, "Also dump raw plane values as CSV");

    // segment
    auto* segment_cmd = app.add_subcommand("segment", "Segment bright objects into a binary mask");
    CommonSegmentOptions seg_opt;
    std::string seg_out, seg_score_out;
    segment_cmd->add_option("--input", seg_opt.input, "Input grayscale image")->required();
    segment_cmd->add_option("--levels", seg_opt.levels, "Decomposition depth L")->default_val(6);
    segment_cmd->add_option("--jmin", seg_opt.j_min, "First detail level kept in the score map")
        ->default_val(3);
    add_policy_flags(segment_cmd, seg_opt);
    segment_cmd->add_option("--out", seg_out, "Output mask path")->required();
    segment_cmd->add_option("--score-out", seg_score_out, "Optional normalized score map output");

    // evaluate
    auto* evaluate_cmd = app.add_subcommand("evaluate", "Compare a mask against ground truth");
    std::string eval_pred, eval_gt, eval_overlay, eval_csv, eval_id;
    evaluate_cmd->add_option("--pred", eval_pred, "Predicted mask")->required();
    evaluate_cmd->add_option("--gt", eval_gt, "Ground-truth mask")->required();
    evaluate_cmd->add_option("--overlay", eval_overlay, "Overlay output (PPM or PNG)");
    evaluate_cmd->add_option("--csv", eval_csv, "Metrics CSV output");
    evaluate_cmd->add_option("--id", eval_id, "Image id for the CSV (default: pred file stem)");

    // sweep
    auto* sweep_cmd = app.add_subcommand("sweep", "Sweep decomposition depths and pick the best");
    CommonSegmentOptions sweep_opt;
    std::string sweep_gt, sweep_range = "3..10", sweep_out, sweep_id;
    sweep_cmd->add_option("--input", sweep_opt.input, "Input grayscale image")->required();
    sweep_cmd->add_option("--gt", sweep_gt, "Ground-truth mask")->required();
    sweep_cmd->add_option("--range", sweep_range, "Level range LO..HI")->default_str("3..10");
    sweep_cmd->add_option("--jmin", sweep_opt.j_min, "First detail level kept in the score map")
        ->default_val(3);
    add_policy_flags(sweep_cmd, sweep_opt);
    sweep_cmd->add_option("--out", sweep_out, "Report CSV output")->required();
    sweep_cmd->add_option("--id", sweep_id, "Image id for the CSV (default: input file stem)");

    // synth
    auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic image with ground truth");
    SynthParams synth_params;
    std::string synth_out, synth_truth;
    synth_cmd->add_option("--width", synth_params.width)->default_val(256);
    synth_cmd->add_option("--height", synth_params.height)->default_val(256);
    synth_cmd->add_option("--blobs", synth_params.blob_count, "Number of blobs")->default_val(10);
    synth_cmd->add_option("--radius-min", synth_params.radius_min)->default_val(3.0);
    synth_cmd->add_option("--radius-max", synth_params.radius_max)->default_val(8.0);
    synth_cmd->add_option("--peak", synth_params.blob_peak, "Blob peak intensity")->default_val(0.7);
    synth_cmd->add_option("--background", synth_params.background_level)->default_val(0.15);
    synth_cmd->add_option("--roughness", synth_params.roughness_amplitude)->default_val(0.0);
    synth_cmd->add_option("--noise", synth_params.noise_sigma, "Gaussian noise sigma")->default_val(0.0);
    synth_cmd->add_flag("--allow-overlap,!--no-overlap", synth_params.allow_overlap,
                        "Allow blobs to overlap (default: allowed)");
    synth_cmd->add_option("--seed", synth_params.seed)->default_val(0);
    synth_cmd->add_option("--out", synth_out, "Image output path")->required();
    synth_cmd->add_option("--truth", synth_truth, "Ground-truth mask output path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : kExitUsage;
    }

    try {
        if (decompose_cmd->parsed()) return run_decompose(dec_input, dec_levels, dec_out_dir, dec_csv);
        if (segment_cmd->parsed()) return run_segment(seg_opt, seg_out, seg_score_out);
        if (evaluate_cmd->parsed())
            return run_evaluate(eval_pred, eval_gt, eval_overlay, eval_csv, eval_id);
        if (sweep_cmd->parsed())
            return run_sweep(sweep_opt, sweep_gt, sweep_range, sweep_out, sweep_id);
        if (synth_cmd->parsed()) return run_synth(synth_params, synth_out, synth_truth);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }
    return 0;
}
