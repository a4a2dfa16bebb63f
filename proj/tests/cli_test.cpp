// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 starseg contributors

// End-to-end checks of the starseg executable: exit codes, file outputs and
// byte-identity with direct library composition.

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "starseg/starseg.hpp"

namespace fs = std::filesystem;
using namespace starseg;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::uint8_t> slurp_bytes(const fs::path& p) {
    const std::string s = slurp(p);
    return std::vector<std::uint8_t>(s.begin(), s.end());
}

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("starseg_cli_test_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
                "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
        fs::create_directories(dir_);
    }

    void TearDown() override {
        std::error_code ec;
        fs::remove_all(dir_, ec);
    }

    RunResult run(const std::string& args) const {
        const fs::path out_file = dir_ / "stdout.txt";
        const fs::path err_file = dir_ / "stderr.txt";
        const std::string cmd = std::string(STARSEG_CLI_PATH) + " " + args + " >" + out_file.string() +
                                " 2>" + err_file.string();
        const int status = std::system(cmd.c_str());
        RunResult r;
        r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
        r.out = slurp(out_file);
        r.err = slurp(err_file);
        return r;
    }

    fs::path path(const std::string& name) const { return dir_ / name; }

    // A small synthetic scene written to disk for input.
    LabeledSample write_sample(const std::string& img_name, const std::string& gt_name,
                               int size = 160, int blobs = 6) const {
        SynthParams p;
        p.width = p.height = size;
        p.blob_count = blobs;
        p.radius_min = 3.0;
        p.radius_max = 6.0;
        p.blob_peak = 0.8;
        p.background_level = 0.15;
        p.noise_sigma = 0.05;
        p.seed = 7;
        const LabeledSample s = generate(p);
        {
            std::ofstream f(path(img_name), std::ios::binary);
            const auto bytes = write_image(s.image);
            f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<long>(bytes.size()));
        }
        {
            std::ofstream f(path(gt_name), std::ios::binary);
            const auto bytes = write_mask(s.truth);
            f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<long>(bytes.size()));
        }
        return s;
    }

    fs::path dir_;
};

}  // namespace

TEST_F(CliTest, SynthThenSegmentProducesMask) {
    RunResult r = run("synth --width 96 --height 96 --blobs 4 --seed 5 --noise 0.05 --out " +
                      path("img.pgm").string() + " --truth " + path("gt.pgm").string());
    ASSERT_EQ(r.exit_code, 0) << r.err;
    ASSERT_TRUE(fs::exists(path("img.pgm")));
    ASSERT_TRUE(fs::exists(path("gt.pgm")));

    r = run("segment --input " + path("img.pgm").string() + " --levels 5 --out " +
            path("mask.pgm").string());
    ASSERT_EQ(r.exit_code, 0) << r.err;
    ASSERT_TRUE(fs::exists(path("mask.pgm")));

    // The CLI mask must be byte-identical to composing the library directly.
    const Image img = read_image(slurp_bytes(path("img.pgm")));
    const BinaryMask expected = segment(img, 5, ThresholdPolicy::otsu(), 3);
    EXPECT_EQ(slurp_bytes(path("mask.pgm")), write_mask(expected));
}

TEST_F(CliTest, SegmentRejectsLevelsBelowJmin) {
    write_sample("img.pgm", "gt.pgm");
    const RunResult r = run("segment --input " + path("img.pgm").string() + " --levels 2 --out " +
                            path("mask.pgm").string());
    EXPECT_EQ(r.exit_code, 1);
    EXPECT_NE(r.err.find("jmin"), std::string::npos) << r.err;
    EXPECT_FALSE(fs::exists(path("mask.pgm")));
}

TEST_F(CliTest, SegmentFixedPolicyNeedsThreshold) {
    write_sample("img.pgm", "gt.pgm");
    const RunResult r = run("segment --input " + path("img.pgm").string() +
                            " --policy fixed --out " + path("mask.pgm").string());
    EXPECT_EQ(r.exit_code, 1);
    EXPECT_NE(r.err.find("threshold"), std::string::npos);
}

TEST_F(CliTest, DecomposeWritesAllPlanes) {
    write_sample("img.pgm", "gt.pgm");
    const RunResult r = run("decompose --input " + path("img.pgm").string() + " --levels 4 --csv " +
                            " --out-dir " + dir_.string());
    ASSERT_EQ(r.exit_code, 0) << r.err;
    for (int j = 1; j <= 4; ++j) {
        EXPECT_TRUE(fs::exists(path("img_w" + std::to_string(j) + ".pgm"))) << j;
        EXPECT_TRUE(fs::exists(path("img_w" + std::to_string(j) + ".csv"))) << j;
    }
    EXPECT_TRUE(fs::exists(path("img_c4.pgm")));
    EXPECT_TRUE(fs::exists(path("img_c4.csv")));

    // Raw CSV dump of the residual must parse back to the exact plane.
    const Image img = read_image(slurp_bytes(path("img.pgm")));
    const Decomposition d = starlet_decompose(img, 4);
    std::ifstream csv(path("img_c4.csv"));
    std::string line;
    int y = 0;
    while (std::getline(csv, line)) {
        std::istringstream row(line);
        std::string cell;
        int x = 0;
        while (std::getline(row, cell, ',')) {
            EXPECT_EQ(std::stod(cell), d.residual.at(x, y));
            ++x;
        }
        EXPECT_EQ(x, img.width());
        ++y;
    }
    EXPECT_EQ(y, img.height());
}

TEST_F(CliTest, EvaluateWritesOverlayAndCsv) {
    const LabeledSample s = write_sample("img.pgm", "gt.pgm");
    ASSERT_EQ(run("segment --input " + path("img.pgm").string() + " --levels 4 --out " +
                  path("mask.pgm").string())
                  .exit_code,
              0);
    const RunResult r = run("evaluate --pred " + path("mask.pgm").string() + " --gt " +
                            path("gt.pgm").string() + " --overlay " + path("ov.ppm").string() +
                            " --csv " + path("metrics.csv").string() + " --id sample");
    ASSERT_EQ(r.exit_code, 0) << r.err;

    const BinaryMask pred = read_mask(slurp_bytes(path("mask.pgm")));
    EXPECT_EQ(slurp_bytes(path("ov.ppm")), write_overlay(overlay(pred, s.truth)));

    const ConfusionCounts c = confusion(pred, s.truth);
    MetricsReport expected;
    expected.rows.push_back({"sample", 0, c, metrics(c), false});
    EXPECT_EQ(slurp(path("metrics.csv")), write_metrics_csv(expected));
}

TEST_F(CliTest, SweepWritesReportWithOneChosenRow) {
    write_sample("img.pgm", "gt.pgm", 320, 10);
    const RunResult r = run("sweep --input " + path("img.pgm").string() + " --gt " +
                            path("gt.pgm").string() + " --range 3..8 --out " +
                            path("report.csv").string() + " --id synth7");
    ASSERT_EQ(r.exit_code, 0) << r.err;

    const std::string csv = slurp(path("report.csv"));
    std::istringstream lines(csv);
    std::string line;
    ASSERT_TRUE(std::getline(lines, line));
    EXPECT_EQ(line, "image,level,tp,fp,fn,tn,precision,recall,accuracy,f1,chosen");
    int rows = 0, chosen = 0;
    while (std::getline(lines, line)) {
        ++rows;
        EXPECT_EQ(line.rfind("synth7,", 0), 0u);
        if (line.find(",true") != std::string::npos) ++chosen;
    }
    EXPECT_EQ(rows, 6);  // 320x320 supports level 8, so no cap
    EXPECT_EQ(chosen, 1);

    // Byte-identical to the library composition.
    const Image img = read_image(slurp_bytes(path("img.pgm")));
    const BinaryMask gt = read_mask(slurp_bytes(path("gt.pgm")));
    const auto entries = sweep_levels(img, gt, 3, 8);
    const int best = select_optimal_level(entries);
    MetricsReport expected;
    for (const auto& e : entries)
        expected.rows.push_back({"synth7", e.level, e.counts, e.metrics, e.level == best});
    EXPECT_EQ(csv, write_metrics_csv(expected));
}

TEST_F(CliTest, SweepReportsCapOnSmallImages) {
    write_sample("img.pgm", "gt.pgm", 48, 2);
    const RunResult r = run("sweep --input " + path("img.pgm").string() + " --gt " +
                            path("gt.pgm").string() + " --range 3..10 --out " +
                            path("report.csv").string());
    ASSERT_EQ(r.exit_code, 0) << r.err;
    EXPECT_NE(r.err.find("capped"), std::string::npos);
    std::istringstream lines(slurp(path("report.csv")));
    std::string line;
    std::getline(lines, line);
    int rows = 0;
    while (std::getline(lines, line)) ++rows;
    EXPECT_EQ(rows, 3);  // 48x48 supports levels 3..5 only
}

TEST_F(CliTest, UnknownSubcommandIsUsageError) {
    const RunResult r = run("frobnicate");
    EXPECT_EQ(r.exit_code, 1);
}

TEST_F(CliTest, MissingInputIsDataError) {
    const RunResult r = run("segment --input " + path("absent.pgm").string() + " --out " +
                            path("mask.pgm").string());
    EXPECT_EQ(r.exit_code, 2);
    EXPECT_FALSE(r.err.empty());
}

TEST_F(CliTest, MalformedInputIsDataErrorAndLeavesNoOutputs) {
    {
        std::ofstream f(path("bad.pgm"), std::ios::binary);
        f << "P5\n4 4\n255\nxx";  // truncated payload
    }
    const RunResult r = run("segment --input " + path("bad.pgm").string() + " --levels 4 --out " +
                            path("mask.pgm").string());
    EXPECT_EQ(r.exit_code, 2);
    EXPECT_FALSE(fs::exists(path("mask.pgm")));
    EXPECT_FALSE(fs::exists(path("mask.pgm.tmp")));
}

TEST_F(CliTest, SynthDeterminismAcrossInvocations) {
    const std::string args = "synth --width 64 --height 64 --blobs 5 --seed 11 --noise 0.03 "
                             "--roughness 0.1 --out ";
    ASSERT_EQ(run(args + path("a.pgm").string() + " --truth " + path("a_gt.pgm").string()).exit_code, 0);
    ASSERT_EQ(run(args + path("b.pgm").string() + " --truth " + path("b_gt.pgm").string()).exit_code, 0);
    EXPECT_EQ(slurp(path("a.pgm")), slurp(path("b.pgm")));
    EXPECT_EQ(slurp(path("a_gt.pgm")), slurp(path("b_gt.pgm")));
}

TEST_F(CliTest, FixedPolicyMatchesLibrary) {
    write_sample("img.pgm", "gt.pgm");
    const RunResult r = run("segment --input " + path("img.pgm").string() +
                            " --levels 4 --policy fixed --threshold -0.3 --out " +
                            path("mask.pgm").string());
    ASSERT_EQ(r.exit_code, 0) << r.err;
    const Image img = read_image(slurp_bytes(path("img.pgm")));
    const BinaryMask expected = segment(img, 4, ThresholdPolicy::fixed(-0.3), 3);
    EXPECT_EQ(slurp_bytes(path("mask.pgm")), write_mask(expected));
}

TEST_F(CliTest, PngOutputSelectedByExtension) {
    write_sample("img.pgm", "gt.pgm");
    const RunResult r = run("segment --input " + path("img.pgm").string() + " --levels 4 --out " +
                            path("mask.png").string());
    ASSERT_EQ(r.exit_code, 0) << r.err;
    const Image img = read_image(slurp_bytes(path("img.pgm")));
    const BinaryMask expected = segment(img, 4, ThresholdPolicy::otsu(), 3);
    EXPECT_EQ(read_mask(slurp_bytes(path("mask.png"))), expected);
}

TEST_F(CliTest, ScoreMapExportIsNormalized) {
    write_sample("img.pgm", "gt.pgm");
    const RunResult r = run("segment --input " + path("img.pgm").string() + " --levels 4 --out " +
                            path("mask.pgm").string() + " --score-out " + path("score.pgm").string());
    ASSERT_EQ(r.exit_code, 0) << r.err;
    const Image score = read_image(slurp_bytes(path("score.pgm")));
    EXPECT_GE(min_value(score), 0.0);
    EXPECT_LE(max_value(score), 1.0);
}
