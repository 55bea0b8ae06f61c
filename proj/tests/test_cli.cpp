// Copyright (c) 2026 the rootlet-levels authors
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy
// of the License at http://www.apache.org/licenses/LICENSE-2.0

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "rootlets/nifti.hpp"
#include "rootlets/phantom.hpp"
#include "test_util.hpp"

using namespace rootlets;
using namespace rootlets::testing;
namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
  std::string cmd = std::string(CLI_BINARY_PATH) + " " + args + " >/dev/null 2>&1";
  int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  return WEXITSTATUS(status);
}

std::string q(const fs::path& p) { return "\"" + p.string() + "\""; }

// phantom volumes plus a pmj json, shared by the subcommand tests
struct CliFixture {
  fs::path dir;
  fs::path image, cord, rootlets, pmj;

  CliFixture() : dir(fresh_temp_dir()) {
    PhantomBundle ph = generate_phantom(default_phantom_spec());
    image = dir / "image.nii.gz";
    cord = dir / "cord.nii.gz";
    rootlets = dir / "rootlets.nii.gz";
    pmj = dir / "pmj.json";
    write_nifti(ph.image, image);
    write_nifti(ph.cord, cord);
    write_nifti(ph.rootlets, rootlets);
    std::ofstream(pmj) << "{\"pmj_mm\": [" << ph.pmj.mm[0] << ", "
                       << ph.pmj.mm[1] << ", " << ph.pmj.mm[2] << "]}";
  }
};

}  // namespace

TEST_CASE("phantom subcommand is deterministic") {
  fs::path a = fresh_temp_dir(), b = fresh_temp_dir();
  CHECK(run("phantom --seed 7 --noise-sd 10 --out " + q(a)) == 0);
  CHECK(run("phantom --seed 7 --noise-sd 10 --out " + q(b)) == 0);
  for (const char* name :
       {"phantom_image.nii.gz", "phantom_cord.nii.gz",
        "phantom_rootlets.nii.gz", "phantom_pmj.json", "phantom_truth.json",
        "manifest.json"}) {
    CAPTURE(name);
    CHECK(slurp(a / name) == slurp(b / name));
  }
}

TEST_CASE("levels subcommand recovers phantom truth") {
  CliFixture fx;
  fs::path out = fresh_temp_dir();
  int code = run("levels --rootlets " + q(fx.rootlets) + " --cord " +
                 q(fx.cord) + " --pmj " + q(fx.pmj) + " --out " + q(out));
  CHECK(code == 0);
  CHECK(fs::exists(out / "levels_report.json"));
  CHECK(fs::exists(out / "spinal_levels.nii.gz"));
  CHECK(fs::exists(out / "centerline.csv"));
  CHECK(fs::exists(out / "manifest.json"));

  std::string csv = slurp(out / "level_extents.csv");
  // default phantom, level 2: slices 105..114, mid 110, pmj_mid 11.2 mm
  // (mm values carry float32 srow quantization, so match only the prefix)
  CHECK(csv.find("2,114,105,110,") != std::string::npos);
  CHECK(csv.find(",11.2000") != std::string::npos);

  // repeated runs are byte-identical
  fs::path out2 = fresh_temp_dir();
  CHECK(run("levels --rootlets " + q(fx.rootlets) + " --cord " + q(fx.cord) +
            " --pmj " + q(fx.pmj) + " --out " + q(out2)) == 0);
  CHECK(slurp(out / "levels_report.json") == slurp(out2 / "levels_report.json"));
  CHECK(slurp(out / "level_extents.csv") == slurp(out2 / "level_extents.csv"));
  CHECK(slurp(out / "spinal_levels.nii.gz") ==
        slurp(out2 / "spinal_levels.nii.gz"));
}

TEST_CASE("levels subcommand exits 2 when no level intersects") {
  CliFixture fx;
  LabelMap empty(read_nifti(fx.cord.string()).geom);
  fs::path empty_path = fx.dir / "empty.nii.gz";
  write_nifti(empty, empty_path);
  fs::path out = fresh_temp_dir();
  CHECK(run("levels --rootlets " + q(empty_path) + " --cord " + q(fx.cord) +
            " --pmj " + q(fx.pmj) + " --out " + q(out)) == 2);
}

TEST_CASE("levels subcommand exits 1 on a grid mismatch") {
  CliFixture fx;
  LabelMap other(make_geometry(8, 8, 8));
  other.at(4, 4, 4) = 2;
  fs::path other_path = fx.dir / "other.nii.gz";
  write_nifti(other, other_path);
  fs::path out = fresh_temp_dir();
  CHECK(run("levels --rootlets " + q(other_path) + " --cord " + q(fx.cord) +
            " --pmj " + q(fx.pmj) + " --out " + q(out)) == 1);
}

TEST_CASE("staple subcommand") {
  CliFixture fx;
  SUBCASE("a single rater is a usage error") {
    fs::path out = fresh_temp_dir();
    CHECK(run("staple --raters " + q(fx.rootlets) + " --out " + q(out)) == 1);
  }
  SUBCASE("identical raters fuse to the input") {
    fs::path out = fresh_temp_dir();
    std::string raters;
    for (int i = 0; i < 4; ++i) raters += " " + q(fx.rootlets);
    CHECK(run("staple --raters" + raters + " --out " + q(out)) == 0);
    LabelMap consensus =
        read_nifti((out / "consensus.nii.gz").string()).as_labels();
    LabelMap input = read_nifti(fx.rootlets.string()).as_labels();
    CHECK(consensus.data == input.data);
    CHECK(fs::exists(out / "staple_report.json"));
  }
}

TEST_CASE("metrics subcommand on identical maps reports dice 1") {
  CliFixture fx;
  fs::path out = fresh_temp_dir();
  CHECK(run("metrics --pred " + q(fx.rootlets) + " --truth " +
            q(fx.rootlets) + " --out " + q(out)) == 0);
  std::string report = slurp(out / "metrics.json");
  CHECK(report.find("\"dice_mean\": 1.0") != std::string::npos);
}

TEST_CASE("resample-study subcommand") {
  CliFixture fx;
  fs::path out = fresh_temp_dir();
  CHECK(run("resample-study --rootlets " + q(fx.rootlets) + " --cord " +
            q(fx.cord) + " --pmj " + q(fx.pmj) +
            " --spacings 0.8 1.6 --out " + q(out)) == 0);
  std::string csv = slurp(out / "resample_study.csv");
  CHECK(csv.find("0.800000,0.0000") != std::string::npos);

  fs::path out2 = fresh_temp_dir();
  CHECK(run("resample-study --rootlets " + q(fx.rootlets) + " --cord " +
            q(fx.cord) + " --pmj " + q(fx.pmj) +
            " --spacings 0.8 1.6 --out " + q(out2)) == 0);
  CHECK(slurp(out / "resample_study.json") ==
        slurp(out2 / "resample_study.json"));
}

TEST_CASE("unknown subcommand and missing files exit 1") {
  CHECK(run("nonsense") == 1);
  fs::path out = fresh_temp_dir();
  CHECK(run("levels --rootlets /nonexistent.nii --cord /nonexistent.nii "
            "--pmj /nonexistent.json --out " +
            q(out)) == 1);
}
