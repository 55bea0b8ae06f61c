// Copyright (c) 2026 the rootlet-levels authors
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy
// of the License at http://www.apache.org/licenses/LICENSE-2.0

// rootlet-levels: batch CLI over the spinal-level pipeline. Subcommands:
//   levels          rootlets + cord + PMJ -> spinal level map and reports
//   staple          N rater masks -> consensus labelmap + performance report
//   metrics         prediction vs truth Dice (+ optional inter-rater COV)
//   resample-study  level pipeline across isotropic resolutions, MAE report
//   phantom         synthetic volume with analytic truth
//
// Exit codes: 0 success, 1 error, 2 degenerate-but-handled input.

#include <zlib.h>

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "rootlets/consensus.hpp"
#include "rootlets/geometry.hpp"
#include "rootlets/kernels.hpp"
#include "rootlets/levels.hpp"
#include "rootlets/metrics.hpp"
#include "rootlets/nifti.hpp"
#include "rootlets/phantom.hpp"
#include "rootlets/preprocess.hpp"
#include "rootlets/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace rootlets;

namespace {

std::string crc32_of_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw IoError("cannot open " + p.string());
  uLong crc = crc32(0L, Z_NULL, 0);
  char buf[65536];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0)
    crc = crc32(crc, reinterpret_cast<const Bytef*>(buf),
                static_cast<uInt>(in.gcount()));
  char hex[16];
  std::snprintf(hex, sizeof(hex), "%08lx", static_cast<unsigned long>(crc));
  return hex;
}

void write_text(const fs::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw IoError("cannot write " + p.string());
  out << content;
}

void write_json(const fs::path& p, const json& j) {
  write_text(p, j.dump(2) + "\n");
}

struct SharedOptions {
  int dilate_radius = 3;
  std::string dilate_unit = "vox";
  std::string dilate_shape = "ball";
  int smooth_window = 15;
  std::string cov = "sample";
  std::string out_dir;
  std::string format = "both";

  void attach(CLI::App* cmd, bool with_dilate = true) {
    cmd->add_option("--out", out_dir, "output directory")->required();
    cmd->add_option("--format", format, "csv, json, or both")
        ->check(CLI::IsMember({"csv", "json", "both"}));
    if (with_dilate) {
      cmd->add_option("--dilate-radius", dilate_radius,
                      "cord dilation radius");
      cmd->add_option("--dilate-unit", dilate_unit, "radius unit")
          ->check(CLI::IsMember({"vox", "mm"}));
      cmd->add_option("--dilate-shape", dilate_shape, "element shape")
          ->check(CLI::IsMember({"ball", "cube", "cross"}));
      cmd->add_option("--smooth-window", smooth_window,
                      "centerline smoothing window (odd)");
    }
  }

  StructuringElement element(const Eigen::Vector3d& spacing) const {
    StructuringElement e;
    e.shape = dilate_shape == "cube"
                  ? ElementShape::kCube
                  : dilate_shape == "cross" ? ElementShape::kCross
                                            : ElementShape::kBall;
    if (dilate_unit == "mm") {
      double mean_sp = spacing.mean();
      e.radius = std::max(
          1, static_cast<int>(std::lround(dilate_radius / mean_sp)));
    } else {
      e.radius = dilate_radius;
    }
    return e;
  }

  json config_json() const {
    return json{{"dilate_radius", dilate_radius},
                {"dilate_unit", dilate_unit},
                {"dilate_shape", dilate_shape},
                {"smooth_window", smooth_window},
                {"cov", cov},
                {"format", format}};
  }
};

void write_manifest(const fs::path& out_dir, const std::string& command,
                    const json& config,
                    const std::vector<std::string>& inputs) {
  json manifest;
  manifest["tool"] = "rootlet-levels";
  manifest["version"] = kVersion;
  manifest["command"] = command;
  manifest["config"] = config;
  json sums = json::object();
  for (const auto& p : inputs) sums[p] = crc32_of_file(p);
  manifest["inputs"] = sums;
  const char* threads = std::getenv("ROOTLET_LEVELS_THREADS");
  manifest["threads_cap"] = threads ? threads : "";
  manifest["simd"] = kernels::ops().name;
  write_json(out_dir / "manifest.json", manifest);
}

PmjPoint load_pmj(const fs::path& p) {
  if (p.extension() == ".json") {
    std::ifstream in(p);
    if (!in) throw IoError("cannot open " + p.string());
    json j = json::parse(in);
    auto v = j.at("pmj_mm");
    return PmjPoint{{v.at(0).get<double>(), v.at(1).get<double>(),
                     v.at(2).get<double>()}};
  }
  // single labelled voxel in a NIfTI mask; centroid if several
  LabelMap m = read_nifti(p).as_labels();
  const auto& d = m.geom.dims;
  Eigen::Vector3d sum = Eigen::Vector3d::Zero();
  std::size_t count = 0;
  for (std::size_t k = 0; k < d[2]; ++k)
    for (std::size_t j = 0; j < d[1]; ++j)
      for (std::size_t i = 0; i < d[0]; ++i)
        if (m.at(i, j, k)) {
          sum += Eigen::Vector3d(static_cast<double>(i),
                                 static_cast<double>(j),
                                 static_cast<double>(k));
          ++count;
        }
  if (count == 0)
    throw DegenerateInputError("PMJ mask contains no labelled voxel");
  return PmjPoint{m.geom.voxel_to_mm(sum / static_cast<double>(count))};
}

json extents_json(const std::vector<LevelExtent>& extents) {
  json arr = json::array();
  for (const auto& e : extents) {
    json row;
    row["level"] = e.level;
    row["empty"] = e.empty;
    if (!e.empty) {
      row["rostral_slice"] = e.rostral_slice;
      row["caudal_slice"] = e.caudal_slice;
      row["mid_slice"] = e.mid_slice;
      row["pmj_rostral_mm"] = e.pmj_rostral_mm;
      row["pmj_mid_mm"] = e.pmj_mid_mm;
      row["pmj_caudal_mm"] = e.pmj_caudal_mm;
      row["length_mm"] = e.length_mm;
      row["clipped_at_volume_edge"] = e.clipped_at_volume_edge;
    }
    arr.push_back(row);
  }
  return arr;
}

// ---------------------------------------------------------------------------

int cmd_levels(const std::string& rootlets_path, const std::string& cord_path,
               const std::string& pmj_path, const SharedOptions& opts) {
  fs::create_directories(opts.out_dir);
  const fs::path out(opts.out_dir);

  LabelMap rootlets = read_nifti(rootlets_path).as_labels();
  LabelMap cord = read_nifti(cord_path).as_labels();
  PmjPoint pmj = load_pmj(pmj_path);
  if (!rootlets.geom.same_grid(cord.geom))
    throw ContractError("rootlets and cord grids do not match");

  const StructuringElement elem = opts.element(rootlets.geom.spacing());
  Centerline cl = extract_centerline(cord, opts.smooth_window);
  auto intersections = intersect_rootlets_cord(rootlets, cord, elem);
  std::vector<LevelExtent> extents = level_extents(intersections, cl, pmj);

  std::vector<std::string> flags;
  bool any_level = false;
  for (const auto& e : extents) {
    if (e.empty)
      flags.push_back("level " + std::to_string(e.level) +
                      ": empty intersection");
    else
      any_level = true;
    if (e.clipped_at_volume_edge)
      flags.push_back("level " + std::to_string(e.level) +
                      ": clipped at volume edge");
  }

  json report;
  report["extents"] = extents_json(extents);
  report["flags"] = flags;

  if (opts.format != "csv") write_json(out / "levels_report.json", report);
  if (opts.format != "json") {
    write_text(out / "level_extents.csv", level_extents_csv(extents));
    write_text(out / "centerline.csv", centerline_csv(cl));
  }
  write_manifest(out, "levels", opts.config_json(),
                 {rootlets_path, cord_path, pmj_path});

  if (!any_level) {
    std::fprintf(stderr, "no rootlet class intersects the dilated cord\n");
    return 2;
  }

  SpinalLevelMap levels = project_levels(extents, cord);
  write_nifti(levels.flattened, out / "spinal_levels.nii.gz");
  return 0;
}

int cmd_staple(const std::vector<std::string>& rater_paths, double tol,
               int max_iter, const SharedOptions& opts) {
  fs::create_directories(opts.out_dir);
  const fs::path out(opts.out_dir);

  RaterSet raters;
  for (const auto& p : rater_paths) {
    raters.maps.push_back(read_nifti(p).as_labels());
    raters.names.push_back(fs::path(p).filename().string());
  }

  StapleOptions sopts;
  sopts.tol = tol;
  sopts.max_iter = max_iter;
  MulticlassStapleResult res = staple_multiclass(raters, sopts);

  json report;
  report["raters"] = raters.names;
  json per_class = json::object();
  for (const auto& [cls, r] : res.per_class) {
    json jr;
    for (std::size_t j = 0; j < raters.names.size(); ++j) {
      jr[raters.names[j]] = {{"sensitivity", r.sensitivity[j]},
                             {"specificity", r.specificity[j]}};
    }
    jr["iterations"] = r.iterations;
    jr["converged"] = r.converged;
    per_class[std::to_string(cls)] = jr;
  }
  report["classes"] = per_class;
  report["warnings"] = res.warnings;

  write_json(out / "staple_report.json", report);
  write_nifti(res.consensus, out / "consensus.nii.gz");

  json config = opts.config_json();
  config["tol"] = tol;
  config["max_iter"] = max_iter;
  write_manifest(out, "staple", config, rater_paths);
  return 0;
}

int cmd_metrics(const std::string& pred_path, const std::string& truth_path,
                const std::vector<std::string>& extents_paths,
                const SharedOptions& opts) {
  fs::create_directories(opts.out_dir);
  const fs::path out(opts.out_dir);

  LabelMap pred = read_nifti(pred_path).as_labels();
  LabelMap truth = read_nifti(truth_path).as_labels();
  MulticlassDice d = dice_multiclass(pred, truth);

  std::vector<std::string> flags;
  json dice_map = json::object();
  for (const auto& [cls, r] : d.per_class) {
    dice_map[std::to_string(cls)] = r.value;
    if (r.both_empty)
      flags.push_back("class " + std::to_string(cls) +
                      ": empty in both volumes, Dice defined as 1.0");
  }
  for (int cls : d.absent_classes)
    flags.push_back("class " + std::to_string(cls) +
                    ": absent from truth, excluded");

  // optional inter-rater COV across level_extents.csv files (pmj_mid column)
  json cov_map = json::object();
  if (extents_paths.size() >= 2) {
    std::map<int, std::vector<double>> mids;
    for (const auto& p : extents_paths) {
      std::ifstream in(p);
      if (!in) throw IoError("cannot open " + p);
      std::string line;
      std::getline(in, line);  // header
      while (std::getline(in, line)) {
        std::stringstream ss(line);
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (cells.size() < 6 || cells[5].empty()) continue;
        mids[std::stoi(cells[0])].push_back(std::stod(cells[5]));
      }
    }
    CovConvention conv = opts.cov == "population" ? CovConvention::kPopulation
                                                  : CovConvention::kSample;
    for (const auto& [level, values] : mids) {
      if (values.size() == extents_paths.size())
        cov_map[std::to_string(level)] = cov_percent(values, conv);
      else
        flags.push_back("level " + std::to_string(level) +
                        ": missing from some raters, COV skipped");
    }
  }

  json report;
  report["dice"] = dice_map;
  report["dice_mean"] = d.mean;
  report["dice_sd"] = d.sd;
  report["cov"] = cov_map;
  report["mae"] = json::object();
  report["flags"] = flags;
  if (opts.format != "csv") write_json(out / "metrics.json", report);
  if (opts.format != "json") {
    std::string csv = "metric,key,value\n";
    char buf[128];
    for (const auto& [cls, r] : d.per_class) {
      std::snprintf(buf, sizeof(buf), "dice,%d,%.6f\n", cls, r.value);
      csv += buf;
    }
    std::snprintf(buf, sizeof(buf), "dice_mean,,%.6f\ndice_sd,,%.6f\n",
                  d.mean, d.sd);
    csv += buf;
    for (const auto& [level, value] : cov_map.items()) {
      std::snprintf(buf, sizeof(buf), "cov,%s,%.6f\n", level.c_str(),
                    value.get<double>());
      csv += buf;
    }
    write_text(out / "metrics.csv", csv);
  }

  std::vector<std::string> inputs = {pred_path, truth_path};
  inputs.insert(inputs.end(), extents_paths.begin(), extents_paths.end());
  write_manifest(out, "metrics", opts.config_json(), inputs);
  return 0;
}

int cmd_resample_study(const std::string& rootlets_path,
                       const std::string& cord_path,
                       const std::string& pmj_path,
                       std::vector<double> spacings,
                       const SharedOptions& opts) {
  fs::create_directories(opts.out_dir);
  const fs::path out(opts.out_dir);

  PhantomBundle bundle;  // reuse the study driver on file inputs
  bundle.rootlets = read_nifti(rootlets_path).as_labels();
  bundle.cord = read_nifti(cord_path).as_labels();
  bundle.pmj = load_pmj(pmj_path);
  if (!bundle.rootlets.geom.same_grid(bundle.cord.geom))
    throw ContractError("rootlets and cord grids do not match");
  bundle.image = ScalarVolume(bundle.cord.geom);

  const StructuringElement elem = opts.element(bundle.cord.geom.spacing());
  auto study =
      perturb_resample_study(bundle, spacings, elem, opts.smooth_window);

  json mae = json::object();
  json entries = json::array();
  for (const auto& e : study) {
    char key[32];
    std::snprintf(key, sizeof(key), "%.1f", e.spacing_mm);
    mae[key] = e.mae_mm;
    json je;
    je["spacing_mm"] = e.spacing_mm;
    je["mae_mm"] = e.mae_mm;
    je["dropped_levels"] = e.dropped_levels;
    json mids = json::object();
    for (const auto& [level, mm] : e.pmj_mid_mm)
      mids[std::to_string(level)] = mm;
    je["pmj_mid_mm"] = mids;
    entries.push_back(je);
  }
  json report;
  report["mae"] = mae;
  report["entries"] = entries;
  if (opts.format != "csv") write_json(out / "resample_study.json", report);
  if (opts.format != "json") {
    std::string csv = "spacing_mm,mae_mm\n";
    char buf[64];
    for (const auto& e : study) {
      std::snprintf(buf, sizeof(buf), "%.6f,%.6f\n", e.spacing_mm, e.mae_mm);
      csv += buf;
    }
    write_text(out / "resample_study.csv", csv);
  }

  json config = opts.config_json();
  config["spacings"] = spacings;
  write_manifest(out, "resample-study", config,
                 {rootlets_path, cord_path, pmj_path});
  return 0;
}

int cmd_phantom(const PhantomSpec& spec, const SharedOptions& opts) {
  fs::create_directories(opts.out_dir);
  const fs::path out(opts.out_dir);

  PhantomBundle bundle = generate_phantom(spec);
  write_nifti(bundle.image, out / "phantom_image.nii.gz");
  write_nifti(bundle.cord, out / "phantom_cord.nii.gz");
  write_nifti(bundle.rootlets, out / "phantom_rootlets.nii.gz");
  write_json(out / "phantom_pmj.json",
             json{{"pmj_mm",
                   {bundle.pmj.mm[0], bundle.pmj.mm[1], bundle.pmj.mm[2]}}});

  json truth;
  truth["rng"] = "mt19937_64 + std::normal_distribution<float>";
  truth["seed"] = spec.seed;
  truth["extents"] = extents_json(bundle.truth);
  write_json(out / "phantom_truth.json", truth);

  json config = opts.config_json();
  config["dims"] = spec.dims;
  config["spacing_mm"] = spec.spacing_mm;
  config["cord_radius_mm"] = spec.cord_radius_mm;
  config["noise_sd"] = spec.noise_sd;
  config["seed"] = spec.seed;
  config["curve"] = spec.curve == CurveMode::kStraight
                        ? "straight"
                        : spec.curve == CurveMode::kBowed ? "bowed" : "helical";
  write_manifest(out, "phantom", config, {});
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spinal nerve rootlet post-processing toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  SharedOptions levels_opts, staple_opts, metrics_opts, study_opts,
      phantom_opts;

  std::string rootlets_path, cord_path, pmj_path;
  auto* levels = app.add_subcommand("levels", "estimate spinal levels");
  levels->add_option("--rootlets", rootlets_path)->required();
  levels->add_option("--cord", cord_path)->required();
  levels->add_option("--pmj", pmj_path)->required();
  levels_opts.attach(levels);

  std::vector<std::string> rater_paths;
  double staple_tol = 1e-6;
  int staple_max_iter = 100;
  auto* staple = app.add_subcommand("staple", "STAPLE consensus fusion");
  staple->add_option("--raters", rater_paths)->required()->expected(2, 32);
  staple->add_option("--tol", staple_tol);
  staple->add_option("--max-iter", staple_max_iter);
  staple_opts.attach(staple, false);

  std::string pred_path, truth_path;
  std::vector<std::string> extents_paths;
  auto* metrics = app.add_subcommand("metrics", "Dice / COV evaluation");
  metrics->add_option("--pred", pred_path)->required();
  metrics->add_option("--truth", truth_path)->required();
  metrics->add_option("--extents", extents_paths,
                      "level_extents.csv files for inter-rater COV");
  metrics->add_option("--cov", metrics_opts.cov)
      ->check(CLI::IsMember({"sample", "population"}));
  metrics_opts.attach(metrics, false);

  std::string st_rootlets, st_cord, st_pmj;
  std::vector<double> spacings = {0.6, 0.8, 1.0, 1.2, 1.4, 1.6};
  auto* study = app.add_subcommand("resample-study",
                                   "level pipeline across resolutions");
  study->add_option("--rootlets", st_rootlets)->required();
  study->add_option("--cord", st_cord)->required();
  study->add_option("--pmj", st_pmj)->required();
  study->add_option("--spacings", spacings);
  study_opts.attach(study);

  PhantomSpec spec = default_phantom_spec();
  std::vector<std::size_t> dims_opt;
  std::string curve = "straight";
  auto* phantom = app.add_subcommand("phantom", "generate synthetic volume");
  phantom->add_option("--dims", dims_opt)->expected(3);
  phantom->add_option("--spacing", spec.spacing_mm);
  phantom->add_option("--cord-radius", spec.cord_radius_mm);
  phantom->add_option("--curve", curve)
      ->check(CLI::IsMember({"straight", "bowed", "helical"}));
  phantom->add_option("--bow-amplitude", spec.bow_amplitude_mm);
  phantom->add_option("--noise-sd", spec.noise_sd);
  phantom->add_option("--seed", spec.seed);
  phantom_opts.attach(phantom, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*levels)
      return cmd_levels(rootlets_path, cord_path, pmj_path, levels_opts);
    if (*staple)
      return cmd_staple(rater_paths, staple_tol, staple_max_iter,
                        staple_opts);
    if (*metrics)
      return cmd_metrics(pred_path, truth_path, extents_paths, metrics_opts);
    if (*study)
      return cmd_resample_study(st_rootlets, st_cord, st_pmj, spacings,
                                study_opts);
    if (*phantom) {
      if (dims_opt.size() == 3) spec.dims = {dims_opt[0], dims_opt[1],
                                             dims_opt[2]};
      if (curve == "bowed") spec.curve = CurveMode::kBowed;
      if (curve == "helical") spec.curve = CurveMode::kHelical;
      return cmd_phantom(spec, phantom_opts);
    }
  } catch (const DegenerateInputError& e) {
    std::fprintf(stderr, "degenerate input: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}
