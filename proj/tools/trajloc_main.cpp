// tools/trajloc_main.cpp

// Copyright 2026  The trajloc Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "trajloc/errors.hpp"
#include "trajloc/labeling/labeling.hpp"
#include "trajloc/loc/localization.hpp"
#include "trajloc/mobility/dataset.hpp"
#include "trajloc/pipeline/pipeline.hpp"
#include "trajloc/radio/field.hpp"
#include "trajloc/ssl/ssl.hpp"

namespace {

using namespace trajloc;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitTrain = 4;

std::vector<Point2> read_ap_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open ap file: " + path);
  }
  std::vector<Point2> aps;
  double x = 0.0;
  double y = 0.0;
  while (in >> x >> y) {
    aps.push_back({x, y});
  }
  if (aps.empty()) {
    throw ConfigError("ap file has no coordinates: " + path);
  }
  return aps;
}

ArchConfig arch_from_config(const std::string& config_path) {
  ArchConfig arch;
  if (config_path.empty()) {
    return arch;
  }
  const IniConfig ini = IniConfig::parse_file(config_path);
  arch.conv_channels = ini.get_i64("arch", "conv_channels", arch.conv_channels);
  arch.conv_blocks = ini.get_i64("arch", "conv_blocks", arch.conv_blocks);
  arch.kernel = ini.get_i64("arch", "kernel", arch.kernel);
  arch.traj_dim = ini.get_i64("arch", "traj_dim", arch.traj_dim);
  arch.h1_hidden = ini.get_i64("arch", "h1_hidden", arch.h1_hidden);
  arch.f2_hidden = ini.get_i64("arch", "f2_hidden", arch.f2_hidden);
  arch.end_dim = ini.get_i64("arch", "end_dim", arch.end_dim);
  arch.h2_hidden = ini.get_i64("arch", "h2_hidden", arch.h2_hidden);
  arch.loc_hidden = ini.get_i64("arch", "loc_hidden", arch.loc_hidden);
  return arch;
}

StageConfig stage_from_config(const std::string& config_path,
                              const std::string& section) {
  StageConfig cfg;
  cfg.arch = arch_from_config(config_path);
  if (config_path.empty()) {
    return cfg;
  }
  const IniConfig ini = IniConfig::parse_file(config_path);
  cfg.epochs = ini.get_i64(section, "epochs", cfg.epochs);
  cfg.batch_size = ini.get_i64(section, "batch_size", cfg.batch_size);
  cfg.momentum = ini.get_f64(section, "momentum", cfg.momentum);
  cfg.schedule.base_lr = ini.get_f64(section, "base_lr", cfg.schedule.base_lr);
  cfg.schedule.warmup_epochs =
      ini.get_i64(section, "warmup_epochs", cfg.schedule.warmup_epochs);
  cfg.schedule.warmup_start_lr =
      ini.get_f64(section, "warmup_start_lr", cfg.schedule.warmup_start_lr);
  cfg.schedule.initial_decay_epochs = ini.get_i64(
      section, "initial_decay_epochs", cfg.schedule.initial_decay_epochs);
  cfg.schedule.min_decay_lr =
      ini.get_f64(section, "min_decay_lr", cfg.schedule.min_decay_lr);
  cfg.schedule.restart_interval =
      ini.get_i64(section, "restart_interval", cfg.schedule.restart_interval);
  cfg.schedule.restart_lr =
      ini.get_f64(section, "restart_lr", cfg.schedule.restart_lr);
  cfg.augment.additive_alpha =
      ini.get_f64("augment", "additive_alpha", cfg.augment.additive_alpha);
  cfg.augment.scale_beta =
      ini.get_f64("augment", "scale_beta", cfg.augment.scale_beta);
  cfg.augment.mask_len_min = static_cast<std::size_t>(
      ini.get_i64("augment", "mask_len_min",
                  static_cast<std::int64_t>(cfg.augment.mask_len_min)));
  cfg.augment.mask_len_max = static_cast<std::size_t>(
      ini.get_i64("augment", "mask_len_max",
                  static_cast<std::int64_t>(cfg.augment.mask_len_max)));
  cfg.augment.mask_segments = static_cast<std::size_t>(
      ini.get_i64("augment", "mask_segments",
                  static_cast<std::int64_t>(cfg.augment.mask_segments)));
  cfg.augment.entry_prob =
      ini.get_f64("augment", "entry_prob", cfg.augment.entry_prob);
  cfg.augment.op_prob = ini.get_f64("augment", "op_prob", cfg.augment.op_prob);
  if (section == "stage2") {
    cfg.reaugment_long = ini.get_bool(section, "reaugment_long", false);
  }
  return cfg;
}

int dispatch(const std::function<void()>& body) {
  try {
    body();
    return kExitOk;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const TrainError& e) {
    std::cerr << "training error: " << e.what() << '\n';
    return kExitTrain;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

struct FieldGenOpts {
  double width = 30.0, height = 30.0, spacing = 0.5;
  std::size_t aps = 8;
  std::uint64_t seed = 0;
  std::string out, ap_file;
  double pl_d0 = 40.0, d0 = 1.0, n = 4.0, sigma = 1.0, d_f = 30.0,
         tx_power = 20.0;
};

struct TrajGenOpts {
  std::string field, out;
  std::size_t count = 1000, t = 15;
  bool labeled = false, no_paths = false;
  std::uint64_t seed = 0;
  double speed_min = 0.7, speed_max = 1.3, step_period = 1.0,
         levy_alpha = 1.6, flight_min = 1.0;
  double noise_var = 9.0, norm_lo = -100.0, norm_hi = -20.0;
};

struct StripOpts {
  std::string in, out;
};

struct TrainStageOpts {
  std::string data, f1_ckpt, config, out_ckpt, trace;
  std::optional<std::int64_t> epochs, batch_size;
  std::uint64_t seed = 0;
};

struct LabelOpts {
  std::string c, ctilde, f1_ckpt, f2_ckpt, out, report_csv, config;
  double delta = 0.9;
  std::string weighting = "similarity";
};

struct LocTrainOpts {
  std::string train_set, f1_ckpt, f2_ckpt, out_ckpt, config;
  bool finetune = true;
  std::optional<std::int64_t> epochs;
  double width = 0.0, height = 0.0;
  std::uint64_t seed = 0;
};

struct LocEvalOpts {
  std::string ckpt, test, report_csv, config;
};

struct KnnOpts {
  std::string train, test, report_csv;
  std::size_t k = 3;
};

struct NcpOpts {
  std::string train, test, out_ckpt, report_csv, config;
  std::optional<std::int64_t> epochs;
  double width = 0.0, height = 0.0;
  std::uint64_t seed = 0;
};

struct RunOpts {
  std::string config;
  bool force = false;
};

void run_field_gen(const FieldGenOpts& o) {
  PropagationParams params;
  params.pl_d0 = o.pl_d0;
  params.d0 = o.d0;
  params.n = o.n;
  params.sigma = o.sigma;
  params.d_f = o.d_f;
  params.tx_power = o.tx_power;
  ApDeployment deployment;
  if (!o.ap_file.empty()) {
    deployment.positions = read_ap_file(o.ap_file);
    deployment.params = params;
  } else {
    deployment =
        ApDeployment::random(o.aps, o.width, o.height, params, o.seed);
  }
  const RadioField f =
      sample_field(deployment, o.width, o.height, o.spacing, o.seed);
  f.save(o.out);
  std::cout << "field " << f.rows() << "x" << f.cols() << "x" << f.ap_count()
            << " -> " << o.out << '\n';
}

void run_traj_gen(const TrajGenOpts& o) {
  const RadioField f = RadioField::load(o.field);
  DatasetGenConfig cfg;
  cfg.mobility.t = o.t;
  cfg.mobility.speed_min = o.speed_min;
  cfg.mobility.speed_max = o.speed_max;
  cfg.mobility.step_period = o.step_period;
  cfg.mobility.levy_alpha = o.levy_alpha;
  cfg.mobility.flight_min = o.flight_min;
  cfg.features.noise_var = o.noise_var;
  cfg.features.norm_lo = o.norm_lo;
  cfg.features.norm_hi = o.norm_hi;
  cfg.labeled = o.labeled;
  cfg.keep_paths = !o.no_paths;
  const TrajectoryDataset ds = gen_dataset(f, cfg, o.count, o.seed);
  write_dataset(ds, o.out);
  std::cout << "dataset " << ds.size() << " items (m=" << ds.m
            << ", t=" << ds.t << ") -> " << o.out << '\n';
}

void run_train_stage1(const TrainStageOpts& o) {
  StageConfig cfg = stage_from_config(o.config, "stage1");
  if (o.epochs) {
    cfg.epochs = *o.epochs;
  }
  if (o.batch_size) {
    cfg.batch_size = *o.batch_size;
  }
  cfg.seed = o.seed;
  const TrajectoryDataset c = read_dataset(o.data);
  std::vector<EpochStats> trace;
  Stage1Model model = train_stage1(c, cfg, &trace);
  model.save(o.out_ckpt);
  if (!o.trace.empty()) {
    write_trace_csv(o.trace, trace);
  }
  std::cout << "stage1 final loss " << trace.back().mean_loss << " -> "
            << o.out_ckpt << '\n';
}

void run_train_stage2(const TrainStageOpts& o) {
  StageConfig cfg = stage_from_config(o.config, "stage2");
  if (o.epochs) {
    cfg.epochs = *o.epochs;
  }
  if (o.batch_size) {
    cfg.batch_size = *o.batch_size;
  }
  cfg.seed = o.seed;
  const TrajectoryDataset c_long = read_dataset(o.data);
  Stage1Model f1 = Stage1Model::load(o.f1_ckpt, cfg.arch,
                                     static_cast<std::int64_t>(c_long.m));
  std::vector<EpochStats> trace;
  Stage2Model model = train_stage2(c_long, f1, cfg, &trace);
  model.save(o.out_ckpt);
  if (!o.trace.empty()) {
    write_trace_csv(o.trace, trace);
  }
  std::cout << "stage2 final loss " << trace.back().mean_loss << " -> "
            << o.out_ckpt << '\n';
}

void run_label(const LabelOpts& o) {
  const TrajectoryDataset c = read_dataset(o.c);
  const TrajectoryDataset c_tilde = read_dataset(o.ctilde);
  const ArchConfig arch = arch_from_config(o.config);
  const Stage1Model f1 =
      Stage1Model::load(o.f1_ckpt, arch, static_cast<std::int64_t>(c.m));
  const Stage2Model f2 = Stage2Model::load(o.f2_ckpt, arch);
  PseudoLabelConfig cfg;
  cfg.delta = o.delta;
  if (o.weighting == "uniform") {
    cfg.weighting = LabelWeighting::kUniform;
  } else if (o.weighting != "similarity") {
    throw ConfigError("--weighting must be 'similarity' or 'uniform'");
  }
  auto [refined, report] = build_refined(c, c_tilde, f1, f2, cfg);
  write_dataset(refined, o.out);
  if (!o.report_csv.empty()) {
    write_label_report_csv(o.report_csv, report);
  }
  std::cout << "labeled " << report.labeled << "/" << report.total
            << " (drop rate " << report.drop_rate << ")";
  if (report.err_cdf68) {
    std::cout << ", cdf68 " << *report.err_cdf68 << " m, cdf95 "
              << *report.err_cdf95 << " m";
  }
  std::cout << " -> " << o.out << '\n';
}

void run_loc_train(const LocTrainOpts& o) {
  if (o.f1_ckpt.empty() != o.f2_ckpt.empty()) {
    throw ConfigError("--f1-ckpt and --f2-ckpt must be given together");
  }
  const TrajectoryDataset train_set = read_dataset(o.train_set);
  LocConfig cfg;
  cfg.arch = arch_from_config(o.config);
  if (!o.config.empty()) {
    const IniConfig ini = IniConfig::parse_file(o.config);
    cfg.epochs = ini.get_i64("localization", "epochs", cfg.epochs);
    cfg.batch_size = ini.get_i64("localization", "batch_size", cfg.batch_size);
    cfg.lr = ini.get_f64("localization", "lr", cfg.lr);
  }
  if (o.epochs) {
    cfg.epochs = *o.epochs;
  }
  cfg.finetune_encoders = o.finetune;
  cfg.seed = o.seed;
  cfg.field_width = o.width;
  cfg.field_height = o.height;
  const auto ap_count = static_cast<std::int64_t>(train_set.m);
  LocModel model =
      o.f1_ckpt.empty()
          ? LocModel::create(cfg.arch, ap_count, o.seed)
          : LocModel::from_pretrained(cfg.arch, ap_count, o.f1_ckpt,
                                      o.f2_ckpt, o.seed);
  train_loc(model, train_set, cfg);
  model.save(o.out_ckpt);
  std::cout << "localization model -> " << o.out_ckpt << '\n';
}

void run_loc_eval(const LocEvalOpts& o) {
  const TrajectoryDataset test = read_dataset(o.test);
  const LocModel model = LocModel::load(o.ckpt, arch_from_config(o.config),
                                        static_cast<std::int64_t>(test.m));
  const EvalReport report = evaluate(model, test);
  if (!o.report_csv.empty()) {
    write_eval_csv(o.report_csv, test, model.predict_batch(test), report);
  }
  std::cout << "cdf68 " << report.cdf68 << " m, cdf95 " << report.cdf95
            << " m over " << report.count << " items\n";
}

void run_knn(const KnnOpts& o) {
  const TrajectoryDataset train_set = read_dataset(o.train);
  const TrajectoryDataset test = read_dataset(o.test);
  std::vector<Point2> pred;
  const EvalReport report = knn_baseline(train_set, test, o.k, &pred);
  if (!o.report_csv.empty()) {
    write_eval_csv(o.report_csv, test, pred, report);
  }
  std::cout << "knn(k=" << o.k << ") cdf68 " << report.cdf68 << " m, cdf95 "
            << report.cdf95 << " m\n";
}

void run_ncp(const NcpOpts& o) {
  const TrajectoryDataset train_set = read_dataset(o.train);
  const TrajectoryDataset test = read_dataset(o.test);
  LocConfig cfg;
  cfg.arch = arch_from_config(o.config);
  if (o.epochs) {
    cfg.epochs = *o.epochs;
  }
  cfg.seed = o.seed;
  cfg.field_width = o.width;
  cfg.field_height = o.height;
  LocModel model = LocModel::create(
      cfg.arch, static_cast<std::int64_t>(train_set.m), o.seed);
  train_loc(model, train_set, cfg);
  if (!o.out_ckpt.empty()) {
    model.save(o.out_ckpt);
  }
  const EvalReport report = evaluate(model, test);
  if (!o.report_csv.empty()) {
    write_eval_csv(o.report_csv, test, model.predict_batch(test), report);
  }
  std::cout << "ncp cdf68 " << report.cdf68 << " m, cdf95 " << report.cdf95
            << " m\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"trajloc: WiFi trajectory localization pipeline"};
  app.require_subcommand(1);

  std::function<void()> action;

  auto* field = app.add_subcommand("field", "radio field commands");
  field->require_subcommand(1);
  auto field_gen = std::make_shared<FieldGenOpts>();
  {
    auto* gen = field->add_subcommand("gen", "sample a radio field");
    gen->add_option("--width", field_gen->width, "field width (m)");
    gen->add_option("--height", field_gen->height, "field height (m)");
    gen->add_option("--spacing", field_gen->spacing, "grid pitch (m)");
    gen->add_option("--aps", field_gen->aps, "number of random APs");
    gen->add_option("--seed", field_gen->seed, "seed");
    gen->add_option("--out", field_gen->out, "output field file")->required();
    gen->add_option("--ap-file", field_gen->ap_file,
                    "explicit AP coordinates, one 'x y' per line");
    gen->add_option("--pl-d0", field_gen->pl_d0, "path loss at d0 (dB)");
    gen->add_option("--d0", field_gen->d0, "reference distance (m)");
    gen->add_option("--n", field_gen->n, "path-loss exponent");
    gen->add_option("--sigma", field_gen->sigma, "shadowing std dev (dB)");
    gen->add_option("--d-f", field_gen->d_f, "max transmission range (m)");
    gen->add_option("--tx-power", field_gen->tx_power, "transmit power (dBm)");
    gen->callback([field_gen, &action] {
      action = [field_gen] { run_field_gen(*field_gen); };
    });
  }

  auto* traj = app.add_subcommand("traj", "trajectory dataset commands");
  traj->require_subcommand(1);
  auto traj_gen = std::make_shared<TrajGenOpts>();
  auto strip = std::make_shared<StripOpts>();
  {
    auto* gen = traj->add_subcommand("gen", "generate a trajectory dataset");
    gen->add_option("--field", traj_gen->field, "field file")->required();
    gen->add_option("--count", traj_gen->count, "number of trajectories")
        ->required();
    gen->add_flag("--labeled", traj_gen->labeled, "attach endpoint labels");
    gen->add_option("--seed", traj_gen->seed, "seed");
    gen->add_option("--out", traj_gen->out, "output dataset file")->required();
    gen->add_option("--t", traj_gen->t, "points per trajectory");
    gen->add_flag("--no-paths", traj_gen->no_paths,
                  "drop ground-truth paths from the file");
    gen->add_option("--speed-min", traj_gen->speed_min, "speed min (m/s)");
    gen->add_option("--speed-max", traj_gen->speed_max, "speed max (m/s)");
    gen->add_option("--step-period", traj_gen->step_period, "step period (s)");
    gen->add_option("--levy-alpha", traj_gen->levy_alpha, "flight exponent");
    gen->add_option("--flight-min", traj_gen->flight_min, "min flight (m)");
    gen->add_option("--noise-var", traj_gen->noise_var, "noise variance");
    gen->add_option("--norm-lo", traj_gen->norm_lo, "norm floor (dBm)");
    gen->add_option("--norm-hi", traj_gen->norm_hi, "norm ceiling (dBm)");
    gen->callback([traj_gen, &action] {
      action = [traj_gen] { run_traj_gen(*traj_gen); };
    });

    auto* sl = traj->add_subcommand("strip-labels", "remove dataset labels");
    sl->add_option("--in", strip->in, "input dataset")->required();
    sl->add_option("--out", strip->out, "output dataset")->required();
    sl->callback([strip, &action] {
      action = [strip] {
        write_dataset(strip_labels(read_dataset(strip->in)), strip->out);
        std::cout << "stripped labels -> " << strip->out << '\n';
      };
    });
  }

  auto* train = app.add_subcommand("train", "self-supervised training");
  train->require_subcommand(1);
  auto s1_opts = std::make_shared<TrainStageOpts>();
  auto s2_opts = std::make_shared<TrainStageOpts>();
  {
    auto* s1 = train->add_subcommand("stage1", "trajectory embedding (F1, h1)");
    s1->add_option("--data", s1_opts->data, "unlabeled dataset C")->required();
    s1->add_option("--config", s1_opts->config, "INI config");
    s1->add_option("--out-ckpt", s1_opts->out_ckpt, "checkpoint")->required();
    s1->add_option("--trace", s1_opts->trace, "loss trace CSV");
    s1->add_option("--epochs", s1_opts->epochs, "override epochs");
    s1->add_option("--batch-size", s1_opts->batch_size, "override batch size");
    s1->add_option("--seed", s1_opts->seed, "seed");
    s1->callback([s1_opts, &action] {
      action = [s1_opts] { run_train_stage1(*s1_opts); };
    });

    auto* s2 = train->add_subcommand("stage2", "endpoint embedding (F2, h2)");
    s2->add_option("--data-long", s2_opts->data,
                   "length-(2t-1) dataset for cut-and-flip")
        ->required();
    s2->add_option("--f1-ckpt", s2_opts->f1_ckpt, "stage-1 checkpoint")
        ->required();
    s2->add_option("--config", s2_opts->config, "INI config");
    s2->add_option("--out-ckpt", s2_opts->out_ckpt, "checkpoint")->required();
    s2->add_option("--trace", s2_opts->trace, "loss trace CSV");
    s2->add_option("--epochs", s2_opts->epochs, "override epochs");
    s2->add_option("--batch-size", s2_opts->batch_size, "override batch size");
    s2->add_option("--seed", s2_opts->seed, "seed");
    s2->callback([s2_opts, &action] {
      action = [s2_opts] { run_train_stage2(*s2_opts); };
    });
  }

  auto label_opts = std::make_shared<LabelOpts>();
  {
    auto* label = app.add_subcommand("label", "pseudo-label C against C-tilde");
    label->add_option("--c", label_opts->c, "unlabeled dataset C")->required();
    label->add_option("--ctilde", label_opts->ctilde, "labeled C-tilde")
        ->required();
    label->add_option("--f1-ckpt", label_opts->f1_ckpt, "stage-1 checkpoint")
        ->required();
    label->add_option("--f2-ckpt", label_opts->f2_ckpt, "stage-2 checkpoint")
        ->required();
    label->add_option("--delta", label_opts->delta, "similarity threshold")
        ->required();
    label->add_option("--out", label_opts->out, "output C'")->required();
    label->add_option("--report-csv", label_opts->report_csv, "report CSV");
    label->add_option("--config", label_opts->config, "INI config");
    label->add_option("--weighting", label_opts->weighting,
                      "'similarity' or 'uniform'");
    label->callback([label_opts, &action] {
      action = [label_opts] { run_label(*label_opts); };
    });
  }

  auto* loc = app.add_subcommand("loc", "localization model commands");
  loc->require_subcommand(1);
  auto lt_opts = std::make_shared<LocTrainOpts>();
  auto le_opts = std::make_shared<LocEvalOpts>();
  {
    auto* lt = loc->add_subcommand("train", "train the localization model");
    lt->add_option("--train", lt_opts->train_set, "labeled training set")
        ->required();
    lt->add_option("--f1-ckpt", lt_opts->f1_ckpt, "stage-1 checkpoint");
    lt->add_option("--f2-ckpt", lt_opts->f2_ckpt, "stage-2 checkpoint");
    lt->add_flag("--finetune,!--no-finetune", lt_opts->finetune,
                 "fine-tune encoders (default on)");
    lt->add_option("--out-ckpt", lt_opts->out_ckpt, "checkpoint")->required();
    lt->add_option("--config", lt_opts->config, "INI config");
    lt->add_option("--epochs", lt_opts->epochs, "override epochs");
    lt->add_option("--field-width", lt_opts->width, "clamp bound (m)");
    lt->add_option("--field-height", lt_opts->height, "clamp bound (m)");
    lt->add_option("--seed", lt_opts->seed, "seed");
    lt->callback([lt_opts, &action] {
      action = [lt_opts] { run_loc_train(*lt_opts); };
    });

    auto* le = loc->add_subcommand("eval", "evaluate a localization model");
    le->add_option("--ckpt", le_opts->ckpt, "model checkpoint")->required();
    le->add_option("--test", le_opts->test, "labeled test set")->required();
    le->add_option("--report-csv", le_opts->report_csv, "report CSV");
    le->add_option("--config", le_opts->config, "INI config");
    le->callback([le_opts, &action] {
      action = [le_opts] { run_loc_eval(*le_opts); };
    });
  }

  auto* baseline = app.add_subcommand("baseline", "reference baselines");
  baseline->require_subcommand(1);
  auto knn_opts = std::make_shared<KnnOpts>();
  auto ncp_opts = std::make_shared<NcpOpts>();
  {
    auto* knn = baseline->add_subcommand("knn", "k-nearest-neighbor baseline");
    knn->add_option("--train", knn_opts->train, "labeled training set")
        ->required();
    knn->add_option("--test", knn_opts->test, "labeled test set")->required();
    knn->add_option("--k", knn_opts->k, "neighbor count");
    knn->add_option("--report-csv", knn_opts->report_csv, "report CSV");
    knn->callback([knn_opts, &action] {
      action = [knn_opts] { run_knn(*knn_opts); };
    });

    auto* ncp = baseline->add_subcommand(
        "ncp", "no-crowdsourcing/no-pretraining baseline");
    ncp->add_option("--train", ncp_opts->train, "labeled training set")
        ->required();
    ncp->add_option("--test", ncp_opts->test, "labeled test set")->required();
    ncp->add_option("--out-ckpt", ncp_opts->out_ckpt, "checkpoint");
    ncp->add_option("--report-csv", ncp_opts->report_csv, "report CSV");
    ncp->add_option("--config", ncp_opts->config, "INI config");
    ncp->add_option("--epochs", ncp_opts->epochs, "override epochs");
    ncp->add_option("--field-width", ncp_opts->width, "clamp bound (m)");
    ncp->add_option("--field-height", ncp_opts->height, "clamp bound (m)");
    ncp->add_option("--seed", ncp_opts->seed, "seed");
    ncp->callback([ncp_opts, &action] {
      action = [ncp_opts] { run_ncp(*ncp_opts); };
    });
  }

  auto run_opts = std::make_shared<RunOpts>();
  auto report_dir = std::make_shared<std::string>();
  {
    auto* run = app.add_subcommand("run", "run the full pipeline");
    run->add_option("--config", run_opts->config, "pipeline INI config")
        ->required();
    run->add_flag("--force", run_opts->force, "re-run all stages");
    run->callback([run_opts, &action] {
      action = [run_opts] {
        const PipelineConfig cfg = PipelineConfig::from_file(run_opts->config);
        const PipelineResult result = run_pipeline(cfg, run_opts->force);
        std::cout << "pipeline complete, manifest: " << result.manifest_path
                  << '\n';
      };
    });

    auto* report = app.add_subcommand("report", "summarize an artifact dir");
    report->add_option("dir", *report_dir, "artifact directory")->required();
    report->callback([report_dir, &action] {
      action = [report_dir] {
        const int warnings = write_report(*report_dir);
        std::cout << "report written to " << *report_dir << "/summary.csv";
        if (warnings > 0) {
          std::cout << " (" << warnings << " warnings)";
        }
        std::cout << '\n';
      };
    });
  }

  CLI11_PARSE(app, argc, argv);
  return dispatch(action);
}
