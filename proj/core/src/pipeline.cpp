// core/src/pipeline.cpp

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

#include "trajloc/pipeline/pipeline.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "trajloc/binio.hpp"
#include "trajloc/errors.hpp"

namespace trajloc {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::map<std::string, std::set<std::string>>& config_schema() {
  static const std::map<std::string, std::set<std::string>> schema = {
      {"field",
       {"width", "height", "spacing", "aps", "ap_file", "pl_d0", "d0", "n",
        "sigma", "d_f", "tx_power"}},
      {"mobility",
       {"t", "speed_min", "speed_max", "step_period", "levy_alpha",
        "flight_min", "noise_var", "norm_lo", "norm_hi", "count_c",
        "count_long", "count_labeled", "count_test"}},
      {"augment",
       {"additive_alpha", "scale_beta", "mask_len_min", "mask_len_max",
        "mask_segments", "entry_prob", "op_prob"}},
      {"arch",
       {"conv_channels", "conv_blocks", "kernel", "traj_dim", "h1_hidden",
        "f2_hidden", "end_dim", "h2_hidden", "loc_hidden"}},
      {"stage1",
       {"epochs", "batch_size", "momentum", "base_lr", "warmup_epochs",
        "warmup_start_lr", "initial_decay_epochs", "min_decay_lr",
        "restart_interval", "restart_lr"}},
      {"stage2",
       {"epochs", "batch_size", "momentum", "base_lr", "warmup_epochs",
        "warmup_start_lr", "initial_decay_epochs", "min_decay_lr",
        "restart_interval", "restart_lr", "reaugment_long"}},
      {"labeling", {"delta", "weighting", "weight_floor"}},
      {"localization",
       {"epochs", "batch_size", "lr", "finetune", "knn_k"}},
      {"seeds", {"master"}},
      {"output", {"dir"}},
  };
  return schema;
}

LrSchedule schedule_from(const IniConfig& ini, const std::string& section) {
  LrSchedule s;
  s.base_lr = ini.get_f64(section, "base_lr", s.base_lr);
  s.warmup_epochs = ini.get_i64(section, "warmup_epochs", s.warmup_epochs);
  s.warmup_start_lr =
      ini.get_f64(section, "warmup_start_lr", s.warmup_start_lr);
  s.initial_decay_epochs =
      ini.get_i64(section, "initial_decay_epochs", s.initial_decay_epochs);
  s.min_decay_lr = ini.get_f64(section, "min_decay_lr", s.min_decay_lr);
  s.restart_interval =
      ini.get_i64(section, "restart_interval", s.restart_interval);
  s.restart_lr = ini.get_f64(section, "restart_lr", s.restart_lr);
  return s;
}

}  // namespace

PipelineConfig PipelineConfig::from_ini(const IniConfig& ini) {
  ini.require_known(config_schema());

  PipelineConfig cfg;
  cfg.raw_text = ini.text();

  cfg.width = ini.get_f64("field", "width", cfg.width);
  cfg.height = ini.get_f64("field", "height", cfg.height);
  cfg.spacing = ini.get_f64("field", "spacing", cfg.spacing);
  cfg.aps = static_cast<std::size_t>(ini.get_i64("field", "aps",
                                                 static_cast<std::int64_t>(cfg.aps)));
  cfg.ap_file = ini.get_str("field", "ap_file", "");
  cfg.propagation.pl_d0 = ini.get_f64("field", "pl_d0", cfg.propagation.pl_d0);
  cfg.propagation.d0 = ini.get_f64("field", "d0", cfg.propagation.d0);
  cfg.propagation.n = ini.get_f64("field", "n", cfg.propagation.n);
  cfg.propagation.sigma = ini.get_f64("field", "sigma", cfg.propagation.sigma);
  cfg.propagation.d_f = ini.get_f64("field", "d_f", cfg.propagation.d_f);
  cfg.propagation.tx_power =
      ini.get_f64("field", "tx_power", cfg.propagation.tx_power);

  cfg.mobility.t = static_cast<std::size_t>(
      ini.get_i64("mobility", "t", static_cast<std::int64_t>(cfg.mobility.t)));
  cfg.mobility.speed_min =
      ini.get_f64("mobility", "speed_min", cfg.mobility.speed_min);
  cfg.mobility.speed_max =
      ini.get_f64("mobility", "speed_max", cfg.mobility.speed_max);
  cfg.mobility.step_period =
      ini.get_f64("mobility", "step_period", cfg.mobility.step_period);
  cfg.mobility.levy_alpha =
      ini.get_f64("mobility", "levy_alpha", cfg.mobility.levy_alpha);
  cfg.mobility.flight_min =
      ini.get_f64("mobility", "flight_min", cfg.mobility.flight_min);
  cfg.features.noise_var =
      ini.get_f64("mobility", "noise_var", cfg.features.noise_var);
  cfg.features.norm_lo =
      ini.get_f64("mobility", "norm_lo", cfg.features.norm_lo);
  cfg.features.norm_hi =
      ini.get_f64("mobility", "norm_hi", cfg.features.norm_hi);
  cfg.count_c = static_cast<std::size_t>(ini.get_i64(
      "mobility", "count_c", static_cast<std::int64_t>(cfg.count_c)));
  cfg.count_long = static_cast<std::size_t>(ini.get_i64(
      "mobility", "count_long", static_cast<std::int64_t>(cfg.count_long)));
  cfg.count_labeled = static_cast<std::size_t>(
      ini.get_i64("mobility", "count_labeled",
                  static_cast<std::int64_t>(cfg.count_labeled)));
  cfg.count_test = static_cast<std::size_t>(ini.get_i64(
      "mobility", "count_test", static_cast<std::int64_t>(cfg.count_test)));

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

  cfg.arch.conv_channels =
      ini.get_i64("arch", "conv_channels", cfg.arch.conv_channels);
  cfg.arch.conv_blocks =
      ini.get_i64("arch", "conv_blocks", cfg.arch.conv_blocks);
  cfg.arch.kernel = ini.get_i64("arch", "kernel", cfg.arch.kernel);
  cfg.arch.traj_dim = ini.get_i64("arch", "traj_dim", cfg.arch.traj_dim);
  cfg.arch.h1_hidden = ini.get_i64("arch", "h1_hidden", cfg.arch.h1_hidden);
  cfg.arch.f2_hidden = ini.get_i64("arch", "f2_hidden", cfg.arch.f2_hidden);
  cfg.arch.end_dim = ini.get_i64("arch", "end_dim", cfg.arch.end_dim);
  cfg.arch.h2_hidden = ini.get_i64("arch", "h2_hidden", cfg.arch.h2_hidden);
  cfg.arch.loc_hidden = ini.get_i64("arch", "loc_hidden", cfg.arch.loc_hidden);

  const auto stage_from = [&](const std::string& section) {
    StageConfig s;
    s.epochs = ini.get_i64(section, "epochs", 100);
    s.batch_size = ini.get_i64(section, "batch_size", 256);
    s.momentum = ini.get_f64(section, "momentum", 0.9);
    s.schedule = schedule_from(ini, section);
    s.augment = cfg.augment;
    s.arch = cfg.arch;
    return s;
  };
  cfg.stage1 = stage_from("stage1");
  cfg.stage2 = stage_from("stage2");
  cfg.stage2.reaugment_long = ini.get_bool("stage2", "reaugment_long", false);

  cfg.labeling.delta = ini.get_f64("labeling", "delta");  // required
  const std::string weighting =
      ini.get_str("labeling", "weighting", "similarity");
  if (weighting == "similarity") {
    cfg.labeling.weighting = LabelWeighting::kSimilarityProportional;
  } else if (weighting == "uniform") {
    cfg.labeling.weighting = LabelWeighting::kUniform;
  } else {
    throw ConfigError("labeling.weighting must be 'similarity' or 'uniform'");
  }
  cfg.labeling.weight_floor =
      ini.get_f64("labeling", "weight_floor", cfg.labeling.weight_floor);

  cfg.loc.epochs = ini.get_i64("localization", "epochs", 200);
  cfg.loc.batch_size = ini.get_i64("localization", "batch_size", 128);
  cfg.loc.lr = ini.get_f64("localization", "lr", 1e-3);
  cfg.loc.finetune_encoders = ini.get_bool("localization", "finetune", true);
  cfg.loc.arch = cfg.arch;
  cfg.loc.field_width = cfg.width;
  cfg.loc.field_height = cfg.height;
  cfg.knn_k = static_cast<std::size_t>(ini.get_i64(
      "localization", "knn_k", static_cast<std::int64_t>(cfg.knn_k)));

  cfg.master_seed = ini.get_u64("seeds", "master");  // required
  cfg.out_dir = ini.get_str("output", "dir");        // required

  cfg.stage1.seed = derive_seed(cfg.master_seed, "stage1");
  cfg.stage2.seed = derive_seed(cfg.master_seed, "stage2");
  cfg.loc.seed = derive_seed(cfg.master_seed, "loc");
  return cfg;
}

PipelineConfig PipelineConfig::from_file(const std::string& path) {
  return from_ini(IniConfig::parse_file(path));
}

namespace {

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(v));
  return buf;
}

std::string section_digest(const IniConfig&, const std::string&);

// Serializes one config section plus extras into a signature string.
class SignatureBuilder {
 public:
  SignatureBuilder& add(const std::string& tag, const std::string& v) {
    text_ += tag + "=" + v + ";";
    return *this;
  }
  SignatureBuilder& add(const std::string& tag, std::uint64_t v) {
    return add(tag, hex64(v));
  }
  SignatureBuilder& add_file(const std::string& path) {
    return add("file:" + path, file_hash(path));
  }
  std::string digest() const { return hex64(fnv1a64(text_)); }

 private:
  std::string text_;
};

struct Manifest {
  json root;

  static Manifest load_or_empty(const std::string& path) {
    Manifest m;
    m.root = json::object();
    m.root["stages"] = json::object();
    m.root["artifacts"] = json::object();
    if (file_exists(path)) {
      std::ifstream in(path);
      try {
        json parsed = json::parse(in);
        if (parsed.is_object()) {
          m.root = std::move(parsed);
          if (!m.root.contains("stages")) {
            m.root["stages"] = json::object();
          }
          if (!m.root.contains("artifacts")) {
            m.root["artifacts"] = json::object();
          }
        }
      } catch (const json::parse_error&) {
        // Corrupt manifest: rebuild from scratch.
      }
    }
    return m;
  }

  void save(const std::string& path) const {
    ByteWriter w;
    const std::string text = root.dump(2) + "\n";
    w.put_bytes(text.data(), text.size());
    w.save(path);
  }
};

class StageRunner {
 public:
  StageRunner(Manifest& manifest, const fs::path& out_dir, bool force,
              PipelineResult& result)
      : manifest_(manifest), out_dir_(out_dir), force_(force),
        result_(result) {}

  // Runs `body` unless the signature matches and every output exists with
  // its recorded hash.  `outputs` are paths relative to out_dir.
  void stage(const std::string& name, const std::string& signature,
             std::uint64_t seed, const std::vector<std::string>& outputs,
             const std::function<void()>& body) {
    StageStatus status;
    status.name = name;
    const auto t0 = std::chrono::steady_clock::now();

    if (!force_ && up_to_date(name, signature, outputs)) {
      std::cerr << "[" << name << "] up to date, skipping\n";
    } else {
      std::cerr << "[" << name << "] running\n";
      try {
        body();
      } catch (const ConfigError& e) {
        throw ConfigError("[" + name + "] " + e.what());
      } catch (const FormatError& e) {
        throw DataError("[" + name + "] " + e.what());
      } catch (const DimError& e) {
        throw DimError("[" + name + "] " + e.what());
      } catch (const DataError& e) {
        throw DataError("[" + name + "] " + e.what());
      } catch (const TrainError& e) {
        throw TrainError("[" + name + "] " + e.what());
      }
      status.ran = true;
    }

    json stage_entry;
    stage_entry["signature"] = signature;
    stage_entry["seed"] = hex64(seed);
    stage_entry["outputs"] = outputs;
    stage_entry["ran"] = status.ran;
    for (const std::string& rel : outputs) {
      const std::string path = (out_dir_ / rel).string();
      if (!file_exists(path)) {
        throw DataError("[" + name + "] expected output missing: " + path);
      }
      manifest_.root["artifacts"][rel] = hex64(file_hash(path));
    }
    manifest_.root["stages"][name] = stage_entry;

    status.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    std::cerr << "[" << name << "] " << (status.ran ? "done" : "skipped")
              << " in " << status.seconds << "s\n";
    result_.stages.push_back(status);
  }

 private:
  bool up_to_date(const std::string& name, const std::string& signature,
                  const std::vector<std::string>& outputs) const {
    const json& stages = manifest_.root["stages"];
    if (!stages.contains(name)) {
      return false;
    }
    const json& entry = stages[name];
    if (entry.value("signature", "") != signature) {
      return false;
    }
    for (const std::string& rel : outputs) {
      const std::string path = (out_dir_ / rel).string();
      if (!file_exists(path)) {
        return false;
      }
      const json& artifacts = manifest_.root["artifacts"];
      if (!artifacts.contains(rel) ||
          artifacts[rel] != hex64(file_hash(path))) {
        return false;
      }
    }
    return true;
  }

  Manifest& manifest_;
  fs::path out_dir_;
  bool force_;
  PipelineResult& result_;
};

std::vector<Point2> load_ap_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open ap_file: " + path);
  }
  std::vector<Point2> aps;
  double x = 0.0;
  double y = 0.0;
  while (in >> x >> y) {
    aps.push_back({x, y});
  }
  if (aps.empty()) {
    throw ConfigError("ap_file has no coordinates: " + path);
  }
  return aps;
}

std::string eval_meta_line(const std::string& model, std::size_t crowdsourced,
                           const std::string& delta, std::size_t train_size) {
  std::ostringstream out;
  out << "# meta model=" << model << " crowdsourced_c=" << crowdsourced
      << " delta=" << delta << " train_size=" << train_size;
  return out.str();
}

void append_meta(const std::string& csv_path, const std::string& meta) {
  std::ofstream out(csv_path, std::ios::app);
  out << meta << '\n';
}

TrajectoryDataset concat(const TrajectoryDataset& a,
                         const TrajectoryDataset& b) {
  if (a.m != b.m || a.t != b.t) {
    throw DataError("concat: dataset shapes differ");
  }
  TrajectoryDataset out = a;
  out.items.insert(out.items.end(), b.items.begin(), b.items.end());
  out.labeled = a.labeled && b.labeled;
  return out;
}

}  // namespace

PipelineResult run_pipeline(const PipelineConfig& cfg, bool force) {
  const fs::path out_dir(cfg.out_dir);
  fs::create_directories(out_dir);

  // Config snapshot for provenance.
  {
    ByteWriter w;
    w.put_bytes(cfg.raw_text.data(), cfg.raw_text.size());
    w.save((out_dir / "config.ini").string());
  }

  const std::string manifest_path = (out_dir / "manifest.json").string();
  Manifest manifest = Manifest::load_or_empty(manifest_path);
  manifest.root["master_seed"] = cfg.master_seed;
  manifest.root["config_snapshot"] = "config.ini";

  PipelineResult result;
  result.manifest_path = manifest_path;
  StageRunner runner(manifest, out_dir, force, result);

  const auto path_of = [&](const std::string& rel) {
    return (out_dir / rel).string();
  };

  // ---- field ----------------------------------------------------------
  const std::uint64_t field_seed = derive_seed(cfg.master_seed, "field");
  {
    SignatureBuilder sig;
    sig.add("stage", "field")
        .add("width", std::to_string(cfg.width))
        .add("height", std::to_string(cfg.height))
        .add("spacing", std::to_string(cfg.spacing))
        .add("aps", static_cast<std::uint64_t>(cfg.aps))
        .add("ap_file", cfg.ap_file)
        .add("pl_d0", std::to_string(cfg.propagation.pl_d0))
        .add("d0", std::to_string(cfg.propagation.d0))
        .add("n", std::to_string(cfg.propagation.n))
        .add("sigma", std::to_string(cfg.propagation.sigma))
        .add("d_f", std::to_string(cfg.propagation.d_f))
        .add("tx_power", std::to_string(cfg.propagation.tx_power))
        .add("seed", field_seed);
    runner.stage("field", sig.digest(), field_seed, {"field.wfld"}, [&] {
      ApDeployment deployment;
      if (!cfg.ap_file.empty()) {
        deployment.positions = load_ap_file(cfg.ap_file);
        deployment.params = cfg.propagation;
      } else {
        deployment = ApDeployment::random(cfg.aps, cfg.width, cfg.height,
                                          cfg.propagation, field_seed);
      }
      const RadioField field = sample_field(deployment, cfg.width, cfg.height,
                                            cfg.spacing, field_seed);
      field.save(path_of("field.wfld"));
    });
  }

  // ---- data ------------------------------------------------------------
  const std::uint64_t data_seed = derive_seed(cfg.master_seed, "data");
  {
    SignatureBuilder sig;
    sig.add("stage", "data")
        .add_file(path_of("field.wfld"))
        .add("t", static_cast<std::uint64_t>(cfg.mobility.t))
        .add("speed_min", std::to_string(cfg.mobility.speed_min))
        .add("speed_max", std::to_string(cfg.mobility.speed_max))
        .add("step_period", std::to_string(cfg.mobility.step_period))
        .add("levy_alpha", std::to_string(cfg.mobility.levy_alpha))
        .add("flight_min", std::to_string(cfg.mobility.flight_min))
        .add("noise_var", std::to_string(cfg.features.noise_var))
        .add("norm_lo", std::to_string(cfg.features.norm_lo))
        .add("norm_hi", std::to_string(cfg.features.norm_hi))
        .add("count_c", static_cast<std::uint64_t>(cfg.count_c))
        .add("count_long", static_cast<std::uint64_t>(cfg.count_long))
        .add("count_labeled", static_cast<std::uint64_t>(cfg.count_labeled))
        .add("count_test", static_cast<std::uint64_t>(cfg.count_test))
        .add("seed", data_seed);
    runner.stage(
        "data", sig.digest(), data_seed,
        {"c.wtrj", "ctilde.wtrj", "clong.wtrj", "test.wtrj"}, [&] {
          const RadioField field = RadioField::load(path_of("field.wfld"));
          DatasetGenConfig gen;
          gen.mobility = cfg.mobility;
          gen.features = cfg.features;

          gen.labeled = false;
          write_dataset(gen_dataset(field, gen, cfg.count_c,
                                    derive_seed(data_seed, "c")),
                        path_of("c.wtrj"));

          gen.labeled = true;
          write_dataset(gen_dataset(field, gen, cfg.count_labeled,
                                    derive_seed(data_seed, "ctilde")),
                        path_of("ctilde.wtrj"));
          write_dataset(gen_dataset(field, gen, cfg.count_test,
                                    derive_seed(data_seed, "test")),
                        path_of("test.wtrj"));

          DatasetGenConfig long_gen = gen;
          long_gen.labeled = false;
          long_gen.mobility.t = 2 * cfg.mobility.t - 1;
          write_dataset(gen_dataset(field, long_gen, cfg.count_long,
                                    derive_seed(data_seed, "clong")),
                        path_of("clong.wtrj"));
        });
  }

  // ---- stage1 ----------------------------------------------------------
  StageConfig stage1 = cfg.stage1;
  {
    SignatureBuilder sig;
    sig.add("stage", "stage1")
        .add_file(path_of("c.wtrj"))
        .add("epochs", static_cast<std::uint64_t>(stage1.epochs))
        .add("batch", static_cast<std::uint64_t>(stage1.batch_size))
        .add("momentum", std::to_string(stage1.momentum))
        .add("lr", std::to_string(stage1.schedule.base_lr))
        .add("warmup", std::to_string(stage1.schedule.warmup_epochs))
        .add("alpha", std::to_string(stage1.augment.additive_alpha))
        .add("beta", std::to_string(stage1.augment.scale_beta))
        .add("mask", std::to_string(stage1.augment.mask_segments))
        .add("arch", static_cast<std::uint64_t>(cfg.arch.conv_channels * 1000 +
                                                cfg.arch.traj_dim))
        .add("seed", stage1.seed);
    runner.stage("stage1", sig.digest(), stage1.seed,
                 {"f1.wssl", "stage1_trace.csv"}, [&] {
                   const TrajectoryDataset c = read_dataset(path_of("c.wtrj"));
                   std::vector<EpochStats> trace;
                   Stage1Model model = train_stage1(c, stage1, &trace);
                   model.save(path_of("f1.wssl"));
                   write_trace_csv(path_of("stage1_trace.csv"), trace);
                 });
  }

  // ---- stage2 ----------------------------------------------------------
  StageConfig stage2 = cfg.stage2;
  {
    SignatureBuilder sig;
    sig.add("stage", "stage2")
        .add_file(path_of("clong.wtrj"))
        .add_file(path_of("f1.wssl"))
        .add("epochs", static_cast<std::uint64_t>(stage2.epochs))
        .add("batch", static_cast<std::uint64_t>(stage2.batch_size))
        .add("momentum", std::to_string(stage2.momentum))
        .add("lr", std::to_string(stage2.schedule.base_lr))
        .add("reaug", stage2.reaugment_long ? "1" : "0")
        .add("seed", stage2.seed);
    runner.stage(
        "stage2", sig.digest(), stage2.seed, {"f2.wssl", "stage2_trace.csv"},
        [&] {
          const TrajectoryDataset c_long = read_dataset(path_of("clong.wtrj"));
          Stage1Model f1 = Stage1Model::load(
              path_of("f1.wssl"), cfg.arch,
              static_cast<std::int64_t>(c_long.m));
          std::vector<EpochStats> trace;
          Stage2Model model = train_stage2(c_long, f1, stage2, &trace);
          model.save(path_of("f2.wssl"));
          write_trace_csv(path_of("stage2_trace.csv"), trace);
        });
  }

  // ---- label -----------------------------------------------------------
  const std::uint64_t label_seed = derive_seed(cfg.master_seed, "label");
  {
    SignatureBuilder sig;
    sig.add("stage", "label")
        .add_file(path_of("c.wtrj"))
        .add_file(path_of("ctilde.wtrj"))
        .add_file(path_of("f1.wssl"))
        .add_file(path_of("f2.wssl"))
        .add("delta", std::to_string(cfg.labeling.delta))
        .add("weighting",
             cfg.labeling.weighting == LabelWeighting::kUniform ? "uniform"
                                                                : "similarity")
        .add("floor", std::to_string(cfg.labeling.weight_floor));
    runner.stage(
        "label", sig.digest(), label_seed,
        {"cprime.wtrj", "label_report.csv"}, [&] {
          const TrajectoryDataset c = read_dataset(path_of("c.wtrj"));
          const TrajectoryDataset c_tilde =
              read_dataset(path_of("ctilde.wtrj"));
          const Stage1Model f1 = Stage1Model::load(
              path_of("f1.wssl"), cfg.arch, static_cast<std::int64_t>(c.m));
          const Stage2Model f2 =
              Stage2Model::load(path_of("f2.wssl"), cfg.arch);
          auto [refined, report] =
              build_refined(c, c_tilde, f1, f2, cfg.labeling);
          write_dataset(refined, path_of("cprime.wtrj"));
          write_label_report_csv(path_of("label_report.csv"), report);
          std::cerr << "[label] labeled " << report.labeled << "/"
                    << report.total << " (drop rate " << report.drop_rate
                    << ")";
          if (report.err_cdf68) {
            std::cerr << ", pseudo-label cdf68 " << *report.err_cdf68
                      << " m, cdf95 " << *report.err_cdf95 << " m";
          }
          std::cerr << '\n';
        });
  }

  // ---- loc -------------------------------------------------------------
  const std::uint64_t loc_seed = cfg.loc.seed;
  {
    SignatureBuilder sig;
    sig.add("stage", "loc")
        .add_file(path_of("ctilde.wtrj"))
        .add_file(path_of("cprime.wtrj"))
        .add_file(path_of("test.wtrj"))
        .add_file(path_of("f1.wssl"))
        .add_file(path_of("f2.wssl"))
        .add("epochs", static_cast<std::uint64_t>(cfg.loc.epochs))
        .add("batch", static_cast<std::uint64_t>(cfg.loc.batch_size))
        .add("lr", std::to_string(cfg.loc.lr))
        .add("finetune", cfg.loc.finetune_encoders ? "1" : "0")
        .add("knn_k", static_cast<std::uint64_t>(cfg.knn_k))
        .add("seed", loc_seed);
    const std::vector<std::string> outputs = {
        "loc_full_cprime.wssl", "loc_full_ctilde.wssl", "loc_ncp.wssl",
        "eval_full_cprime.csv", "eval_full_ctilde.csv", "eval_ncp.csv",
        "eval_knn.csv"};
    runner.stage("loc", sig.digest(), loc_seed, outputs, [&] {
      const TrajectoryDataset c_tilde = read_dataset(path_of("ctilde.wtrj"));
      const TrajectoryDataset c_prime = read_dataset(path_of("cprime.wtrj"));
      const TrajectoryDataset test = read_dataset(path_of("test.wtrj"));
      const TrajectoryDataset train_union = concat(c_tilde, c_prime);
      const auto ap_count = static_cast<std::int64_t>(c_tilde.m);

      const std::string delta_str = std::to_string(cfg.labeling.delta);
      const auto run_model = [&](LocModel& model,
                                 const TrajectoryDataset& train,
                                 const std::string& ckpt,
                                 const std::string& eval_csv,
                                 const std::string& name,
                                 std::size_t crowdsourced,
                                 const std::string& delta) {
        train_loc(model, train, cfg.loc);
        model.save(path_of(ckpt));
        const EvalReport report = evaluate(model, test);
        const std::vector<Point2> pred = model.predict_batch(test);
        write_eval_csv(path_of(eval_csv), test, pred, report);
        append_meta(path_of(eval_csv),
                    eval_meta_line(name, crowdsourced, delta,
                                   train.items.size()));
        std::cerr << "[loc] " << name << ": cdf68 " << report.cdf68
                  << " m, cdf95 " << report.cdf95 << " m\n";
      };

      LocModel full_cprime = LocModel::from_pretrained(
          cfg.arch, ap_count, path_of("f1.wssl"), path_of("f2.wssl"),
          derive_seed(loc_seed, "full-cprime"));
      run_model(full_cprime, train_union, "loc_full_cprime.wssl",
                "eval_full_cprime.csv", "FULL+C'", c_prime.items.size(),
                delta_str);

      LocModel full_ctilde = LocModel::from_pretrained(
          cfg.arch, ap_count, path_of("f1.wssl"), path_of("f2.wssl"),
          derive_seed(loc_seed, "full-ctilde"));
      run_model(full_ctilde, c_tilde, "loc_full_ctilde.wssl",
                "eval_full_ctilde.csv", "FULL", 0, "-");

      LocModel ncp =
          LocModel::create(cfg.arch, ap_count, derive_seed(loc_seed, "ncp"));
      run_model(ncp, c_tilde, "loc_ncp.wssl", "eval_ncp.csv", "NCP", 0, "-");

      std::vector<Point2> knn_pred;
      const EvalReport knn = knn_baseline(c_tilde, test, cfg.knn_k, &knn_pred);
      write_eval_csv(path_of("eval_knn.csv"), test, knn_pred, knn);
      append_meta(path_of("eval_knn.csv"),
                  eval_meta_line("KNN", 0, "-", c_tilde.items.size()));
      std::cerr << "[loc] KNN(k=" << cfg.knn_k << "): cdf68 " << knn.cdf68
                << " m, cdf95 " << knn.cdf95 << " m\n";
    });
  }

  manifest.save(manifest_path);

  // ---- report ----------------------------------------------------------
  write_report(cfg.out_dir);
  return result;
}

namespace {

struct ParsedEval {
  std::string model;
  std::size_t crowdsourced = 0;
  std::string delta = "-";
  std::size_t train_size = 0;
  std::vector<double> errors;
};

bool parse_eval_csv(const std::string& path, ParsedEval& out) {
  std::ifstream in(path);
  if (!in) {
    return false;
  }
  std::string line;
  bool have_meta = false;
  while (std::getline(in, line)) {
    if (line.rfind("# meta ", 0) == 0) {
      std::istringstream meta(line.substr(7));
      std::string kv;
      while (meta >> kv) {
        const std::size_t eq = kv.find('=');
        if (eq == std::string::npos) {
          continue;
        }
        const std::string key = kv.substr(0, eq);
        const std::string value = kv.substr(eq + 1);
        if (key == "model") {
          out.model = value;
        } else if (key == "crowdsourced_c") {
          out.crowdsourced = std::stoull(value);
        } else if (key == "delta") {
          out.delta = value;
        } else if (key == "train_size") {
          out.train_size = std::stoull(value);
        }
      }
      have_meta = true;
      continue;
    }
    if (line.empty() || line[0] == '#' || line.rfind("index,", 0) == 0) {
      continue;
    }
    const std::size_t last = line.find_last_of(',');
    if (last == std::string::npos || last + 1 >= line.size()) {
      continue;
    }
    try {
      out.errors.push_back(std::stod(line.substr(last + 1)));
    } catch (const std::exception&) {
      return false;
    }
  }
  return have_meta && !out.errors.empty();
}

}  // namespace

int write_report(const std::string& artifact_dir) {
  const fs::path dir(artifact_dir);
  const std::vector<std::string> expected = {
      "eval_knn.csv", "eval_ncp.csv", "eval_full_ctilde.csv",
      "eval_full_cprime.csv"};

  int warnings = 0;
  std::vector<ParsedEval> rows;
  for (const std::string& rel : expected) {
    const std::string path = (dir / rel).string();
    ParsedEval parsed;
    if (!file_exists(path)) {
      std::cerr << "[report] warning: missing " << path << '\n';
      ++warnings;
      continue;
    }
    if (!parse_eval_csv(path, parsed)) {
      std::cerr << "[report] warning: unparsable " << path << '\n';
      ++warnings;
      continue;
    }
    rows.push_back(std::move(parsed));
  }

  fs::create_directories(dir);
  std::ofstream out((dir / "summary.csv").string(), std::ios::trunc);
  out << "model,crowdsourced_c,delta,train_size,cdf68,cdf95\n";
  for (const ParsedEval& row : rows) {
    const EvalReport report = evaluate_errors(row.errors);
    out << row.model << ',' << row.crowdsourced << ',' << row.delta << ','
        << row.train_size << ',' << report.cdf68 << ',' << report.cdf95
        << '\n';

    std::string slug = row.model;
    for (char& c : slug) {
      if (!std::isalnum(static_cast<unsigned char>(c))) {
        c = '_';
      }
    }
    std::vector<double> sorted = row.errors;
    std::sort(sorted.begin(), sorted.end());
    std::ofstream cdf((dir / ("cdf_" + slug + ".csv")).string(),
                      std::ios::trunc);
    cdf << "fraction,err_m\n";
    for (std::size_t i = 0; i < sorted.size(); ++i) {
      cdf << (static_cast<double>(i + 1) / static_cast<double>(sorted.size()))
          << ',' << sorted[i] << '\n';
    }
  }
  return warnings;
}

}  // namespace trajloc
