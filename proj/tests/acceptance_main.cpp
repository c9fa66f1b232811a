// tests/acceptance_main.cpp

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

// Acceptance suite.  Runs one desk-scale pipeline (30x30 m field, 8 APs,
// |C| = 5000, |C-tilde| = 200, 1000 test trajectories, master seed 42) plus
// a battery of exact checks, and prints one PASS/FAIL line per criterion.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "finite_diff.hpp"
#include "trajloc/binio.hpp"
#include "trajloc/errors.hpp"
#include "trajloc/labeling/labeling.hpp"
#include "trajloc/loc/localization.hpp"
#include "trajloc/mobility/dataset.hpp"
#include "trajloc/neural/loss.hpp"
#include "trajloc/parallel.hpp"
#include "trajloc/pipeline/pipeline.hpp"
#include "trajloc/radio/field.hpp"
#include "trajloc/ssl/ssl.hpp"

namespace fs = std::filesystem;
using namespace trajloc;
using trajloc::testing::check_layer;
using trajloc::testing::random_input;

namespace {

struct Criterion {
  int id;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

class Runner {
 public:
  // body returns a detail string and throws or returns false on failure.
  void run(int id, const std::string& name,
           const std::function<bool(std::string&)>& body) {
    Criterion c{id, name};
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.pass = body(c.detail);
    } catch (const std::exception& e) {
      c.pass = false;
      c.detail = std::string("exception: ") + e.what();
    }
    c.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    std::printf("[%2d] %s  criterion %d: %s  (%.1f s)%s%s\n", c.id,
                c.pass ? "PASS" : "FAIL", c.id, c.name.c_str(), c.seconds,
                c.detail.empty() ? "" : "  -- ", c.detail.c_str());
    std::fflush(stdout);
    results.push_back(std::move(c));
  }

  int summarize() const {
    int failed = 0;
    for (const Criterion& c : results) {
      failed += c.pass ? 0 : 1;
    }
    std::printf("ACCEPTANCE: %zu/%zu criteria passed\n",
                results.size() - static_cast<std::size_t>(failed),
                results.size());
    return failed == 0 ? 0 : 1;
  }

  std::vector<Criterion> results;
};

// ---- desk preset -----------------------------------------------------

constexpr std::uint64_t kMasterSeed = 42;
constexpr double kFieldSize = 30.0;
const double kFieldDiagonal = std::hypot(kFieldSize, kFieldSize);

std::string desk_config(const std::string& out_dir) {
  return R"([field]
width = 30
height = 30
spacing = 0.5
aps = 8

[mobility]
t = 15
count_c = 5000
count_long = 5000
count_labeled = 200
count_test = 1000

[stage1]
epochs = 100
batch_size = 256

[stage2]
epochs = 100
batch_size = 256

[labeling]
delta = 0.9

[localization]
epochs = 150
batch_size = 128
knn_k = 3

[seeds]
master = 42

[output]
dir = )" + out_dir + "\n";
}

double rel_err(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

}  // namespace

int main(int argc, char** argv) {
  std::string workdir = "acceptance_workdir";
  for (int i = 1; i + 1 < argc; i += 2) {
    if (std::string(argv[i]) == "--workdir") {
      workdir = argv[i + 1];
    }
  }
  // Always measure a fresh run, never cached pipeline artifacts.
  fs::remove_all(workdir);
  fs::create_directories(workdir);
  const auto wpath = [&](const std::string& rel) {
    return (fs::path(workdir) / rel).string();
  };

  Runner runner;
  const auto suite_start = std::chrono::steady_clock::now();

  // -- 1. Propagation exactness -----------------------------------------
  runner.run(1, "propagation exactness", [&](std::string& detail) {
    const auto t0 = std::chrono::steady_clock::now();
    Rng rng(1001);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
      PropagationParams p;
      p.d0 = rng.uniform(0.5, 2.0);
      p.n = rng.uniform(1.5, 6.0);
      p.pl_d0 = rng.uniform(30.0, 60.0);
      const double d = rng.uniform(p.d0, 100.0);
      const double chi = rng.gaussian(0.0, 2.0);
      const double got = path_loss(d, p, chi);
      const long double expected =
          static_cast<long double>(p.pl_d0) +
          10.0L * static_cast<long double>(p.n) *
              std::log10(static_cast<long double>(d) / p.d0) +
          static_cast<long double>(chi);
      worst = std::max(worst, rel_err(got, static_cast<double>(expected)));
    }
    PropagationParams p4;
    p4.n = 4.0;
    const bool decade_exact = path_loss(10.0 * p4.d0, p4, 0.0) ==
                              p4.pl_d0 + 40.0;
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    std::ostringstream os;
    os << "max rel err " << worst << ", decade " << (decade_exact ? "exact" : "OFF")
       << ", " << secs << " s";
    detail = os.str();
    return worst < 1e-9 && decade_exact && secs < 1.0;
  });

  // -- 2. Gradient correctness -------------------------------------------
  runner.run(2, "gradient correctness (100 random configurations)",
             [&](std::string& detail) {
    const auto t0 = std::chrono::steady_clock::now();
    Rng rng(2002);
    double worst = 0.0;
    std::string worst_what;
    const auto note = [&](const trajloc::testing::GradCheckOutcome& out) {
      if (out.max_rel_err > worst) {
        worst = out.max_rel_err;
        worst_what = out.worst;
      }
    };
    // 20 conv1d
    for (int rep = 0; rep < 20; ++rep) {
      ParamStore<double> store;
      const std::int64_t in_ch = 1 + static_cast<std::int64_t>(rng.below(4));
      const std::int64_t out_ch = 1 + static_cast<std::int64_t>(rng.below(5));
      const std::int64_t k = 1 + 2 * static_cast<std::int64_t>(rng.below(2));
      const std::int64_t t = k + static_cast<std::int64_t>(rng.below(6));
      const std::int64_t b = 1 + static_cast<std::int64_t>(rng.below(3));
      Conv1d<double> conv(store, "conv", in_ch, out_ch, k, rng);
      note(check_layer(conv, store, random_input({b, in_ch, t}, rng),
                       Phase::kTrain, rng));
    }
    // 20 batchnorm (both ranks)
    for (int rep = 0; rep < 10; ++rep) {
      ParamStore<double> store;
      const std::int64_t ch = 1 + static_cast<std::int64_t>(rng.below(5));
      const std::int64_t t = 2 + static_cast<std::int64_t>(rng.below(5));
      const std::int64_t b = 2 + static_cast<std::int64_t>(rng.below(3));
      BatchNorm1d<double> bn(store, "bn", ch);
      note(check_layer(bn, store, random_input({b, ch, t}, rng),
                       Phase::kTrain, rng));
    }
    for (int rep = 0; rep < 10; ++rep) {
      ParamStore<double> store;
      const std::int64_t ch = 1 + static_cast<std::int64_t>(rng.below(6));
      const std::int64_t b = 2 + static_cast<std::int64_t>(rng.below(6));
      BatchNorm1d<double> bn(store, "bn", ch);
      note(check_layer(bn, store, random_input({b, ch}, rng), Phase::kTrain,
                       rng));
    }
    // 15 relu
    for (int rep = 0; rep < 15; ++rep) {
      ParamStore<double> store;
      Relu<double> relu("relu");
      const std::int64_t n = 2 + static_cast<std::int64_t>(rng.below(6));
      note(check_layer(relu, store, random_input({n, n}, rng, true),
                       Phase::kTrain, rng));
    }
    // 15 reflection pad
    for (int rep = 0; rep < 15; ++rep) {
      ParamStore<double> store;
      const std::int64_t t = 3 + static_cast<std::int64_t>(rng.below(5));
      const std::int64_t pad = 1 + static_cast<std::int64_t>(
          rng.below(static_cast<std::uint64_t>(t - 1)));
      ReflectionPad1d<double> rp("pad", pad);
      note(check_layer(rp, store, random_input({2, 3, t}, rng),
                       Phase::kTrain, rng));
    }
    // 10 avg pool + 10 fully connected
    for (int rep = 0; rep < 10; ++rep) {
      ParamStore<double> store;
      TemporalAvgPool<double> pool("pool");
      const std::int64_t t = 1 + static_cast<std::int64_t>(rng.below(8));
      note(check_layer(pool, store, random_input({2, 3, t}, rng),
                       Phase::kTrain, rng));
    }
    for (int rep = 0; rep < 10; ++rep) {
      ParamStore<double> store;
      const std::int64_t in = 1 + static_cast<std::int64_t>(rng.below(8));
      const std::int64_t out = 1 + static_cast<std::int64_t>(rng.below(8));
      FullyConnected<double> fc(store, "fc", in, out, rng);
      note(check_layer(fc, store, random_input({3, in}, rng), Phase::kTrain,
                       rng));
    }
    // Eq. 4 loss, p-side finite differences.
    const double h = 1e-5;
    for (int rep = 0; rep < 5; ++rep) {
      const std::int64_t b = 2 + static_cast<std::int64_t>(rng.below(3));
      const std::int64_t dim = 3 + static_cast<std::int64_t>(rng.below(6));
      auto p1 = random_input({b, dim}, rng);
      auto z2 = random_input({b, dim}, rng);
      auto p2 = random_input({b, dim}, rng);
      auto z1 = random_input({b, dim}, rng);
      const SiameseLoss<double> loss = simsiam_loss(p1, z2, p2, z1);
      for (auto [target, grad] :
           {std::pair{&p1, &loss.gp1}, std::pair{&p2, &loss.gp2}}) {
        for (std::int64_t i = 0; i < target->size(); ++i) {
          const double saved = target->data[i];
          target->data[i] = saved + h;
          const double up = simsiam_loss(p1, z2, p2, z1).loss;
          target->data[i] = saved - h;
          const double down = simsiam_loss(p1, z2, p2, z1).loss;
          target->data[i] = saved;
          const double numeric = (up - down) / (2.0 * h);
          const double analytic = grad->data[i];
          const double rel =
              std::abs(analytic - numeric) /
              std::max({std::abs(analytic), std::abs(numeric), 1e-3});
          if (rel > worst) {
            worst = rel;
            worst_what = "eq4 loss";
          }
        }
      }
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    std::ostringstream os;
    os << "max rel err " << worst << " (" << worst_what << "), " << secs
       << " s";
    detail = os.str();
    return worst < 1e-4 && secs < 120.0;
  });

  // -- 3. Stop-gradient contract ------------------------------------------
  runner.run(3, "stop-gradient yields exactly zero grads on the SG side",
             [&](std::string& detail) {
    Rng rng(3003);
    ArchConfig arch;
    ParamStore<float> store_p;
    ParamStore<float> store_z;
    Sequential<float> net_p = build_f1(store_p, arch, 8, rng);
    Sequential<float> net_z = build_f1(store_z, arch, 8, rng);
    Tensor<float> x({16, 8, 15});
    Rng data_rng(3);
    for (float& v : x.data) {
      v = static_cast<float>(data_rng.uniform());
    }
    Sequential<float>::Tape tape_p, tape_z;
    const Tensor<float> p = net_p.forward(x, Phase::kTrain, tape_p);
    const Tensor<float> z = net_z.forward(x, Phase::kTrain, tape_z);
    store_p.zero_grads();
    store_z.zero_grads();
    const SiameseLoss<float> loss = simsiam_loss(p, z, p, z);
    net_p.backward(loss.gp1, tape_p);
    net_p.backward(loss.gp2, tape_p);
    std::size_t nonzero = 0;
    for (const std::string& name : store_z.names()) {
      for (float g : store_z.entry(name).grad.data) {
        nonzero += g != 0.0f;
      }
    }
    bool p_moves = false;
    for (const std::string& name : store_p.names()) {
      for (float g : store_p.entry(name).grad.data) {
        p_moves = p_moves || g != 0.0f;
      }
    }
    detail = "sg-side nonzero grads: " + std::to_string(nonzero);
    return nonzero == 0 && p_moves;
  });

  // -- 9. Percentile rule (cheap, run before the big pipeline) -----------
  runner.run(9, "nearest-rank percentile on errors {1..100}",
             [&](std::string& detail) {
    std::vector<double> errors(100);
    std::iota(errors.begin(), errors.end(), 1.0);
    const EvalReport r = evaluate_errors(errors);
    std::ostringstream os;
    os << "cdf68=" << r.cdf68 << " cdf95=" << r.cdf95;
    detail = os.str();
    return r.cdf68 == 68.0 && r.cdf95 == 95.0;
  });

  // -- 10. Format round-trips ---------------------------------------------
  runner.run(10, "bitwise round-trips and offset-bearing format errors",
             [&](std::string& detail) {
    PropagationParams params;
    const ApDeployment dep =
        ApDeployment::random(4, 15.0, 15.0, params, 77);
    const RadioField field = sample_field(dep, 15.0, 15.0, 0.5, 77);
    DatasetGenConfig gen;
    gen.mobility.t = 15;
    gen.labeled = true;
    const TrajectoryDataset ds = gen_dataset(field, gen, 50, 78);
    const std::string dpath = wpath("roundtrip.wtrj");
    const std::string dpath2 = wpath("roundtrip2.wtrj");
    write_dataset(ds, dpath);
    write_dataset(read_dataset(dpath), dpath2);
    const bool ds_ok = file_hash(dpath) == file_hash(dpath2);

    ArchConfig arch;
    arch.conv_channels = 16;
    ParamStore<float> store;
    Rng rng(79);
    build_f1(store, arch, 4, rng);
    const std::string cpath = wpath("roundtrip.wssl");
    const std::string cpath2 = wpath("roundtrip2.wssl");
    save_checkpoint(store, cpath);
    const Checkpoint ck = load_checkpoint(cpath);
    save_checkpoint(ck.store, cpath2);
    const bool ck_ok = file_hash(cpath) == file_hash(cpath2);

    bool magic_ok = false;
    {
      std::fstream f(dpath, std::ios::in | std::ios::out | std::ios::binary);
      f.put('?');
    }
    try {
      read_dataset(dpath);
    } catch (const FormatError& e) {
      magic_ok = e.offset() == 0;
    }
    bool ckpt_magic_ok = false;
    {
      std::fstream f(cpath, std::ios::in | std::ios::out | std::ios::binary);
      f.put('?');
    }
    try {
      load_checkpoint(cpath);
    } catch (const FormatError& e) {
      ckpt_magic_ok = e.offset() == 0;
    }
    detail = std::string("dataset ") + (ds_ok ? "ok" : "BAD") +
             ", checkpoint " + (ck_ok ? "ok" : "BAD") + ", magic errors " +
             ((magic_ok && ckpt_magic_ok) ? "ok" : "BAD");
    return ds_ok && ck_ok && magic_ok && ckpt_magic_ok;
  });

  // -- 4. Determinism -------------------------------------------------------
  runner.run(4, "bitwise determinism of data generation and 5-epoch training",
             [&](std::string& detail) {
    const int saved_workers = worker_count();
    set_worker_count(1);
    PropagationParams params;
    const ApDeployment dep = ApDeployment::random(
        8, kFieldSize, kFieldSize, params, kMasterSeed);
    const RadioField field =
        sample_field(dep, kFieldSize, kFieldSize, 0.5, kMasterSeed);
    DatasetGenConfig gen;
    gen.mobility.t = 15;
    const auto make = [&](const std::string& tag) {
      const TrajectoryDataset c = gen_dataset(field, gen, 1000, kMasterSeed);
      write_dataset(c, wpath("det_" + tag + ".wtrj"));
      StageConfig cfg;
      cfg.epochs = 5;
      cfg.batch_size = 256;
      cfg.seed = kMasterSeed;
      const Stage1Model model = train_stage1(c, cfg);
      model.save(wpath("det_" + tag + ".wssl"));
    };
    make("a");
    make("b");
    set_worker_count(saved_workers);
    const bool data_ok =
        file_hash(wpath("det_a.wtrj")) == file_hash(wpath("det_b.wtrj"));
    const bool ckpt_ok =
        file_hash(wpath("det_a.wssl")) == file_hash(wpath("det_b.wssl"));
    detail = std::string("dataset ") + (data_ok ? "identical" : "DIFFERS") +
             ", checkpoint " + (ckpt_ok ? "identical" : "DIFFERS");
    return data_ok && ckpt_ok;
  });

  // -- run the desk-scale pipeline once; criteria 5-8 read its artifacts --
  const std::string run_dir = wpath("desk_run");
  const PipelineConfig cfg =
      PipelineConfig::from_ini(IniConfig::parse_string(desk_config(run_dir)));
  const auto pipeline_start = std::chrono::steady_clock::now();
  PipelineResult pipeline_result;
  bool pipeline_ok = true;
  std::string pipeline_error;
  try {
    pipeline_result = run_pipeline(cfg);
  } catch (const std::exception& e) {
    pipeline_ok = false;
    pipeline_error = e.what();
  }
  const double pipeline_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                    pipeline_start)
          .count();
  const auto rpath = [&](const std::string& rel) {
    return (fs::path(run_dir) / rel).string();
  };

  // -- 5. Stage-1 learning signal and no collapse -------------------------
  runner.run(5, "stage-1 loss < -0.8 and embedding std > 0.01",
             [&](std::string& detail) {
    if (!pipeline_ok) {
      detail = "pipeline failed: " + pipeline_error;
      return false;
    }
    // Final epoch loss from the trace.
    std::ifstream trace(rpath("stage1_trace.csv"));
    std::string line, last;
    std::getline(trace, line);  // header
    while (std::getline(trace, line)) {
      if (!line.empty()) {
        last = line;
      }
    }
    double mean_loss = 0.0;
    {
      std::istringstream ss(last);
      std::string tok;
      std::getline(ss, tok, ',');  // epoch
      std::getline(ss, tok, ',');
      mean_loss = std::stod(tok);
    }
    // Embedding std over a fresh 512-sample batch.
    const TrajectoryDataset c = read_dataset(rpath("c.wtrj"));
    const Stage1Model f1 = Stage1Model::load(rpath("f1.wssl"), cfg.arch,
                                             static_cast<std::int64_t>(c.m));
    std::vector<std::size_t> idx(512);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    const Tensor<float> z = embed_trajectories(f1, c, idx);
    const double std_val = normalized_embedding_std(z);
    double stage1_secs = 0.0;
    for (const StageStatus& s : pipeline_result.stages) {
      if (s.name == "stage1") {
        stage1_secs = s.seconds;
      }
    }
    std::ostringstream os;
    os << "final mean loss " << mean_loss << ", embed std " << std_val
       << ", stage1 " << stage1_secs << " s";
    detail = os.str();
    return mean_loss < -0.8 && std_val > 0.01 && stage1_secs < 1800.0;
  });

  // -- 6. Meet-in-the-middle ----------------------------------------------
  runner.run(6, "same-endpoint pairs: s_e >= s_t in > 55% of 1000 held-out",
             [&](std::string& detail) {
    if (!pipeline_ok) {
      detail = "pipeline failed: " + pipeline_error;
      return false;
    }
    const RadioField field = RadioField::load(rpath("field.wfld"));
    DatasetGenConfig gen;
    gen.mobility.t = 2 * 15 - 1;
    // Held-out: a seed never used by the pipeline stages.
    const TrajectoryDataset held_out = gen_dataset(
        field, gen, 1000, derive_seed(kMasterSeed, "acceptance-heldout"));
    const Stage1Model f1 = Stage1Model::load(rpath("f1.wssl"), cfg.arch, 8);
    const Stage2Model f2 = Stage2Model::load(rpath("f2.wssl"), cfg.arch);

    std::size_t wins = 0;
    for (const Trajectory& item : held_out.items) {
      const auto [z1, z2f] = cut_and_flip(item);
      const Tensor<float> t1 = embed_trajectory(f1, z1);
      const Tensor<float> t2 = embed_trajectory(f1, z2f);
      const Tensor<float> e1 = embed_endpoint(f1, f2, z1);
      const Tensor<float> e2 = embed_endpoint(f1, f2, z2f);
      const float s_t = cosine_similarity<float>(
          {t1.ptr(), static_cast<std::size_t>(t1.size())},
          {t2.ptr(), static_cast<std::size_t>(t2.size())});
      const float s_e = cosine_similarity<float>(
          {e1.ptr(), static_cast<std::size_t>(e1.size())},
          {e2.ptr(), static_cast<std::size_t>(e2.size())});
      wins += s_e >= s_t;
    }
    const double fraction =
        static_cast<double>(wins) / static_cast<double>(held_out.size());
    std::ostringstream os;
    os << "s_e >= s_t in " << 100.0 * fraction << "% (paper reports 67.1%)";
    detail = os.str();
    return fraction > 0.55;
  });

  // -- 7. Pseudo-label quality trend ---------------------------------------
  runner.run(7, "delta 0.9 beats 0.8 on CDF68; drop rate rises; CDF68 bound",
             [&](std::string& detail) {
    if (!pipeline_ok) {
      detail = "pipeline failed: " + pipeline_error;
      return false;
    }
    const TrajectoryDataset c = read_dataset(rpath("c.wtrj"));
    const TrajectoryDataset c_tilde = read_dataset(rpath("ctilde.wtrj"));
    const Stage1Model f1 = Stage1Model::load(rpath("f1.wssl"), cfg.arch, 8);
    const Stage2Model f2 = Stage2Model::load(rpath("f2.wssl"), cfg.arch);

    PseudoLabelConfig c08;
    c08.delta = 0.8;
    PseudoLabelConfig c09;
    c09.delta = 0.9;
    const auto [r08, rep08] = build_refined(c, c_tilde, f1, f2, c08);
    const auto [r09, rep09] = build_refined(c, c_tilde, f1, f2, c09);
    if (!rep08.err_cdf68 || !rep09.err_cdf68) {
      detail = "missing ground-truth error stats";
      return false;
    }
    std::ostringstream os;
    os << "cdf68(0.9)=" << *rep09.err_cdf68 << " < cdf68(0.8)="
       << *rep08.err_cdf68 << "; drop(0.9)=" << rep09.drop_rate
       << " > drop(0.8)=" << rep08.drop_rate << "; bound "
       << 0.25 * kFieldDiagonal;
    detail = os.str();
    return *rep09.err_cdf68 < *rep08.err_cdf68 &&
           rep09.drop_rate > rep08.drop_rate &&
           *rep09.err_cdf68 < 0.25 * kFieldDiagonal;
  });

  // -- 8. Localization trend ------------------------------------------------
  runner.run(8, "FULL+C' beats FULL and NCP by 10%; KNN worse; runtime < 2 h",
             [&](std::string& detail) {
    if (!pipeline_ok) {
      detail = "pipeline failed: " + pipeline_error;
      return false;
    }
    const TrajectoryDataset test = read_dataset(rpath("test.wtrj"));
    const TrajectoryDataset c_tilde = read_dataset(rpath("ctilde.wtrj"));
    const auto m = static_cast<std::int64_t>(test.m);
    const LocModel full_cprime =
        LocModel::load(rpath("loc_full_cprime.wssl"), cfg.arch, m);
    const LocModel full_ctilde =
        LocModel::load(rpath("loc_full_ctilde.wssl"), cfg.arch, m);
    const LocModel ncp = LocModel::load(rpath("loc_ncp.wssl"), cfg.arch, m);

    const EvalReport e_cprime = evaluate(full_cprime, test);
    const EvalReport e_ctilde = evaluate(full_ctilde, test);
    const EvalReport e_ncp = evaluate(ncp, test);
    const EvalReport e_knn = knn_baseline(c_tilde, test, 3);

    std::ostringstream os;
    os << "cdf68: FULL+C'=" << e_cprime.cdf68 << " FULL=" << e_ctilde.cdf68
       << " NCP=" << e_ncp.cdf68 << " KNN=" << e_knn.cdf68 << "; pipeline "
       << pipeline_seconds << " s";
    detail = os.str();
    const bool beats_full = e_cprime.cdf68 <= 0.9 * e_ctilde.cdf68;
    const bool beats_ncp = e_cprime.cdf68 <= 0.9 * e_ncp.cdf68;
    const bool knn_worse = e_knn.cdf68 > e_cprime.cdf68;
    return beats_full && beats_ncp && knn_worse && pipeline_seconds < 7200.0;
  });

  const double total =
      std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                    suite_start)
          .count();
  std::printf("total acceptance runtime: %.1f s\n", total);
  return runner.summarize();
}
