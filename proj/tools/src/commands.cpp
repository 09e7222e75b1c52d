/*
 * Copyright 2026 The advmask Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "advmask_cli/commands.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include "advmask/attack.hpp"
#include "advmask/corpus.hpp"
#include "advmask/csv.hpp"
#include "advmask/defense.hpp"
#include "advmask/footage.hpp"
#include "advmask/masking_search.hpp"
#include "advmask/metrics.hpp"
#include "advmask/parallel.hpp"
#include "advmask/pgm.hpp"
#include "advmask/psychoacoustics.hpp"
#include "advmask/relay.hpp"
#include "advmask/train.hpp"
#include "advmask/wav.hpp"

namespace advmask::cli {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Shortest round-trip decimal form, so CSV and JSON text is reproducible.
std::string num(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

class Artifacts {
 public:
  explicit Artifacts(fs::path dir) : dir_(std::move(dir)) { fs::create_directories(dir_); }

  fs::path add(const std::string& name) {
    names_.push_back(name);
    const fs::path p = dir_ / name;
    fs::create_directories(p.parent_path());
    return p;
  }

  void write_text(const std::string& name, const std::string& text) {
    std::ofstream out(add(name), std::ios::binary);
    if (!out) throw IoError("cannot write " + (dir_ / name).string());
    out << text;
  }

  void write_json(const std::string& name, const json& j) { write_text(name, j.dump(2) + "\n"); }

  // Sidecar and hash list; artifacts are listed in sorted order.
  void finalize(const ExperimentConfig& cfg) {
    cfg.write(dir_ / kResolvedConfigName);
    auto names = names_;
    std::sort(names.begin(), names.end());
    std::ofstream out(dir_ / kArtifactHashesName, std::ios::binary);
    for (const auto& n : names) out << sha256_file(dir_ / n) << "  " << n << "\n";
  }

  const fs::path& dir() const { return dir_; }

 private:
  fs::path dir_;
  std::vector<std::string> names_;
};

fs::path required_path(const ExperimentConfig& cfg, const std::string& key) {
  const std::string& v = cfg.get("paths", key);
  if (v.empty()) throw ConfigError("paths." + key + " is required for " + cfg.command());
  return v;
}

AcousticModel load_required_model(const ExperimentConfig& cfg) {
  const fs::path p = required_path(cfg, "model");
  if (!fs::exists(p)) throw IoError("model file not found: " + p.string());
  return load_model(p);
}

unsigned jobs(const ExperimentConfig& cfg) {
  const int j = cfg.get_int("run", "jobs");
  if (j < 0) throw ConfigError("run.jobs must be >= 0");
  return static_cast<unsigned>(j);
}

json tokens_json(const TokenMapper& m, const Transcription& t) { return m.format(t); }

std::string manifest_id(const ManifestEntry& e) { return e.wav.stem().string(); }

void cmd_train_asr(const ExperimentConfig& cfg, std::ostream& log) {
  const std::uint64_t seed = cfg.get_u64("run", "seed");
  CorpusConfig cc;
  cc.min_tokens = cfg.get_int("corpus", "min_tokens");
  cc.max_tokens = cfg.get_int("corpus", "max_tokens");
  cc.noise_min = cfg.get_double("corpus", "noise_min");
  cc.noise_max = cfg.get_double("corpus", "noise_max");
  cc.clean_fraction = cfg.get_double("corpus", "clean_fraction");
  cc.bandlimit_fraction = cfg.get_double("corpus", "bandlimit_fraction");
  const int count = cfg.get_int("corpus", "count");
  const int export_count = cfg.get_int("corpus", "export_count");
  if (count < 1 || export_count < 0) throw ConfigError("corpus.count must be >= 1 and corpus.export_count >= 0");

  FeatureChain chain;
  chain.window = cfg.get_int("features", "window");
  chain.hop = cfg.get_int("features", "hop");
  chain.mel_filter_count = cfg.get_int("features", "mel_filters");
  chain.log_floor_db = cfg.get_double("features", "log_floor_db");
  chain.include_dct = cfg.get_bool("features", "dct");
  chain.validate();

  TrainConfig tc;
  tc.epochs = cfg.get_int("train", "epochs");
  tc.batch_size = cfg.get_int("train", "batch_size");
  tc.learning_rate = cfg.get_double("train", "learning_rate");
  tc.hidden = cfg.get_ints("train", "hidden");
  tc.context = cfg.get_int("train", "context");
  tc.heldout_fraction = cfg.get_double("train", "heldout_fraction");
  tc.seed = derive_seed(seed, "train");
  const double min_accuracy = cfg.get_double("train", "min_accuracy");

  const auto recipes = standard_vocab_spec();
  const auto tokens = TokenMapper::standard();
  const auto corpus = synth_corpus(recipes, static_cast<std::size_t>(count), derive_seed(seed, "corpus"), cc);
  log << "training on " << corpus.size() << " utterances\n";
  const auto result = train(corpus, chain, tokens, tc);

  Artifacts out(cfg.get("paths", "out_dir"));
  save_model(result.model, out.add("model.json"));
  std::string metrics = csv_row({"epoch", "train_loss", "train_frame_accuracy", "heldout_frame_accuracy",
                                 "heldout_exact_match"}) + "\n";
  bool finite = true;
  for (const auto& e : result.report.epochs) {
    finite = finite && std::isfinite(e.train_loss);
    metrics += csv_row({std::to_string(e.epoch), num(e.train_loss), num(e.train_frame_accuracy),
                        num(e.heldout_frame_accuracy), num(e.heldout_exact_match)}) + "\n";
  }
  out.write_text("metrics.csv", metrics);
  out.write_json("summary.json", {{"command", cfg.command()},
                                  {"train_clips", result.report.train_clips},
                                  {"heldout_clips", result.report.heldout_clips},
                                  {"heldout_exact_match", result.report.heldout_exact_match},
                                  {"min_accuracy", min_accuracy}});
  if (export_count > 0) {
    const auto benign = synth_corpus(recipes, static_cast<std::size_t>(export_count), derive_seed(seed, "benign"), cc);
    const fs::path dir = out.dir() / "benign";
    write_corpus(benign, tokens, dir);
    out.add("benign/manifest.csv");
    for (std::size_t i = 0; i < benign.size(); ++i) {
      std::ostringstream name;
      name << "benign/utt_" << std::setw(4) << std::setfill('0') << i << ".wav";
      out.add(name.str());
    }
  }
  out.finalize(cfg);
  log << "held-out exact match " << result.report.heldout_exact_match << "\n";
  if (!finite) throw TrainingFailure("training loss became non-finite");
  if (result.report.heldout_exact_match < min_accuracy)
    throw TrainingFailure("held-out exact match " + num(result.report.heldout_exact_match) + " below " +
                          num(min_accuracy));
}

void cmd_attack(const ExperimentConfig& cfg, std::ostream& log) {
  const std::uint64_t seed = cfg.get_u64("run", "seed");
  const AcousticModel model = load_required_model(cfg);
  const Transcription target = model.tokens().parse(cfg.get("attack", "target"));
  if (target.empty()) throw ConfigError("attack.target must not be empty");

  AttackConfig ac;
  ac.epsilon = cfg.get_double("attack", "epsilon");
  ac.lr = cfg.get_double("attack", "lr");
  ac.sigma = cfg.get_double("attack", "sigma");
  ac.max_iters = cfg.get_int("attack", "max_iters");
  ac.refine_iters = cfg.get_int("attack", "refine_iters");
  ac.alpha_value = cfg.get_double("attack", "alpha_value");
  ac.alpha_init = cfg.get_double("attack", "alpha_init");
  ac.duration = static_cast<std::size_t>(cfg.get_int("attack", "duration"));
  ac.check_interval = cfg.get_int("attack", "check_interval");
  ac.seed = derive_seed(seed, "attack");
  ac.validate();
  const int trials = cfg.get_int("attack", "robustness_trials");

  const AttackResult first = stage1(model, target, ac);
  AttackResult final_result = first;
  bool refined = false;
  if (first.success && ac.refine_iters > 0) {
    AttackConfig refine = ac;
    refine.alpha_init = ac.alpha_value;
    final_result = stage2(model, first, target, refine);
    refined = true;
  }

  Artifacts out(cfg.get("paths", "out_dir"));
  const fs::path wav = out.add("delta.wav");
  write_wav(final_result.delta, wav);
  const Transcription decoded_wav = transcribe(model, read_wav(wav));
  const double robustness =
      final_result.success && trials > 0
          ? noise_robustness(model, final_result.delta, target, ac.sigma, trials, derive_seed(seed, "robustness"))
          : 0.0;
  const auto& tm = model.tokens();
  out.write_json("telemetry.json",
                 {{"command", cfg.command()},
                  {"target", tokens_json(tm, target)},
                  {"success", final_result.success},
                  {"decoded", tokens_json(tm, final_result.achieved)},
                  {"decoded_wav", tokens_json(tm, decoded_wav)},
                  {"l2_energy", final_result.l2_energy},
                  {"stage1",
                   {{"success", first.success},
                    {"iterations", first.iterations_used},
                    {"l2_energy", first.l2_energy},
                    {"loss_trace", first.loss_trace}}},
                  {"stage2",
                   {{"ran", refined},
                    {"iterations", refined ? final_result.iterations_used : 0},
                    {"l2_energy", final_result.l2_energy},
                    {"loss_trace", refined ? final_result.loss_trace : std::vector<double>{}}}},
                  {"noise_robustness", {{"sigma", ac.sigma}, {"trials", trials}, {"rate", robustness}}}});
  out.finalize(cfg);
  log << "attack " << (final_result.success ? "succeeded" : "did not reach the target") << " after "
      << first.iterations_used << " iterations\n";
}

void cmd_search_mask(const ExperimentConfig& cfg, std::ostream& log) {
  const std::uint64_t seed = cfg.get_u64("run", "seed");
  const AcousticModel model = load_required_model(cfg);
  const fs::path input = required_path(cfg, "input");
  const AudioClip delta = read_wav(input);
  const Transcription target = model.tokens().parse(cfg.get("search", "target"));

  SearchConfig sc;
  sc.k = cfg.get_int("search", "k");
  sc.frame_len_ms = cfg.get_double("search", "frame_len_ms");
  sc.max_iters = cfg.get_int("search", "max_iters");
  sc.amplitude = cfg.get_double("search", "amplitude");
  sc.hinge = cfg.get_bool("search", "hinge");
  sc.max_saturation = cfg.get_double("search", "max_saturation");
  sc.init_attempts = cfg.get_int("search", "init_attempts");
  sc.window_size = cfg.get_int("search", "window");
  sc.hop = cfg.get_int("search", "hop");
  sc.bank.tones_hz = cfg.get_doubles("bank", "tones");
  sc.bank.timbres = cfg.get_strings("bank", "timbres");
  sc.bank.durations_ms = cfg.get_doubles("bank", "durations_ms");
  sc.seed = derive_seed(seed, "search");
  sc.validate(delta.sample_rate);

  const MaskedSample m = search(delta, target, model, sc);
  const MaskingScorer scorer(delta, sc.window_size, sc.hop, sc.hinge);
  const ScoreDetail baseline = scorer.evaluate(delta);

  Artifacts out(cfg.get("paths", "out_dir"));
  const fs::path wav = out.add("mixture.wav");
  write_wav(m.mixture, wav);
  const Transcription decoded_wav = transcribe(model, read_wav(wav));

  json placements = json::array();
  for (std::size_t i = 0; i < m.placements.size(); ++i) {
    const auto& p = m.placements[i];
    placements.push_back({{"tone_hz", p.tone_hz},
                          {"timbre", p.timbre},
                          {"duration_ms", p.duration_ms},
                          {"position_samples", p.position},
                          {"grid_slot", m.indices[i].position}});
  }
  const auto& tm = model.tokens();
  out.write_json("placements.json", {{"command", cfg.command()},
                                     {"target", tokens_json(tm, target)},
                                     {"masked", m.masked},
                                     {"transcription", tokens_json(tm, m.transcription)},
                                     {"decoded_wav", tokens_json(tm, decoded_wav)},
                                     {"initial_score", m.initial_score},
                                     {"score", m.score},
                                     {"coverage", m.coverage},
                                     {"baseline_score", baseline.v},
                                     {"baseline_coverage", baseline.coverage},
                                     {"accepted", m.accepted},
                                     {"music_gain", m.music_gain},
                                     {"placements", placements},
                                     {"score_trace", m.score_trace},
                                     {"best_trace", m.best_trace}});
  const auto [theta_delta, theta] = scorer.overlay(m.mixture);
  write_pgm(theta_delta - theta, -40.0, 40.0, out.add("overlay.pgm"));
  out.finalize(cfg);
  log << "search: v_t " << m.initial_score << " -> " << m.score << ", coverage " << baseline.coverage << " -> "
      << m.coverage << (m.masked ? "" : " (no mask found)") << "\n";
}

void cmd_threshold_dump(const ExperimentConfig& cfg, std::ostream& log) {
  const fs::path input = required_path(cfg, "input");
  const AudioClip clip = read_wav(input);
  const int window = cfg.get_int("threshold", "window");
  const int hop = cfg.get_int("threshold", "hop");
  const auto mt = psy::masking_threshold(clip, window, hop);

  Artifacts out(cfg.get("paths", "out_dir"));
  std::ofstream csv(out.add("thresholds.csv"), std::ios::binary);
  csv << csv_row({"frame_index", "bin_index", "freq_hz", "psd_db", "theta_db"}) << "\n";
  for (Eigen::Index f = 0; f < mt.theta.rows(); ++f)
    for (Eigen::Index k = 0; k < mt.theta.cols(); ++k)
      csv << f << ',' << k << ',' << num(psy::bin_to_freq(static_cast<int>(k), window, clip.sample_rate)) << ','
          << num(mt.normalized_psd(f, k)) << ',' << num(mt.theta(f, k)) << "\n";
  csv.close();
  write_pgm(mt.theta, out.add("threshold.pgm"));
  out.finalize(cfg);
  log << "threshold: " << mt.theta.rows() << " frames x " << mt.theta.cols() << " bins\n";
}

struct ProcessedRow {
  std::string id, target, decoded, condition;
  double coarse = 0.0, fine = 0.0;
  bool exact = false;
};

std::vector<ManifestEntry> required_manifest(const ExperimentConfig& cfg, const std::string& key) {
  auto entries = read_manifest(required_path(cfg, key));
  if (entries.empty()) throw ConfigError("paths." + key + " lists no samples");
  return entries;
}

void cmd_evaluate(const ExperimentConfig& cfg, std::ostream& log) {
  const std::uint64_t seed = cfg.get_u64("run", "seed");
  const AcousticModel model = load_required_model(cfg);
  const auto entries = required_manifest(cfg, "input");
  const auto conditions = cfg.get_strings("evaluate", "conditions");
  if (conditions.empty()) throw ConfigError("evaluate.conditions must not be empty");
  std::vector<int> hops;
  for (const auto& c : conditions) {
    if (c == "clean") {
      hops.push_back(0);
    } else if (c.rfind("relay", 0) == 0) {
      int h = 0;
      const auto r = std::from_chars(c.data() + 5, c.data() + c.size(), h);
      if (r.ec != std::errc() || r.ptr != c.data() + c.size() || h < 1)
        throw ConfigError("evaluate.conditions: bad condition '" + c + "'");
      hops.push_back(h);
    } else {
      throw ConfigError("evaluate.conditions: unknown condition '" + c + "' (use clean or relayN)");
    }
  }
  ChannelParams ch;
  ch.low_rate = cfg.get_int("relay", "low_rate");
  ch.gain_jitter_db = cfg.get_double("relay", "gain_jitter_db");
  ch.noise_sigma = cfg.get_double("relay", "noise_sigma");
  ch.reverb_decay_ms = cfg.get_double("relay", "reverb_decay_ms");
  ch.reverb_length_ms = cfg.get_double("relay", "reverb_length_ms");
  ch.reverb_mix = cfg.get_double("relay", "reverb_mix");
  ch.validate();

  const auto& tm = model.tokens();
  std::vector<AudioClip> clips;
  std::vector<Transcription> targets;
  for (const auto& e : entries) {
    clips.push_back(read_wav(e.wav));
    targets.push_back(tm.parse(e.labels));
    if (targets.back().empty()) throw ConfigError("manifest entry " + e.wav.string() + " has an empty target");
  }
  std::vector<ProcessedRow> rows(entries.size() * conditions.size());
  std::vector<double> sdr(rows.size(), 0.0);
  parallel_for(rows.size(), jobs(cfg), [&](std::size_t idx) {
    const std::size_t i = idx / conditions.size(), c = idx % conditions.size();
    AudioClip clip = clips[i];
    if (hops[c] > 0) {
      ChannelParams p = ch;
      p.seed = derive_seed(seed, "relay/" + manifest_id(entries[i]));
      clip = relay_simulate(clips[i], hops[c], p);
      sdr[idx] = si_sdr(clips[i], clip);
    }
    const Transcription dec = transcribe(model, clip);
    rows[idx] = {manifest_id(entries[i]),
                 tm.format(targets[i]),
                 tm.format(dec),
                 conditions[c],
                 sroa(targets[i], dec, Granularity::kCoarse, tm),
                 sroa(targets[i], dec, Granularity::kFine, tm),
                 dec == targets[i]};
  });

  Artifacts out(cfg.get("paths", "out_dir"));
  std::string csv = csv_row({"sample_id", "target", "decoded", "sroa_coarse", "sroa_fine", "condition"}) + "\n";
  for (const auto& r : rows) csv += csv_row({r.id, r.target, r.decoded, num(r.coarse), num(r.fine), r.condition}) + "\n";
  out.write_text("results.csv", csv);
  json summary = {{"command", cfg.command()}, {"samples", entries.size()}, {"conditions", json::object()}};
  for (std::size_t c = 0; c < conditions.size(); ++c) {
    double coarse = 0.0, fine = 0.0, exact = 0.0, sdr_sum = 0.0;
    for (std::size_t i = 0; i < entries.size(); ++i) {
      const auto& r = rows[i * conditions.size() + c];
      coarse += r.coarse;
      fine += r.fine;
      exact += r.exact ? 1.0 : 0.0;
      sdr_sum += sdr[i * conditions.size() + c];
    }
    const double n = static_cast<double>(entries.size());
    json cj = {{"mean_sroa_coarse", coarse / n}, {"mean_sroa_fine", fine / n}, {"exact_match", exact / n}};
    if (hops[c] > 0) cj["mean_si_sdr_db"] = sdr_sum / n;
    summary["conditions"][conditions[c]] = cj;
    log << conditions[c] << ": exact match " << exact / n << "\n";
  }
  out.write_json("summary.json", summary);
  out.finalize(cfg);
}

void cmd_defense(const ExperimentConfig& cfg, std::ostream& log) {
  const std::uint64_t seed = cfg.get_u64("run", "seed");
  const AcousticModel model = load_required_model(cfg);
  const int low = cfg.get_int("defense", "low_rate");
  const int restore = cfg.get_int("defense", "restore_rate");
  const auto grid = cfg.get_doubles("defense", "sigma_grid");
  const int trials = cfg.get_int("defense", "trials");
  if (grid.empty()) throw ConfigError("defense.sigma_grid must not be empty");

  const auto& tm = model.tokens();
  const auto load_set = [&](const std::vector<ManifestEntry>& entries) {
    std::vector<LabeledSample> out;
    for (const auto& e : entries) out.push_back({manifest_id(e), read_wav(e.wav), tm.parse(e.labels)});
    return out;
  };
  std::vector<std::pair<std::string, std::vector<LabeledSample>>> sets;
  sets.emplace_back("adversarial", load_set(required_manifest(cfg, "adversarial")));
  if (!cfg.get("paths", "benign").empty()) sets.emplace_back("benign", load_set(required_manifest(cfg, "benign")));

  Artifacts out(cfg.get("paths", "out_dir"));
  std::string csv = csv_row({"sample_id", "target", "decoded", "sroa_coarse", "sroa_fine", "condition"}) + "\n";
  std::string noise = csv_row({"set", "sample_id", "sigma", "success"}) + "\n";
  json summary = {{"command", cfg.command()}, {"low_rate", low}, {"restore_rate", restore}, {"sets", json::object()}};
  std::map<std::string, std::vector<NoisePoint>> mean_curves;

  for (const auto& [name, samples] : sets) {
    const DefenseReport report = defense_downsample(samples, model, low, restore, jobs(cfg));
    for (const auto& e : report.entries) {
      for (const bool after : {false, true}) {
        const Transcription& dec = after ? e.after : e.before;
        csv += csv_row({e.id, tm.format(e.target), tm.format(dec),
                        num(e.target.empty() ? 0.0 : sroa(e.target, dec, Granularity::kCoarse, tm)),
                        num(e.target.empty() ? 0.0 : sroa(e.target, dec, Granularity::kFine, tm)),
                        name + (after ? "/downsample" : "/before")}) +
               "\n";
      }
    }
    std::vector<NoisePoint> mean(grid.size());
    bool all_trend = true;
    for (const auto& s : samples) {
      const auto curve = defense_noise_probe(s.clip, model, s.target, grid, trials,
                                             derive_seed(seed, "noise/" + name + "/" + s.id), jobs(cfg));
      all_trend = all_trend && trend_non_increasing(curve);
      for (std::size_t g = 0; g < grid.size(); ++g) {
        noise += csv_row({name, s.id, num(curve[g].sigma), num(curve[g].success)}) + "\n";
        mean[g].sigma = curve[g].sigma;
        mean[g].success += curve[g].success / static_cast<double>(samples.size());
      }
    }
    json curve_json = json::array();
    for (const auto& p : mean) curve_json.push_back({{"sigma", p.sigma}, {"success", p.success}});
    summary["sets"][name] = {{"samples", samples.size()},
                             {"rate_before", report.rate_before},
                             {"rate_after", report.rate_after},
                             {"noise_curves_non_increasing", all_trend},
                             {"mean_noise_curve", curve_json}};
    mean_curves[name] = mean;
    log << name << ": success " << report.rate_before << " -> " << report.rate_after << " after resampling\n";
  }
  if (mean_curves.count("benign"))
    summary["benign_dominance"] = dominance_fraction(mean_curves["benign"], mean_curves["adversarial"]);
  out.write_text("defense.csv", csv);
  out.write_text("noise.csv", noise);
  out.write_json("summary.json", summary);
  out.finalize(cfg);
}

void cmd_synth_footage(const ExperimentConfig& cfg, std::ostream& log) {
  const auto f = synth_footage(cfg.get_double("footage", "tone_hz"), cfg.get("footage", "timbre"),
                               cfg.get_double("footage", "duration_ms"), cfg.get_double("footage", "amplitude"),
                               cfg.get_int("footage", "sample_rate"));
  if (!is_supported_wav_rate(f.rendered.sample_rate))
    throw ConfigError("footage.sample_rate must be 8000, 16000 or 48000");
  Artifacts out(cfg.get("paths", "out_dir"));
  write_wav(f.rendered, out.add("footage.wav"));
  out.write_json("footage.json", {{"command", cfg.command()},
                                  {"tone_hz", f.tone_hz},
                                  {"timbre", f.timbre},
                                  {"duration_ms", f.duration_ms},
                                  {"samples", f.rendered.size()},
                                  {"peak", peak(f.rendered.samples)}});
  out.finalize(cfg);
  log << "footage: " << f.rendered.size() << " samples\n";
}

}  // namespace

std::string sha256_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  char buf[1 << 16];
  while (in.read(buf, sizeof buf) || in.gcount() > 0) EVP_DigestUpdate(ctx, buf, static_cast<std::size_t>(in.gcount()));
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, md, &len);
  EVP_MD_CTX_free(ctx);
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
  return hex.str();
}

void run_command(const ExperimentConfig& cfg, std::ostream& log) {
  const std::string& c = cfg.command();
  if (c == "train-asr") return cmd_train_asr(cfg, log);
  if (c == "attack") return cmd_attack(cfg, log);
  if (c == "search-mask") return cmd_search_mask(cfg, log);
  if (c == "threshold-dump") return cmd_threshold_dump(cfg, log);
  if (c == "evaluate") return cmd_evaluate(cfg, log);
  if (c == "defense") return cmd_defense(cfg, log);
  if (c == "synth-footage") return cmd_synth_footage(cfg, log);
  throw ConfigError("unknown command '" + c + "'");
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Adversarial audio masking experiments", "advmask"};
  app.require_subcommand(1);

  struct Options {
    std::string config, out_dir;
    std::vector<std::string> sets;
    int jobs = -1;
    std::string input;
  };
  std::map<std::string, Options> options;
  static const std::map<std::string, std::string> descriptions{
      {"train-asr", "synthesize a corpus and train the toy recognizer"},
      {"attack", "generate a targeted perturbation"},
      {"search-mask", "search footage placements that mask a perturbation"},
      {"threshold-dump", "write the masking threshold of a WAV file"},
      {"evaluate", "score decodes of a manifest under clean and relay conditions"},
      {"defense", "run resampling and noise defenses"},
      {"synth-footage", "render one footage clip"},
  };
  for (const auto& name : ExperimentConfig::commands()) {
    auto* sub = app.add_subcommand(name, descriptions.at(name));
    auto& o = options[name];
    sub->add_option("-c,--config", o.config, "INI config file");
    sub->add_option("-s,--set", o.sets, "override, section.key=value (repeatable)");
    sub->add_option("-o,--out", o.out_dir, "output directory (paths.out_dir)");
    sub->add_option("-j,--jobs", o.jobs, "worker threads, 0 = all cores (run.jobs)");
    if (name == "threshold-dump") sub->add_option("wav", o.input, "input WAV (paths.input)");
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  const auto& o = options[command];
  try {
    ExperimentConfig cfg(command);
    if (!o.config.empty()) {
      if (!fs::exists(o.config)) throw ConfigError("config file not found: " + o.config);
      cfg.load_file(o.config);
    }
    for (const auto& s : o.sets) cfg.set(s);
    if (!o.out_dir.empty()) cfg.set("paths", "out_dir", o.out_dir);
    if (o.jobs >= 0) cfg.set("run", "jobs", std::to_string(o.jobs));
    if (!o.input.empty()) cfg.set("paths", "input", o.input);
    if (!cfg.get("paths", "bank").empty()) {
      const fs::path bank = cfg.get("paths", "bank");
      if (!fs::exists(bank)) throw ConfigError("bank file not found: " + bank.string());
      cfg.load_bank_file(bank);
      for (const auto& s : o.sets)
        if (s.rfind("bank.", 0) == 0) cfg.set(s);
      cfg.set("paths", "bank", "");
    }
    run_command(cfg, out);
    return kExitOk;
  } catch (const TrainingFailure& e) {
    err << "advmask " << command << ": training failure: " << e.what() << "\n";
    return kExitTraining;
  } catch (const PreconditionError& e) {
    err << "advmask " << command << ": precondition failed: " << e.what() << "\n";
    return kExitPrecondition;
  } catch (const Error& e) {
    err << "advmask " << command << ": " << e.what() << "\n";
    return kExitConfig;
  } catch (const fs::filesystem_error& e) {
    err << "advmask " << command << ": " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "advmask " << command << ": unexpected error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace advmask::cli
