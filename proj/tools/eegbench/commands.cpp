#include "eegbench/commands.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "eegbench/run_config.hpp"
#include "eegshift/binary_io.hpp"
#include "eegshift/datamodel.hpp"
#include "eegshift/dsp.hpp"
#include "eegshift/harness.hpp"
#include "eegshift/results_io.hpp"
#include "eegshift/synth.hpp"

namespace eegbench {

using namespace eegshift;
namespace fs = std::filesystem;

namespace {

/// Maps onto exit code 3.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void write_text(const fs::path& path, const std::string& text) {
  try {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    write_file_bytes(path.string(), {reinterpret_cast<const std::uint8_t*>(text.data()), text.size()});
  } catch (const std::exception& e) {
    throw IoError("cannot write " + path.string() + ": " + e.what());
  }
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Dataset load_dataset(const std::string& path) {
  try {
    return read_dataset(path);
  } catch (const DatasetError& e) {
    // unreadable and corrupt files are both input failures
    throw IoError(path + ": " + e.what());
  }
}

std::string file_digest(const std::string& path) {
  const auto bytes = read_file_bytes(path);
  return hex_digest(fnv1a64({reinterpret_cast<const char*>(bytes.data()), bytes.size()}));
}

RunConfig base_config(const std::string& config_path) {
  if (config_path.empty()) return RunConfig::defaults();
  try {
    return RunConfig::load(config_path);
  } catch (const std::ios_base::failure& e) {
    throw IoError(e.what());
  }
}

std::vector<ModelKind> parse_model_list(const std::vector<std::string>& tokens) {
  if (tokens.empty()) return {kAllModels.begin(), kAllModels.end()};
  std::vector<bool> wanted(kAllModels.size(), false);
  for (const std::string& t : tokens) {
    const ModelKind k = parse_model_kind(t);
    for (std::size_t i = 0; i < kAllModels.size(); ++i)
      if (kAllModels[i] == k) wanted[i] = true;
  }
  std::vector<ModelKind> out;
  for (std::size_t i = 0; i < kAllModels.size(); ++i)
    if (wanted[i]) out.push_back(kAllModels[i]);
  return out;
}

struct GeneratorFlags {
  std::optional<std::uint32_t> subjects;
  std::optional<std::uint32_t> trials;
  std::optional<std::uint16_t> channels;
  std::optional<std::uint64_t> seed;
  std::optional<double> fs;
  std::optional<double> seconds;
  std::optional<double> alpha_hz;
  std::optional<double> kappa;
  std::optional<double> noise;
  std::optional<double> gain_spread;

  void add_to(CLI::App& cmd) {
    cmd.add_option("--subjects", subjects, "Number of subjects");
    cmd.add_option("--trials", trials, "Trials per subject");
    cmd.add_option("--channels", channels, "Electrode count");
    cmd.add_option("--seed", seed, "Master seed");
    cmd.add_option("--fs", fs, "Sampling rate in Hz");
    cmd.add_option("--seconds", seconds, "Trial length in seconds");
    cmd.add_option("--alpha-hz", alpha_hz, "Alpha rhythm frequency");
    cmd.add_option("--kappa", kappa, "Lateralization gain");
    cmd.add_option("--noise", noise, "White noise standard deviation");
    cmd.add_option("--gain-spread", gain_spread, "Log-normal spread of subject gains");
  }

  void apply(GeneratorConfig& g) const {
    if (subjects) g.n_subjects = *subjects;
    if (trials) g.trials_per_subject = *trials;
    if (channels) g.n_channels = *channels;
    if (seed) g.master_seed = *seed;
    if (fs) g.fs = *fs;
    if (seconds) g.trial_seconds = *seconds;
    if (alpha_hz) g.alpha_hz = *alpha_hz;
    if (kappa) g.lateralization_gain = *kappa;
    if (noise) g.noise_sd = *noise;
    if (gain_spread) g.subject_gain_spread = *gain_spread;
  }
};

struct FilterFlags {
  std::optional<double> low;
  std::optional<double> high;
  std::optional<std::size_t> taps;

  void add_to(CLI::App& cmd) {
    cmd.add_option("--low-hz", low, "Band-pass lower edge");
    cmd.add_option("--high-hz", high, "Band-pass upper edge");
    cmd.add_option("--taps", taps, "FIR length (odd)");
  }

  void apply(RunConfig& c) const {
    if (low) c.filter_low_hz = *low;
    if (high) c.filter_high_hz = *high;
    if (taps) c.filter_taps = *taps;
  }
};

struct SynthArgs {
  std::string config;
  std::string paradigm;
  std::string out;
  unsigned threads = 1;
  GeneratorFlags gen;
};

int cmd_synth(const SynthArgs& a, std::ostream& out) {
  const Paradigm p = parse_paradigm(a.paradigm);
  RunConfig cfg = base_config(a.config);
  GeneratorConfig& g = cfg.generator(p);
  a.gen.apply(g);
  g.validate();

  const Dataset ds = generate_dataset(p, g, a.threads);
  const fs::path path = a.out.empty() ? fs::path(default_output_dir()) / (std::string(short_name(p)) + ".eegt")
                                      : fs::path(a.out);
  try {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    write_dataset(ds, path.string());
  } catch (const std::exception& e) {
    throw IoError("cannot write " + path.string() + ": " + e.what());
  }
  out << "wrote " << ds.trials.size() << " trials from " << ds.subjects().size() << " subjects (" << short_name(p)
      << ", config_hash " << ds.manifest.config_hash << ") to " << path.string() << '\n';
  return kExitOk;
}

struct FeaturizeArgs {
  std::string config;
  std::string dataset;
  std::string out;
  unsigned threads = 1;
  FilterFlags filter;
};

int cmd_featurize(const FeaturizeArgs& a, std::ostream& out) {
  RunConfig cfg = base_config(a.config);
  a.filter.apply(cfg);
  const Dataset ds = load_dataset(a.dataset);
  const FilterSpec spec = cfg.filter_for(ds.manifest.fs);
  spec.validate();

  const LabeledMatrix m = featurize_dataset(ds, spec, a.threads);
  std::ostringstream csv;
  write_feature_csv(csv, m);
  const fs::path path = a.out.empty()
                            ? fs::path(default_output_dir()) / (fs::path(a.dataset).stem().string() + "_features.csv")
                            : fs::path(a.out);
  write_text(path, csv.str());
  out << "wrote " << m.size() << " rows x " << (2 + m.features()) << " columns to " << path.string() << '\n';
  return kExitOk;
}

struct MatrixArgs {
  std::string config;
  std::string pa_path;
  std::string lg_path;
  std::string out_dir;
  std::vector<std::string> models;
  std::optional<std::size_t> n_seeds;
  std::optional<std::uint64_t> split_seed;
  unsigned threads = 1;
  bool timing = false;
  FilterFlags filter;
};

int cmd_matrix(const MatrixArgs& a, std::ostream& out) {
  RunConfig cfg = base_config(a.config);
  a.filter.apply(cfg);
  if (a.n_seeds) cfg.n_seeds = *a.n_seeds;
  if (a.split_seed) cfg.split.split_seed = *a.split_seed;
  cfg.split.validate();
  if (cfg.n_seeds < 1) throw std::invalid_argument("n_seeds (--seeds) must be >= 1");
  RunOptions opts;
  opts.threads = a.threads;
  opts.models = parse_model_list(a.models);

  const Dataset pa = load_dataset(a.pa_path);
  const Dataset lg = load_dataset(a.lg_path);
  if (pa.manifest.paradigm != Paradigm::ProAntisaccade)
    throw std::invalid_argument(a.pa_path + " is not a pro/antisaccade dataset");
  if (lg.manifest.paradigm != Paradigm::LargeGrid) throw std::invalid_argument(a.lg_path + " is not a large-grid dataset");
  const FilterSpec pa_spec = cfg.filter_for(pa.manifest.fs);
  const FilterSpec lg_spec = cfg.filter_for(lg.manifest.fs);
  pa_spec.validate();
  lg_spec.validate();

  // Generator sections are irrelevant here; the dataset digests stand in for them.
  std::string models_token;
  for (ModelKind k : opts.models) models_token += std::string(short_name(k)) + ",";
  const std::string config_hash = hex_digest(fnv1a64(cfg.to_json() + "|" + models_token + "|" + file_digest(a.pa_path) +
                                                     "|" + file_digest(a.lg_path)));

  const LabeledMatrix pa_x = featurize_dataset(pa, pa_spec, a.threads);
  const LabeledMatrix lg_x = featurize_dataset(lg, lg_spec, a.threads);
  ResultMatrix result = run_matrix(pa_x, lg_x, cfg.split, cfg.hp, cfg.n_seeds, opts);
  result.config_hash = config_hash;

  const fs::path dir = a.out_dir.empty() ? fs::path(default_output_dir()) : fs::path(a.out_dir);
  std::ostringstream csv, tables, gap;
  write_results_csv(csv, result, CsvWriteOptions{a.timing});
  write_markdown_report(tables, result, a.timing);
  const GapReport all = robustness_gap(result);
  write_gap_report(gap, all, config_hash);
  std::vector<ModelKind> ensembles;
  for (ModelKind k : kTreeEnsembleModels)
    if (result.has_model(k)) ensembles.push_back(k);
  if (!ensembles.empty() && ensembles.size() != result.models.size()) {
    const GapReport sub = robustness_gap(result, ensembles);
    gap << "# tree ensembles only\n";
    write_gap_report(gap, sub, config_hash);
  }

  write_text(dir / "results.csv", csv.str());
  write_text(dir / "tables.md", tables.str());
  write_text(dir / "gap.txt", gap.str());
  write_text(dir / "config.json", cfg.to_json() + "\n");

  write_summary_table(out, result);
  char buf[160];
  std::snprintf(buf, sizeof buf, "drop_PA %.1f pp, drop_LG %.1f pp, gap %.2f pp\n", 100.0 * all.avg_drop_pa,
                100.0 * all.avg_drop_lg, 100.0 * all.gap);
  out << buf;
  out << "config_hash " << config_hash << ", outputs in " << dir.string() << '\n';
  return kExitOk;
}

struct ReportArgs {
  std::string results;
  std::string out;
};

int cmd_report(const ReportArgs& a, std::ostream& out) {
  std::istringstream in(read_text(a.results));
  const ResultMatrix m = read_results_csv(in);
  std::ostringstream md;
  write_markdown_report(md, m, true);
  md << '\n' << summary_average_line(m) << '\n';
  const GapReport gap = robustness_gap(m);
  char buf[160];
  std::snprintf(buf, sizeof buf, "drop_PA %.1f pp, drop_LG %.1f pp\n", 100.0 * gap.avg_drop_pa, 100.0 * gap.avg_drop_lg);
  md << buf;
  if (a.out.empty()) {
    out << md.str();
  } else {
    write_text(a.out, md.str());
    out << "wrote " << a.out << '\n';
  }
  return kExitOk;
}

}  // namespace

std::string default_output_dir() {
  const char* env = std::getenv("EEGBENCH_OUT_DIR");
  return env && *env ? std::string(env) : std::string(".");
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Synthetic EEG gaze-direction benchmark"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "eegbench 0.1.0");

  SynthArgs synth;
  CLI::App* synth_cmd = app.add_subcommand("synth", "Generate a synthetic EEGT dataset");
  synth_cmd->add_option("--config", synth.config, "RunConfig JSON file");
  synth_cmd->add_option("--paradigm", synth.paradigm, "pa or lg")->required();
  synth_cmd->add_option("-o,--out", synth.out, "Output file");
  synth_cmd->add_option("--threads", synth.threads, "Worker threads")->check(CLI::Range(1u, 256u));
  synth.gen.add_to(*synth_cmd);

  FeaturizeArgs feat;
  CLI::App* feat_cmd = app.add_subcommand("featurize", "Write alpha-band features of a dataset as CSV");
  feat_cmd->add_option("dataset", feat.dataset, "EEGT file")->required();
  feat_cmd->add_option("--config", feat.config, "RunConfig JSON file");
  feat_cmd->add_option("-o,--out", feat.out, "Output CSV");
  feat_cmd->add_option("--threads", feat.threads, "Worker threads")->check(CLI::Range(1u, 256u));
  feat.filter.add_to(*feat_cmd);

  MatrixArgs mat;
  CLI::App* mat_cmd = app.add_subcommand("matrix", "Run the four train/test paradigm combinations");
  mat_cmd->add_option("pa", mat.pa_path, "Pro/antisaccade EEGT file")->required();
  mat_cmd->add_option("lg", mat.lg_path, "Large-grid EEGT file")->required();
  mat_cmd->add_option("--config", mat.config, "RunConfig JSON file");
  mat_cmd->add_option("-o,--out-dir", mat.out_dir, "Directory for results.csv, tables.md, gap.txt");
  mat_cmd->add_option("--models", mat.models, "Comma-separated model list")->delimiter(',');
  mat_cmd->add_option("--seeds", mat.n_seeds, "Training seeds per cell");
  mat_cmd->add_option("--split-seed", mat.split_seed, "Subject split seed");
  mat_cmd->add_option("--threads", mat.threads, "Worker threads")->check(CLI::Range(1u, 256u));
  mat_cmd->add_flag("--timing", mat.timing, "Record wall-clock times (results become run-dependent)");
  mat.filter.add_to(*mat_cmd);

  ReportArgs rep;
  CLI::App* rep_cmd = app.add_subcommand("report", "Render results.csv as Markdown tables");
  rep_cmd->add_option("results", rep.results, "results.csv")->required();
  rep_cmd->add_option("-o,--out", rep.out, "Output Markdown file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << "eegbench 0.1.0\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (synth_cmd->parsed()) return cmd_synth(synth, out);
    if (feat_cmd->parsed()) return cmd_featurize(feat, out);
    if (mat_cmd->parsed()) return cmd_matrix(mat, out);
    if (rep_cmd->parsed()) return cmd_report(rep, out);
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::ios_base::failure& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const ResultsFormatError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("eegbench");
  for (const std::string& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace eegbench
