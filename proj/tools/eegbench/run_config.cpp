#include "eegbench/run_config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "eegshift/binary_io.hpp"
#include "json.hpp"

namespace eegbench {

using nlohmann::json;
using namespace eegshift;

namespace {

json generator_json(const GeneratorConfig& g) {
  return {{"n_subjects", g.n_subjects},
          {"trials_per_subject", g.trials_per_subject},
          {"n_channels", g.n_channels},
          {"fs", g.fs},
          {"trial_seconds", g.trial_seconds},
          {"alpha_hz", g.alpha_hz},
          {"lateralization_gain", g.lateralization_gain},
          {"noise_sd", g.noise_sd},
          {"subject_gain_spread", g.subject_gain_spread},
          {"master_seed", g.master_seed}};
}

GeneratorConfig generator_from(const json& j, GeneratorConfig g) {
  g.n_subjects = j.value("n_subjects", g.n_subjects);
  g.trials_per_subject = j.value("trials_per_subject", g.trials_per_subject);
  g.n_channels = j.value("n_channels", g.n_channels);
  g.fs = j.value("fs", g.fs);
  g.trial_seconds = j.value("trial_seconds", g.trial_seconds);
  g.alpha_hz = j.value("alpha_hz", g.alpha_hz);
  g.lateralization_gain = j.value("lateralization_gain", g.lateralization_gain);
  g.noise_sd = j.value("noise_sd", g.noise_sd);
  g.subject_gain_spread = j.value("subject_gain_spread", g.subject_gain_spread);
  g.master_seed = j.value("master_seed", g.master_seed);
  return g;
}

json hyper_json(const HyperParams& h) {
  return {
      {"tree", {{"max_depth", h.tree.max_depth}, {"min_leaf", h.tree.min_leaf}}},
      {"forest",
       {{"n_trees", h.forest.n_trees}, {"bootstrap", h.forest.bootstrap}, {"features_per_split", h.forest.features_per_split}}},
      {"gboost", {{"rounds", h.gboost.rounds}, {"learning_rate", h.gboost.learning_rate}, {"max_depth", h.gboost.max_depth}}},
      {"xgb",
       {{"rounds", h.xgb.rounds},
        {"learning_rate", h.xgb.learning_rate},
        {"max_depth", h.xgb.max_depth},
        {"lambda", h.xgb.lambda},
        {"gamma", h.xgb.gamma}}},
      {"ada", {{"rounds", h.ada.rounds}, {"stump_depth", h.ada.stump_depth}}},
      {"gnb", {{"var_smoothing", h.gnb.var_smoothing}}},
      {"linsvc", {{"C", h.linsvc.C}, {"epochs", h.linsvc.epochs}, {"tol", h.linsvc.tol}}},
      {"rbfsvc",
       {{"C", h.rbfsvc.C}, {"gamma", h.rbfsvc.gamma}, {"tol", h.rbfsvc.tol}, {"max_iterations", h.rbfsvc.max_iterations}}},
  };
}

HyperParams hyper_from(const json& j) {
  HyperParams h;
  const json empty = json::object();
  auto section = [&](const char* name) -> const json& { return j.contains(name) ? j.at(name) : empty; };
  const json& t = section("tree");
  h.tree.max_depth = t.value("max_depth", h.tree.max_depth);
  h.tree.min_leaf = t.value("min_leaf", h.tree.min_leaf);
  const json& f = section("forest");
  h.forest.n_trees = f.value("n_trees", h.forest.n_trees);
  h.forest.bootstrap = f.value("bootstrap", h.forest.bootstrap);
  h.forest.features_per_split = f.value("features_per_split", h.forest.features_per_split);
  const json& g = section("gboost");
  h.gboost.rounds = g.value("rounds", h.gboost.rounds);
  h.gboost.learning_rate = g.value("learning_rate", h.gboost.learning_rate);
  h.gboost.max_depth = g.value("max_depth", h.gboost.max_depth);
  const json& x = section("xgb");
  h.xgb.rounds = x.value("rounds", h.xgb.rounds);
  h.xgb.learning_rate = x.value("learning_rate", h.xgb.learning_rate);
  h.xgb.max_depth = x.value("max_depth", h.xgb.max_depth);
  h.xgb.lambda = x.value("lambda", h.xgb.lambda);
  h.xgb.gamma = x.value("gamma", h.xgb.gamma);
  const json& a = section("ada");
  h.ada.rounds = a.value("rounds", h.ada.rounds);
  h.ada.stump_depth = a.value("stump_depth", h.ada.stump_depth);
  h.gnb.var_smoothing = section("gnb").value("var_smoothing", h.gnb.var_smoothing);
  const json& l = section("linsvc");
  h.linsvc.C = l.value("C", h.linsvc.C);
  h.linsvc.epochs = l.value("epochs", h.linsvc.epochs);
  h.linsvc.tol = l.value("tol", h.linsvc.tol);
  const json& r = section("rbfsvc");
  h.rbfsvc.C = r.value("C", h.rbfsvc.C);
  h.rbfsvc.gamma = r.value("gamma", h.rbfsvc.gamma);
  h.rbfsvc.tol = r.value("tol", h.rbfsvc.tol);
  h.rbfsvc.max_iterations = r.value("max_iterations", h.rbfsvc.max_iterations);
  return h;
}

}  // namespace

RunConfig RunConfig::defaults() {
  RunConfig c;
  c.pa.master_seed = 1;
  c.lg.master_seed = 1;
  return c;
}

std::string RunConfig::to_json() const {
  const json j = {
      {"version", kVersion},
      {"generator", {{"pa", generator_json(pa)}, {"lg", generator_json(lg)}}},
      {"filter", {{"low_hz", filter_low_hz}, {"high_hz", filter_high_hz}, {"taps", filter_taps}}},
      {"hyperparams", hyper_json(hp)},
      {"split",
       {{"train_frac", split.train_frac},
        {"cv_frac", split.cv_frac},
        {"test_frac", split.test_frac},
        {"split_seed", split.split_seed}}},
      {"n_seeds", n_seeds},
  };
  return j.dump(2);
}

RunConfig RunConfig::from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
  const int version = j.value("version", -1);
  if (version != kVersion) throw std::invalid_argument("config version must be " + std::to_string(kVersion));
  RunConfig c = defaults();
  try {
    if (j.contains("generator")) {
      const json& g = j.at("generator");
      if (g.contains("pa")) c.pa = generator_from(g.at("pa"), c.pa);
      if (g.contains("lg")) c.lg = generator_from(g.at("lg"), c.lg);
    }
    if (j.contains("filter")) {
      const json& f = j.at("filter");
      c.filter_low_hz = f.value("low_hz", c.filter_low_hz);
      c.filter_high_hz = f.value("high_hz", c.filter_high_hz);
      c.filter_taps = f.value("taps", c.filter_taps);
    }
    if (j.contains("hyperparams")) c.hp = hyper_from(j.at("hyperparams"));
    if (j.contains("split")) {
      const json& s = j.at("split");
      c.split.train_frac = s.value("train_frac", c.split.train_frac);
      c.split.cv_frac = s.value("cv_frac", c.split.cv_frac);
      c.split.test_frac = s.value("test_frac", c.split.test_frac);
      c.split.split_seed = s.value("split_seed", c.split.split_seed);
    }
    c.n_seeds = j.value("n_seeds", c.n_seeds);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("config field has the wrong type: ") + e.what());
  }
  return c;
}

RunConfig RunConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::ios_base::failure("cannot open config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

FilterSpec RunConfig::filter_for(double fs) const {
  FilterSpec f = FilterSpec::for_rate(fs);
  f.low_hz = filter_low_hz;
  f.high_hz = filter_high_hz;
  if (filter_taps != 0) f.taps = filter_taps;
  return f;
}

void RunConfig::validate() const {
  pa.validate();
  lg.validate();
  filter_for(pa.fs).validate();
  filter_for(lg.fs).validate();
  split.validate();
  if (n_seeds < 1) throw std::invalid_argument("n_seeds (--seeds) must be >= 1");
  if (hp.tree.max_depth < 1 || hp.gboost.max_depth < 1 || hp.xgb.max_depth < 1 || hp.ada.stump_depth < 1) {
    throw std::invalid_argument("tree depths must be >= 1");
  }
  if (hp.forest.n_trees < 1) throw std::invalid_argument("forest.n_trees must be >= 1");
  if (!(hp.gboost.learning_rate > 0.0) || !(hp.xgb.learning_rate > 0.0)) throw std::invalid_argument("learning rates must be > 0");
  if (!(hp.xgb.lambda >= 0.0) || !(hp.xgb.gamma >= 0.0)) throw std::invalid_argument("xgb.lambda and xgb.gamma must be >= 0");
  if (!(hp.linsvc.C > 0.0) || !(hp.rbfsvc.C > 0.0)) throw std::invalid_argument("SVM C must be > 0");
  if (!(hp.gnb.var_smoothing >= 0.0)) throw std::invalid_argument("gnb.var_smoothing must be >= 0");
}

std::string RunConfig::hash() const { return hex_digest(fnv1a64(to_json())); }

}  // namespace eegbench
