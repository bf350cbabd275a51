#include "chartkit/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <utility>

#include "json.hpp"

namespace chartkit {

using Json = nlohmann::ordered_json;

namespace {

void reject_unknown(const Json& obj, std::initializer_list<const char*> known, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& item : obj.items()) {
    bool ok = false;
    for (const char* k : known) ok = ok || item.key() == k;
    if (!ok) throw ConfigError(where + ": unknown key '" + item.key() + "'");
  }
}

template <class T>
void read(const Json& obj, const char* key, T& out, const std::string& where) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(where + "." + key + ": wrong type");
  }
}

void read_count(const Json& obj, const char* key, std::size_t& out, const std::string& where) {
  if (!obj.contains(key)) return;
  const Json& v = obj.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    throw ConfigError(where + "." + key + ": expected a non-negative integer");
  }
  out = v.get<std::size_t>();
}

std::string text_of(const Json& v, const std::string& where) {
  if (!v.is_string()) throw ConfigError(where + ": expected a string");
  return v.get<std::string>();
}

double read_snr(const Json& v) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string() && (v.get<std::string>() == "inf" || v.get<std::string>() == "+inf")) {
    return std::numeric_limits<double>::infinity();
  }
  throw ConfigError("channel.snr_db: expected a number or \"inf\"");
}

template <class Grid>
void read_grid(const Json& obj, const char* key, Grid& g, const std::string& where) {
  if (!obj.contains(key)) return;
  const Json& j = obj.at(key);
  const std::string w = where + "." + key;
  reject_unknown(j, {"start", "stop", "step"}, w);
  read(j, "start", g.start, w);
  read(j, "stop", g.stop, w);
  read(j, "step", g.step, w);
}

template <class Grid>
Json grid_json(const Grid& g) {
  return Json{{"start", g.start}, {"stop", g.stop}, {"step", g.step}};
}

void parse_config_object(const Json& j, ExperimentConfig& cfg) {
  const std::string w = "config";
  reject_unknown(j,
                 {"seed", "scene", "channel", "estimator", "k_max", "repeats", "bench",
                  "dump_spectra", "threads", "output_dir"},
                 w);
  read(j, "seed", cfg.seed, w);
  read_count(j, "k_max", cfg.k_max, w);
  read_count(j, "repeats", cfg.repeats, w);
  read(j, "bench", cfg.bench, w);
  read(j, "dump_spectra", cfg.dump_spectra, w);
  read(j, "threads", cfg.threads, w);
  read(j, "output_dir", cfg.output_dir, w);

  if (j.contains("scene")) {
    const Json& s = j.at("scene");
    reject_unknown(s, {"area_x", "area_y", "n_ue", "n_vip", "bs_height"}, "scene");
    read(s, "area_x", cfg.scene.area_x, "scene");
    read(s, "area_y", cfg.scene.area_y, "scene");
    read_count(s, "n_ue", cfg.scene.n_ue, "scene");
    read_count(s, "n_vip", cfg.scene.n_vip, "scene");
    read(s, "bs_height", cfg.scene.bs_height, "scene");
  }
  if (j.contains("channel")) {
    const Json& c = j.at("channel");
    reject_unknown(c,
                   {"carrier_freq", "n_rx", "n_sub", "bandwidth", "path_loss_exp", "model", "snr_db",
                    "rician_k"},
                   "channel");
    read(c, "carrier_freq", cfg.channel.carrier_freq, "channel");
    read_count(c, "n_rx", cfg.channel.n_rx, "channel");
    read_count(c, "n_sub", cfg.channel.n_sub, "channel");
    read(c, "bandwidth", cfg.channel.bandwidth, "channel");
    read(c, "path_loss_exp", cfg.channel.path_loss_exp, "channel");
    if (c.contains("model")) {
      cfg.channel.model = parse_channel_model(text_of(c.at("model"), "channel.model"));
    }
    if (c.contains("snr_db")) cfg.channel.snr_db = read_snr(c.at("snr_db"));
    read(c, "rician_k", cfg.channel.rician_k, "channel");
  }
  if (j.contains("estimator")) {
    const Json& e = j.at("estimator");
    reject_unknown(e,
                   {"theta", "rho", "angle_grid", "range_grid", "subspace", "loading_factor",
                    "lr_training"},
                   "estimator");
    if (e.contains("theta")) cfg.estimator.theta = parse_theta_algo(text_of(e.at("theta"), "estimator.theta"));
    if (e.contains("rho")) cfg.estimator.rho = parse_rho_algo(text_of(e.at("rho"), "estimator.rho"));
    read_grid(e, "angle_grid", cfg.estimator.angle_grid, "estimator");
    read_grid(e, "range_grid", cfg.estimator.range_grid, "estimator");
    read(e, "loading_factor", cfg.estimator.loading_factor, "estimator");
    read_count(e, "lr_training", cfg.estimator.lr_training, "estimator");
    if (e.contains("subspace")) {
      const Json& s = e.at("subspace");
      reject_unknown(s, {"policy", "k", "tau"}, "estimator.subspace");
      const std::string policy =
          s.contains("policy") ? text_of(s.at("policy"), "estimator.subspace.policy") : "fixed";
      if (policy == "fixed") {
        FixedK f;
        read_count(s, "k", f.k, "estimator.subspace");
        cfg.estimator.policy = f;
      } else if (policy == "ratio") {
        RatioThreshold r;
        read(s, "tau", r.tau, "estimator.subspace");
        cfg.estimator.policy = r;
      } else {
        throw ConfigError("estimator.subspace.policy: expected \"fixed\" or \"ratio\"");
      }
    }
  }
}

Json config_json(const ExperimentConfig& cfg) {
  Json j;
  j["seed"] = cfg.seed;
  j["scene"] = Json{{"area_x", cfg.scene.area_x},
                    {"area_y", cfg.scene.area_y},
                    {"n_ue", cfg.scene.n_ue},
                    {"n_vip", cfg.scene.n_vip},
                    {"bs_height", cfg.scene.bs_height}};
  Json ch{{"carrier_freq", cfg.channel.carrier_freq},
          {"n_rx", cfg.channel.n_rx},
          {"n_sub", cfg.channel.n_sub},
          {"bandwidth", cfg.channel.bandwidth},
          {"path_loss_exp", cfg.channel.path_loss_exp},
          {"model", to_string(cfg.channel.model)}};
  if (std::isinf(cfg.channel.snr_db)) {
    ch["snr_db"] = "inf";
  } else {
    ch["snr_db"] = cfg.channel.snr_db;
  }
  ch["rician_k"] = cfg.channel.rician_k;
  j["channel"] = ch;
  Json sub;
  if (const auto* f = std::get_if<FixedK>(&cfg.estimator.policy)) {
    sub = Json{{"policy", "fixed"}, {"k", f->k}};
  } else {
    sub = Json{{"policy", "ratio"}, {"tau", std::get<RatioThreshold>(cfg.estimator.policy).tau}};
  }
  j["estimator"] = Json{{"theta", to_string(cfg.estimator.theta)},
                        {"rho", to_string(cfg.estimator.rho)},
                        {"angle_grid", grid_json(cfg.estimator.angle_grid)},
                        {"range_grid", grid_json(cfg.estimator.range_grid)},
                        {"subspace", sub},
                        {"loading_factor", cfg.estimator.loading_factor},
                        {"lr_training", cfg.estimator.lr_training}};
  j["k_max"] = cfg.k_max;
  j["repeats"] = cfg.repeats;
  j["bench"] = cfg.bench;
  j["dump_spectra"] = cfg.dump_spectra;
  j["threads"] = cfg.threads;
  j["output_dir"] = cfg.output_dir;
  return j;
}

Json parse_text(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("config: invalid JSON (") + e.what() + ")");
  }
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open '" + path.string() + "' for writing");
  out << content;
  if (!out) throw ConfigError("failed writing '" + path.string() + "'");
}

void note(std::ostream* log, const std::string& msg) {
  if (log != nullptr) *log << msg << '\n' << std::flush;
}

std::string pair_name(ThetaAlgo t, RhoAlgo r) { return to_string(t) + "/" + to_string(r); }

}  // namespace

const char* toolkit_version() { return CHARTKIT_VERSION; }

void ExperimentConfig::validate() const {
  scene.validate();
  channel.validate();
  if (is_metric(estimator.rho) && channel.n_sub < 2) {
    throw ConfigError(to_string(estimator.rho) + " range estimation needs n_sub >= 2");
  }
  if (estimator.rho == RhoAlgo::Lr) {
    if (estimator.lr_training > scene.n_ue) {
      throw ConfigError("lr_training (" + std::to_string(estimator.lr_training) +
                        ") exceeds n_ue (" + std::to_string(scene.n_ue) + ")");
    }
    if (estimator.lr_training < 2) throw ConfigError("lr_training must be at least 2");
  }
  if (!valid_k(scene.n_ue, k_max)) {
    throw ConfigError("k_max = " + std::to_string(k_max) + " is invalid for n_ue = " +
                      std::to_string(scene.n_ue) + " (need 1 <= k and 2n - 3k - 1 > 0)");
  }
  if (repeats < 1) throw ConfigError("repeats must be >= 1");
  (void)grid_size(estimator.angle_grid.start, estimator.angle_grid.stop, estimator.angle_grid.step);
  if (estimator.angle_grid.start < 0.0 || estimator.angle_grid.stop > 180.0) {
    throw ConfigError("angle grid must lie within [0, 180] degrees");
  }
  (void)grid_size(estimator.range_grid.start, estimator.range_grid.stop, estimator.range_grid.step);
  if (is_metric(estimator.rho)) check_unambiguous(estimator.range_grid, channel.subcarrier_spacing());
  if (!(estimator.loading_factor >= 0.0)) throw ConfigError("loading_factor must be >= 0");
}

void resolve_seeds(ExperimentConfig& cfg) {
  cfg.scene.rng_seed = cfg.seed;
  cfg.channel.rng_seed = mix_seed(cfg.seed);
}

ExperimentConfig config_from_json(const std::string& text) {
  Json j = parse_text(text);
  if (j.is_object() && j.contains("config") && j.contains("version")) j = j.at("config");
  ExperimentConfig cfg;
  parse_config_object(j, cfg);
  resolve_seeds(cfg);
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return config_from_json(ss.str());
}

std::string config_to_json(const ExperimentConfig& cfg) { return config_json(cfg).dump(2); }

ExperimentResult evaluate(const ExperimentConfig& cfg, const Dataset& data) {
  Estimator est(cfg.estimator, data.channel);
  est.fit(data);
  const auto estimates = estimate_all(est, data, cfg.threads);
  ExperimentResult res;
  res.chart = build_chart(estimates, data.scene, is_metric(cfg.estimator.rho));
  const auto est_pts = res.chart.estimated();
  res.report = quality_curve(res.chart.truth, est_pts, cfg.k_max, cfg.threads);
  return res;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg_in, std::ostream* log) {
  ExperimentConfig cfg = cfg_in;
  resolve_seeds(cfg);
  cfg.validate();

  const std::filesystem::path dir(cfg.output_dir);
  std::filesystem::create_directories(dir);

  note(log, "generating " + std::to_string(cfg.scene.n_ue) + " UEs (" + to_string(cfg.channel.model) +
                ", " + std::to_string(cfg.channel.n_sub) + " subcarriers)");
  const Dataset data = generate_dataset(cfg.scene, cfg.channel, cfg.threads);

  note(log, "estimating with " + pair_name(cfg.estimator.theta, cfg.estimator.rho));
  Estimator est(cfg.estimator, data.channel);
  est.fit(data);
  std::vector<UeSpectra> spectra;
  const auto estimates = cfg.dump_spectra ? estimate_all(est, data, cfg.threads, spectra)
                                          : estimate_all(est, data, cfg.threads);

  ExperimentResult res;
  res.chart = build_chart(estimates, data.scene, is_metric(cfg.estimator.rho));
  note(log, "scoring chart (k_max = " + std::to_string(cfg.k_max) + ")");
  res.report = quality_curve(res.chart.truth, res.chart.estimated(), cfg.k_max, cfg.threads);

  {
    std::ostringstream os;
    write_chart_csv(res.chart, os);
    write_file(dir / "chart.csv", os.str());
  }
  {
    std::ostringstream os;
    write_metrics_json(res.report, os);
    write_file(dir / "metrics.json", os.str());
  }
  if (cfg.dump_spectra) {
    const auto sdir = dir / "spectra";
    std::filesystem::create_directories(sdir);
    char name[64];
    for (std::size_t i = 0; i < spectra.size(); ++i) {
      std::ostringstream os;
      write_spectrum_csv(spectra[i].theta, os);
      std::snprintf(name, sizeof name, "ue_%05zu_theta.csv", i);
      write_file(sdir / name, os.str());
      if (spectra[i].rho) {
        std::ostringstream rs;
        write_spectrum_csv(*spectra[i].rho, rs);
        std::snprintf(name, sizeof name, "ue_%05zu_rho.csv", i);
        write_file(sdir / name, rs.str());
      }
    }
  }
  if (cfg.bench) {
    note(log, "timing " + std::to_string(cfg.repeats) + " repeats");
    res.timing = time_pipeline(cfg.estimator, data, cfg.repeats);
    std::ostringstream os;
    write_timing_json(std::span<const TimingRecord>(&*res.timing, 1), os);
    write_file(dir / "runtime.json", os.str());
  }

  Json manifest;
  manifest["toolkit"] = "chartkit";
  manifest["version"] = toolkit_version();
  manifest["config"] = config_json(cfg);
  manifest["derived_seeds"] = Json{{"scene", cfg.scene.rng_seed}, {"channel", cfg.channel.rng_seed}};
  write_file(dir / "manifest.json", manifest.dump(2) + "\n");

  char summary[128];
  std::snprintf(summary, sizeof summary, "TW(%zu) = %.4f  CT(%zu) = %.4f", cfg.k_max,
                res.report.tw.back(), cfg.k_max, res.report.ct.back());
  note(log, summary);
  return res;
}

bool SuiteResult::complete() const {
  for (const auto& c : cells) {
    if (!c.error.empty()) return false;
  }
  return true;
}

const SuiteCell& SuiteResult::cell(ThetaAlgo t, RhoAlgo r, ChannelModel m) const {
  for (const auto& c : cells) {
    if (c.theta == t && c.rho == r && c.model == m) return c;
  }
  throw DomainError("suite has no cell " + pair_name(t, r) + " " + to_string(m));
}

SuiteResult run_suite(const SuiteConfig& cfg, std::ostream* log) {
  ExperimentConfig base = cfg.base;
  resolve_seeds(base);
  base.scene.validate();
  base.channel.validate();

  SuiteResult result;
  result.k = base.k_max;
  std::map<std::pair<int, std::size_t>, Dataset> datasets;

  for (ChannelModel m : cfg.models) {
    for (ThetaAlgo t : cfg.thetas) {
      for (RhoAlgo r : cfg.rhos) {
        SuiteCell cell{t, r, m, base.channel.n_sub, std::nullopt, std::nullopt, {}};
        if (!is_metric(r) && cfg.magnitude_n_sub) cell.n_sub = *cfg.magnitude_n_sub;
        note(log, "suite cell " + pair_name(t, r) + " " + to_string(m) + " (n_sub = " +
                      std::to_string(cell.n_sub) + ")");
        try {
          ExperimentConfig run = base;
          run.channel.model = m;
          run.channel.n_sub = cell.n_sub;
          run.estimator.theta = t;
          run.estimator.rho = r;
          run.validate();
          const auto key = std::make_pair(static_cast<int>(m), cell.n_sub);
          auto it = datasets.find(key);
          if (it == datasets.end()) {
            it = datasets.emplace(key, generate_dataset(run.scene, run.channel, run.threads)).first;
          }
          const ExperimentResult res = evaluate(run, it->second);
          cell.tw = res.report.tw.back();
          cell.ct = res.report.ct.back();
          if (base.bench) result.timings.push_back(time_pipeline(run.estimator, it->second, run.repeats));
        } catch (const std::exception& e) {
          cell.error = e.what();
          note(log, "  failed: " + cell.error);
        }
        result.cells.push_back(std::move(cell));
      }
    }
  }
  return result;
}

SuiteConfig suite_from_json(const std::string& text) {
  const Json j = parse_text(text);
  reject_unknown(j, {"base", "thetas", "rhos", "models", "magnitude_n_sub"}, "suite");
  SuiteConfig cfg;
  if (j.contains("base")) {
    parse_config_object(j.at("base"), cfg.base);
    resolve_seeds(cfg.base);
  }
  auto strings = [&](const char* key) {
    std::vector<std::string> out;
    if (!j.at(key).is_array()) throw ConfigError(std::string("suite.") + key + ": expected an array");
    for (const auto& v : j.at(key)) out.push_back(text_of(v, std::string("suite.") + key));
    return out;
  };
  if (j.contains("thetas")) {
    cfg.thetas.clear();
    for (const auto& s : strings("thetas")) cfg.thetas.push_back(parse_theta_algo(s));
  }
  if (j.contains("rhos")) {
    cfg.rhos.clear();
    for (const auto& s : strings("rhos")) cfg.rhos.push_back(parse_rho_algo(s));
  }
  if (j.contains("models")) {
    cfg.models.clear();
    for (const auto& s : strings("models")) cfg.models.push_back(parse_channel_model(s));
  }
  if (j.contains("magnitude_n_sub")) {
    const Json& v = j.at("magnitude_n_sub");
    if (v.is_null()) {
      cfg.magnitude_n_sub.reset();
    } else if (v.is_number_integer() && v.get<long long>() >= 1) {
      cfg.magnitude_n_sub = v.get<std::size_t>();
    } else {
      throw ConfigError("suite.magnitude_n_sub: expected a positive integer or null");
    }
  }
  return cfg;
}

void write_suite_json(const SuiteResult& result, std::ostream& out) {
  Json cells = Json::array();
  for (const auto& c : result.cells) {
    Json j{{"theta_algo", to_string(c.theta)},
           {"rho_algo", to_string(c.rho)},
           {"channel_model", to_string(c.model)},
           {"n_sub", c.n_sub}};
    j["tw"] = c.tw ? Json(*c.tw) : Json(nullptr);
    j["ct"] = c.ct ? Json(*c.ct) : Json(nullptr);
    if (!c.error.empty()) j["error"] = c.error;
    cells.push_back(std::move(j));
  }
  Json root{{"k", result.k}, {"cells", cells}};
  if (!result.timings.empty()) {
    std::ostringstream os;
    write_timing_json(result.timings, os);
    root["timings"] = Json::parse(os.str());
  }
  out << root.dump(2) << '\n';
}

void write_suite_table(const SuiteResult& result, std::ostream& out) {
  std::vector<std::pair<ThetaAlgo, RhoAlgo>> pairs;
  std::vector<ChannelModel> models;
  for (const auto& c : result.cells) {
    const auto p = std::make_pair(c.theta, c.rho);
    if (std::find(pairs.begin(), pairs.end(), p) == pairs.end()) pairs.push_back(p);
    if (std::find(models.begin(), models.end(), c.model) == models.end()) models.push_back(c.model);
  }

  char buf[64];
  std::snprintf(buf, sizeof buf, "%-8s %-6s", "Measure", "Channel");
  out << buf;
  for (const auto& p : pairs) {
    std::snprintf(buf, sizeof buf, " %16s", pair_name(p.first, p.second).c_str());
    out << buf;
  }
  out << '\n';
  for (int measure = 0; measure < 2; ++measure) {
    for (std::size_t mi = 0; mi < models.size(); ++mi) {
      std::snprintf(buf, sizeof buf, "%-8s %-6s", mi == 0 ? (measure == 0 ? "TW" : "CT") : "",
                    to_string(models[mi]).c_str());
      out << buf;
      for (const auto& p : pairs) {
        const SuiteCell& c = result.cell(p.first, p.second, models[mi]);
        const auto& v = measure == 0 ? c.tw : c.ct;
        if (v) {
          std::snprintf(buf, sizeof buf, " %16.4f", *v);
        } else {
          std::snprintf(buf, sizeof buf, " %16s", "failed");
        }
        out << buf;
      }
      out << '\n';
    }
  }
  out << "(k = " << result.k << ")\n";
}

}  // namespace chartkit
