#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "jscc/analytic.hpp"
#include "jscc/errors.hpp"
#include "jscc/exponents.hpp"
#include "jscc/montecarlo.hpp"
#include "jscc/optimizer.hpp"
#include "jscc/staircase.hpp"

namespace jscc::cli {

namespace {

using json = nlohmann::ordered_json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ";" : "") + num(v[i]);
  return s;
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

// Everything a run depends on. Serialized into every output so a run can be
// reproduced from its own metadata.
struct Scenario {
  std::string command;
  int mt = 1;
  int mr = 1;
  int blocks = 1;
  std::optional<double> b;
  std::string b_range;
  std::vector<std::string> schemes;
  std::vector<std::string> layers;
  std::string snr_db;
  std::int64_t trials = 100000;
  std::uint64_t seed = 1;
  int shards = 1;
  double epsilon0 = 0.01;
  double tilt = 0.0;
  double fit_fraction = 0.5;
  double tolerance = 0.1;
  std::vector<double> gains;
  std::vector<double> shares;
  std::string rate_grid = "0.25:8:0.25";
  double share_step = 0.1;
  std::string evaluator = "auto";
  bool refine = false;
  bool emit_grid = false;
  std::string format = "csv";
};

json to_json(const Scenario& s) {
  json j;
  j["command"] = s.command;
  j["mt"] = s.mt;
  j["mr"] = s.mr;
  j["blocks"] = s.blocks;
  j["b"] = s.b ? json(*s.b) : json(nullptr);
  j["b_range"] = s.b_range;
  j["schemes"] = s.schemes;
  j["layers"] = s.layers;
  j["snr_db"] = s.snr_db;
  j["trials"] = s.trials;
  j["seed"] = s.seed;
  // shards is left out: results do not depend on it, so outputs stay byte-identical.
  j["epsilon0"] = s.epsilon0;
  j["tilt"] = s.tilt;
  j["fit_fraction"] = s.fit_fraction;
  j["tolerance"] = s.tolerance;
  j["gains"] = s.gains;
  j["shares"] = s.shares;
  j["rate_grid"] = s.rate_grid;
  j["share_step"] = s.share_step;
  j["evaluator"] = s.evaluator;
  j["refine"] = s.refine;
  j["emit_grid"] = s.emit_grid;
  j["format"] = s.format;
  return j;
}

template <class T>
void take(const json& j, const char* key, T& field) {
  if (j.contains(key) && !j[key].is_null()) field = j[key].get<T>();
}

void apply_config(const json& root, Scenario& s) {
  const json& j = root.contains("scenario") ? root["scenario"] : root;
  if (!j.is_object()) throw UsageError("config must be a JSON object");
  try {
    take(j, "mt", s.mt);
    take(j, "mr", s.mr);
    take(j, "blocks", s.blocks);
    if (j.contains("b") && !j["b"].is_null()) s.b = j["b"].get<double>();
    take(j, "b_range", s.b_range);
    take(j, "schemes", s.schemes);
    take(j, "layers", s.layers);
    take(j, "snr_db", s.snr_db);
    take(j, "trials", s.trials);
    take(j, "seed", s.seed);
    take(j, "shards", s.shards);
    take(j, "epsilon0", s.epsilon0);
    take(j, "tilt", s.tilt);
    take(j, "fit_fraction", s.fit_fraction);
    take(j, "tolerance", s.tolerance);
    take(j, "gains", s.gains);
    take(j, "shares", s.shares);
    take(j, "rate_grid", s.rate_grid);
    take(j, "share_step", s.share_step);
    take(j, "evaluator", s.evaluator);
    take(j, "refine", s.refine);
    take(j, "emit_grid", s.emit_grid);
    take(j, "format", s.format);
  } catch (const json::exception& e) {
    throw UsageError(std::string("bad config value: ") + e.what());
  }
}

// Flags as given on the command line; unset ones leave the scenario alone.
struct Flags {
  std::optional<int> mt, mr, blocks, shards;
  std::optional<double> b, epsilon0, tilt, fit_fraction, tolerance, share_step;
  std::optional<std::string> b_range, snr_db, rate_grid, evaluator, format, out, config;
  std::optional<std::int64_t> trials;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> schemes, layers;
  std::vector<double> gains, shares;
  bool refine = false;
  bool emit_grid = false;
};

void apply_flags(const Flags& f, Scenario& s) {
  if (f.mt) s.mt = *f.mt;
  if (f.mr) s.mr = *f.mr;
  if (f.blocks) s.blocks = *f.blocks;
  if (f.b) s.b = *f.b;
  if (f.b_range) s.b_range = *f.b_range;
  if (!f.schemes.empty()) s.schemes = f.schemes;
  if (!f.layers.empty()) s.layers = f.layers;
  if (f.snr_db) s.snr_db = *f.snr_db;
  if (f.trials) s.trials = *f.trials;
  if (f.seed) s.seed = *f.seed;
  if (f.shards) s.shards = *f.shards;
  if (f.epsilon0) s.epsilon0 = *f.epsilon0;
  if (f.tilt) s.tilt = *f.tilt;
  if (f.fit_fraction) s.fit_fraction = *f.fit_fraction;
  if (f.tolerance) s.tolerance = *f.tolerance;
  if (!f.gains.empty()) s.gains = f.gains;
  if (!f.shares.empty()) s.shares = f.shares;
  if (f.rate_grid) s.rate_grid = *f.rate_grid;
  if (f.share_step) s.share_step = *f.share_step;
  if (f.evaluator) s.evaluator = *f.evaluator;
  if (f.refine) s.refine = true;
  if (f.emit_grid) s.emit_grid = true;
  if (f.format) s.format = *f.format;
}

double parse_number(const std::string& text, const char* what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw UsageError(std::string("bad ") + what + ": '" + text + "'");
  }
}

GridRange parse_range(const std::string& text, const char* what) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
  if (parts.size() == 1) {
    const double v = parse_number(parts[0], what);
    return {v, v, 1.0};
  }
  if (parts.size() != 3) throw UsageError(std::string(what) + " must be MIN:MAX:STEP");
  GridRange g{parse_number(parts[0], what), parse_number(parts[1], what),
              parse_number(parts[2], what)};
  if (!(g.step > 0.0)) throw UsageError(std::string(what) + " step must be positive");
  if (g.max < g.min) throw UsageError(std::string(what) + " is empty (MAX < MIN)");
  return g;
}

std::vector<double> range_values(const std::string& text, const char* what) {
  if (text.empty()) throw UsageError(std::string(what) + " is required");
  return parse_range(text, what).values();
}

Scheme scheme_of(const std::string& name) {
  const auto s = parse_scheme(name);
  if (!s) throw UsageError("unknown scheme '" + name + "' (ub, single, ls, hls, bs)");
  return *s;
}

LayerCount layers_of(const std::string& text) {
  const auto n = LayerCount::parse(text);
  if (!n) throw UsageError("layers must be a nonnegative integer or 'inf'");
  return *n;
}

ChannelSpec spec_of(const Scenario& s) {
  if (s.mt < 1 || s.mr < 1 || s.blocks < 1) throw UsageError("--mt, --mr and --blocks must be >= 1");
  return ChannelSpec(s.mt, s.mr, s.blocks);
}

double require_b(const Scenario& s) {
  if (!s.b) throw UsageError("--b is required");
  if (!(*s.b > 0.0)) throw UsageError("--b must be positive");
  return *s.b;
}

void check_format(const Scenario& s) {
  if (s.format != "csv" && s.format != "json") throw UsageError("--format must be csv or json");
}

json allocation_json(const LayerAllocation& a) {
  json j;
  j["scheme"] = std::string(scheme_name(a.scheme));
  j["gains"] = a.gains;
  j["time_shares"] = a.time_shares;
  j["power_exponents"] = a.power_exponents;
  j["analog_share"] = a.analog_share;
  j["antenna_reduction"] = a.antenna_reduction;
  return j;
}

// Output sink: stdout, or --out plus a scenario sidecar for CSV.
struct Emitter {
  const Scenario& scenario;
  const std::optional<std::string>& path;
  std::ostream& out;

  void csv(const std::string& body) const {
    if (!path) {
      out << body;
      return;
    }
    write(*path, body);
    write(*path + ".scenario.json", json{{"scenario", to_json(scenario)}}.dump(2) + "\n");
  }

  void document(json doc) const {
    json full;
    full["scenario"] = to_json(scenario);
    for (auto& [k, v] : doc.items()) full[k] = v;
    const std::string text = full.dump(2) + "\n";
    if (path) {
      write(*path, text);
    } else {
      out << text;
    }
  }

  static void write(const std::string& p, const std::string& text) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + p);
    f << text;
  }
};

// ---- exponent / sweep ----------------------------------------------------

struct Row {
  double b;
  Scheme scheme;
  std::string layers;
  double exponent;
  std::optional<LayerAllocation> allocation;
};

Row exponent_row(const ChannelSpec& spec, Scheme scheme, const LayerCount& layers, double b) {
  Row row{b, scheme, layers.to_string(), std::nan(""), std::nullopt};
  if (scheme == Scheme::UpperBound) row.layers = "na";
  if (scheme == Scheme::SingleLayer) row.layers = "1";
  const ExponentResult r = distortion_exponent(spec, scheme, layers, b);
  row.exponent = r.exponent;
  row.allocation = r.allocation;
  return row;
}

int cmd_exponent(const Scenario& s, const Emitter& emit) {
  const ChannelSpec spec = spec_of(s);
  const double b = require_b(s);
  if (s.schemes.size() != 1) throw UsageError("exponent takes exactly one --scheme");
  const Scheme scheme = scheme_of(s.schemes.front());
  const LayerCount layers = layers_of(s.layers.empty() ? "inf" : s.layers.front());
  const Row row = exponent_row(spec, scheme, layers, b);

  if (s.format == "json") {
    json r;
    r["b"] = row.b;
    r["scheme"] = std::string(scheme_name(row.scheme));
    r["layers"] = row.layers;
    r["exponent"] = number_or_null(row.exponent);
    r["allocation"] = row.allocation ? allocation_json(*row.allocation) : json(nullptr);
    emit.document({{"result", r}});
  } else {
    std::string body = "b,scheme,layers,exponent,gains\n";
    body += num(row.b) + "," + std::string(scheme_name(row.scheme)) + "," + row.layers + "," +
            num(row.exponent) + "," + (row.allocation ? join(row.allocation->gains) : "") + "\n";
    emit.csv(body);
  }
  return 0;
}

int cmd_sweep(const Scenario& s, const Emitter& emit) {
  const ChannelSpec spec = spec_of(s);
  if (s.schemes.empty()) throw UsageError("sweep needs at least one --scheme");
  std::vector<double> bs;
  if (!s.b_range.empty()) {
    bs = range_values(s.b_range, "--b-range");
  } else if (s.b) {
    bs = {*s.b};
  } else {
    throw UsageError("sweep needs --b-range or --b");
  }
  std::vector<std::string> layer_list = s.layers.empty() ? std::vector<std::string>{"inf"} : s.layers;

  std::vector<Row> rows;
  for (double b : bs) {
    for (const auto& name : s.schemes) {
      const Scheme scheme = scheme_of(name);
      const bool layered = scheme == Scheme::LS || scheme == Scheme::HLS || scheme == Scheme::BS;
      const auto& lists = layered ? layer_list : std::vector<std::string>{"1"};
      for (const auto& l : lists) {
        const LayerCount layers = layers_of(l);
        try {
          rows.push_back(exponent_row(spec, scheme, layers, b));
        } catch (const DomainError&) {
          // Undefined points (b <= 0, HLS below its analog floor) stay in
          // the table so every column has the same b grid.
          std::string shown = scheme == Scheme::UpperBound ? "na" : layers.to_string();
          if (scheme == Scheme::SingleLayer) shown = "1";
          rows.push_back({b, scheme, shown, std::nan(""), std::nullopt});
        }
      }
    }
  }

  if (s.format == "json") {
    json arr = json::array();
    for (const auto& r : rows) {
      arr.push_back({{"b", r.b},
                     {"scheme", std::string(scheme_name(r.scheme))},
                     {"layers", r.layers},
                     {"exponent", number_or_null(r.exponent)}});
    }
    emit.document({{"rows", arr}});
  } else {
    std::string body = "b,scheme,layers,exponent\n";
    for (const auto& r : rows) {
      body += num(r.b) + "," + std::string(scheme_name(r.scheme)) + "," + r.layers + "," +
              num(r.exponent) + "\n";
    }
    emit.csv(body);
  }
  return 0;
}

// ---- simulate -------------------------------------------------------------

LayerAllocation simulated_allocation(const ChannelSpec& spec, const Scenario& s, Scheme scheme,
                                     double b) {
  if (scheme == Scheme::UpperBound) throw UsageError("the upper bound cannot be simulated");
  if (!s.gains.empty()) {
    LayerAllocation a;
    a.scheme = scheme;
    a.gains = s.gains;
    for (double g : a.gains) {
      if (g < 0.0) throw UsageError("--gains must be nonnegative");
    }
    if (scheme == Scheme::SingleLayer && a.gains.size() != 1) {
      throw UsageError("single-layer takes one gain");
    }
    if (scheme == Scheme::BS) {
      double used = 0.0;
      for (double g : a.gains) {
        a.power_exponents.push_back(1.0 - spec.blocks() * used);
        used += g;
      }
    } else {
      a.time_shares = s.shares;
      if (a.time_shares.empty()) a.time_shares.assign(a.gains.size(), 1.0 / double(a.gains.size()));
      if (a.time_shares.size() != a.gains.size()) throw UsageError("--shares must match --gains");
      if (scheme == Scheme::HLS) a.analog_share = 1.0 / (b * spec.m_min());
    }
    return a;
  }
  const LayerCount layers = layers_of(s.layers.empty() ? "1" : s.layers.front());
  if (layers.is_infinite()) throw UsageError("simulate needs a finite layer count or --gains");
  const int n = layers.count();
  switch (scheme) {
    case Scheme::SingleLayer: return *exponent_single_layer(spec, b).allocation;
    case Scheme::LS: return solve_ls_staircase(DmtCurve(spec), b, n, s.shares).allocation;
    case Scheme::HLS: return solve_hls_staircase(DmtCurve(spec), b, n, s.shares).allocation;
    case Scheme::BS: return bs_allocation(spec, b, n);
    case Scheme::UpperBound: break;
  }
  throw UsageError("unsupported scheme");
}

double theory_exponent(const ChannelSpec& spec, double b, const LayerAllocation& a) {
  const DmtCurve curve(spec);
  switch (a.scheme) {
    case Scheme::SingleLayer:
    case Scheme::LS: return ls_exponent_of(curve, b, a);
    case Scheme::HLS: return hls_exponent_of(curve, b, a);
    case Scheme::BS: return bs_exponent_of(spec, b, a);
    case Scheme::UpperBound: break;
  }
  return std::nan("");
}

int cmd_simulate(const Scenario& s, const Emitter& emit, std::ostream& err) {
  const ChannelSpec spec = spec_of(s);
  const double b = require_b(s);
  if (s.schemes.size() != 1) throw UsageError("simulate takes exactly one --scheme");
  const Scheme scheme = scheme_of(s.schemes.front());

  SimulationConfig cfg;
  cfg.snr_grid_db = range_values(s.snr_db, "--snr-db");
  cfg.trials = s.trials;
  cfg.seed = s.seed;
  cfg.shards = s.shards;
  cfg.epsilon0 = s.epsilon0;
  cfg.tilt = s.tilt;
  cfg.fit_fraction = s.fit_fraction;
  try {
    cfg.validate();
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }

  const LayerAllocation alloc = simulated_allocation(spec, s, scheme, b);
  const int n = alloc.layers();

  // Infeasible grid points are reported and left out of the run.
  std::vector<Transmission> plan;
  std::vector<std::size_t> where;
  std::vector<std::string> problems(cfg.snr_grid_db.size());
  for (std::size_t i = 0; i < cfg.snr_grid_db.size(); ++i) {
    try {
      plan.push_back(transmission_at(alloc, cfg.snr_grid_db[i], cfg.epsilon0));
      where.push_back(i);
    } catch (const InfeasibleError& e) {
      problems[i] = e.what();
      err << "warning: " << e.what() << "\n";
    }
  }
  if (plan.empty()) throw InfeasibleError("no SNR point of the grid is feasible");

  const auto est = evaluate_transmissions(spec, b, plan, cfg);
  std::vector<std::optional<SnrPoint>> points(cfg.snr_grid_db.size());
  std::vector<double> fit_db;
  std::vector<double> fit_ed;
  for (std::size_t k = 0; k < where.size(); ++k) {
    points[where[k]] = est[k];
    points[where[k]]->snr_db = cfg.snr_grid_db[where[k]];
    fit_db.push_back(cfg.snr_grid_db[where[k]]);
    fit_ed.push_back(est[k].expected_distortion);
  }
  const SlopeFit fit = fit_tail(fit_db, fit_ed, cfg.fit_fraction);
  const double theory = theory_exponent(spec, b, alloc);
  const bool within = std::abs(fit.slope - theory) <= s.tolerance;

  if (s.format == "json") {
    json arr = json::array();
    for (std::size_t i = 0; i < points.size(); ++i) {
      json p;
      p["snr_db"] = cfg.snr_grid_db[i];
      p["feasible"] = points[i].has_value();
      if (points[i]) {
        p["expected_distortion"] = points[i]->expected_distortion;
        p["ed_stderr"] = points[i]->ed_stderr;
        p["layer_outage"] = points[i]->layer_outage;
        p["outage_stderr"] = points[i]->outage_stderr;
      } else {
        p["error"] = problems[i];
      }
      arr.push_back(p);
    }
    emit.document({{"allocation", allocation_json(alloc)},
                   {"points", arr},
                   {"fitted_exponent", number_or_null(fit.slope)},
                   {"fit_stderr", number_or_null(fit.stderr_)},
                   {"theory_exponent", number_or_null(theory)}});
  } else {
    std::string body = "snr_db,expected_distortion,ed_stderr";
    for (int k = 1; k <= n; ++k) body += ",outage_" + std::to_string(k);
    body += "\n";
    for (std::size_t i = 0; i < points.size(); ++i) {
      body += num(cfg.snr_grid_db[i]);
      if (points[i]) {
        body += "," + num(points[i]->expected_distortion) + "," + num(points[i]->ed_stderr);
        for (double o : points[i]->layer_outage) body += "," + num(o);
      } else {
        for (int k = 0; k < n + 2; ++k) body += ",nan";
      }
      body += "\n";
    }
    emit.csv(body);
  }
  err << "fitted exponent " << num(fit.slope) << " +- " << num(fit.stderr_) << ", theory "
      << num(theory) << ", tolerance " << num(s.tolerance) << ": "
      << (std::isnan(fit.slope) ? "no fit (fewer than 3 points)" : within ? "within" : "outside")
      << "\n";
  return 0;
}

// ---- optimize -------------------------------------------------------------

int cmd_optimize(const Scenario& s, const Emitter& emit) {
  const ChannelSpec spec = spec_of(s);
  const double b = require_b(s);
  if (s.schemes.size() != 1) throw UsageError("optimize takes exactly one --scheme");
  SearchSpace space;
  space.scheme = scheme_of(s.schemes.front());
  const LayerCount layers = layers_of(s.layers.empty() ? "1" : s.layers.front());
  if (layers.is_infinite()) throw UsageError("optimize needs a finite layer count");
  space.layers = layers.count();
  space.rate_grid = parse_range(s.rate_grid, "--rate-grid");
  space.share_step = s.share_step;
  const auto snr = range_values(s.snr_db, "--snr-db");
  if (snr.size() != 1) throw UsageError("optimize takes a single --snr-db value");
  space.snr_db = snr.front();
  space.b = b;
  space.refine = s.refine;
  if (s.evaluator == "auto") {
    space.evaluator = Evaluator::Auto;
  } else if (s.evaluator == "analytic") {
    space.evaluator = Evaluator::Analytic;
  } else if (s.evaluator == "montecarlo") {
    space.evaluator = Evaluator::MonteCarlo;
  } else {
    throw UsageError("--evaluator must be auto, analytic or montecarlo");
  }
  SimulationConfig cfg;
  cfg.snr_grid_db = {space.snr_db};
  cfg.trials = s.trials;
  cfg.seed = s.seed;
  cfg.shards = s.shards;
  cfg.epsilon0 = s.epsilon0;
  cfg.tilt = s.tilt;
  if (cfg.trials < 1 || cfg.shards < 1) throw UsageError("--trials and --shards must be >= 1");

  const SearchResult r = optimize_finite_snr(spec, space, cfg, s.emit_grid);

  if (s.format == "json") {
    json best;
    best["rates"] = r.best.rates;
    best["split"] = r.best.split;
    best["ed"] = r.best.ed;
    best["ed_stderr"] = r.best.ed_stderr;
    json doc;
    doc["best"] = best;
    doc["allocation"] = allocation_json(r.allocation);
    doc["candidates"] = r.candidates;
    doc["evaluator"] = r.evaluator;
    if (s.emit_grid) {
      json grid = json::array();
      for (const auto& c : r.grid) {
        grid.push_back({{"rates", c.rates}, {"split", c.split}, {"ed", c.ed}, {"ed_stderr", c.ed_stderr}});
      }
      doc["grid"] = grid;
    }
    emit.document(doc);
  } else if (s.emit_grid) {
    std::string body = "index,rates,split,ed,ed_stderr,best\n";
    for (std::size_t i = 0; i < r.grid.size(); ++i) {
      const auto& c = r.grid[i];
      const bool is_best = c.rates == r.best.rates && c.split == r.best.split;
      body += std::to_string(i) + "," + join(c.rates) + "," + join(c.split) + "," + num(c.ed) + "," +
              num(c.ed_stderr) + "," + (is_best ? "1" : "0") + "\n";
    }
    emit.csv(body);
  } else {
    std::string body = "scheme,layers,snr_db,b,rates,split,ed,ed_stderr,candidates,evaluator\n";
    body += std::string(scheme_name(space.scheme)) + "," + std::to_string(space.layers) + "," +
            num(space.snr_db) + "," + num(b) + "," + join(r.best.rates) + "," + join(r.best.split) +
            "," + num(r.best.ed) + "," + num(r.best.ed_stderr) + "," + std::to_string(r.candidates) +
            "," + r.evaluator + "\n";
    emit.csv(body);
  }
  return 0;
}

void add_common(CLI::App* app, Flags& f) {
  app->add_option("--mt", f.mt, "Transmit antennas");
  app->add_option("--mr", f.mr, "Receive antennas");
  app->add_option("--blocks", f.blocks, "Fading blocks L");
  app->add_option("--b", f.b, "Bandwidth ratio (channel uses per source sample)");
  app->add_option("--scheme", f.schemes, "ub, single, ls, hls, bs")->delimiter(',');
  app->add_option("--layers", f.layers, "Layer count N or inf")->delimiter(',');
  app->add_option("--out", f.out, "Write output here instead of stdout");
  app->add_option("--format", f.format, "csv or json");
  app->add_option("--config", f.config, "JSON scenario file (flags override it)");
}

void add_simulation(CLI::App* app, Flags& f) {
  app->add_option("--snr-db", f.snr_db, "SNR grid MIN:MAX:STEP (dB)");
  app->add_option("--trials", f.trials, "Monte Carlo trials per SNR point");
  app->add_option("--seed", f.seed, "Random seed");
  app->add_option("--shards", f.shards, "Parallel workers");
  app->add_option("--epsilon0", f.epsilon0, "BS power slack step");
  app->add_option("--tilt", f.tilt, "Importance-sampling tilt (0 = plain Monte Carlo)");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Distortion exponents and expected distortion of layered JSCC over MIMO fading"};
  app.require_subcommand(1);
  Flags f;

  auto* exponent = app.add_subcommand("exponent", "Distortion exponent of one scheme");
  add_common(exponent, f);

  auto* sweep = app.add_subcommand("sweep", "Exponents over a bandwidth-ratio range");
  add_common(sweep, f);
  sweep->add_option("--b-range", f.b_range, "MIN:MAX:STEP");

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo expected distortion over SNR");
  add_common(simulate, f);
  add_simulation(simulate, f);
  simulate->add_option("--gains", f.gains, "Explicit multiplexing gains")->delimiter(',');
  simulate->add_option("--shares", f.shares, "LS/HLS time shares")->delimiter(',');
  simulate->add_option("--fit-fraction", f.fit_fraction, "Top share of the grid used for the fit");
  simulate->add_option("--tolerance", f.tolerance, "Allowed |fitted - theory|");

  auto* optimize = app.add_subcommand("optimize", "Finite-SNR grid search");
  add_common(optimize, f);
  add_simulation(optimize, f);
  optimize->add_option("--rate-grid", f.rate_grid, "Rate grid MIN:MAX:STEP (bits)");
  optimize->add_option("--share-step", f.share_step, "Time-share / power-fraction step");
  optimize->add_option("--evaluator", f.evaluator, "auto, analytic or montecarlo");
  optimize->add_flag("--refine", f.refine, "Coordinate refinement around the grid optimum");
  optimize->add_flag("--emit-grid", f.emit_grid, "Output every evaluated candidate");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o;
    std::ostringstream e2;
    const int code = app.exit(e, o, e2);
    out << o.str();
    err << e2.str();
    return code == 0 ? 0 : 2;
  }

  Scenario s;
  CLI::App* cmd = app.get_subcommands().front();
  s.command = cmd->get_name();
  try {
    if (f.config) {
      std::ifstream in(*f.config);
      if (!in) throw UsageError("cannot read config " + *f.config);
      json root;
      try {
        root = json::parse(in);
      } catch (const json::exception& e) {
        throw UsageError(std::string("config is not valid JSON: ") + e.what());
      }
      apply_config(root, s);
      if (root.contains("scenario") && root["scenario"].contains("command") &&
          root["scenario"]["command"] != s.command) {
        throw UsageError("config was written by '" + root["scenario"]["command"].get<std::string>() +
                         "', not '" + s.command + "'");
      }
    }
    apply_flags(f, s);
    check_format(s);
    const Emitter emit{s, f.out, out};
    if (s.command == "exponent") return cmd_exponent(s, emit);
    if (s.command == "sweep") return cmd_sweep(s, emit);
    if (s.command == "simulate") return cmd_simulate(s, emit, err);
    return cmd_optimize(s, emit);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << "\n";
    return 3;
  } catch (const InfeasibleError& e) {
    err << "infeasible: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace jscc::cli
