#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <iterator>
#include <sstream>

#include "CLI11.hpp"
#include "tld/collapse.hpp"
#include "tld/dynamics.hpp"
#include "tld/io.hpp"
#include "tld/rate.hpp"
#include "tld/suite.hpp"

using namespace tld;

namespace {

struct Global {
  std::uint64_t seed = 20240607;
  std::string format = "json";
  std::string out;
  int threads = 0;
  std::string invocation;
};

Json read_json_input(const std::string& path) {
  if (path.empty() || path == "-") {
    std::string text((std::istreambuf_iterator<char>(std::cin)), std::istreambuf_iterator<char>());
    return Json::parse(text);
  }
  return Json::parse(read_text(path));
}

// Writes to <out>/<name>.<ext> when an output directory is set, else stdout.
void emit(const Global& g, const std::string& name, const Json& json, const CsvTable* table) {
  const bool csv = g.format == "csv" && table != nullptr;
  const std::string text = csv ? table->str() : json.dump(2) + "\n";
  if (g.out.empty()) {
    std::cout << text;
    return;
  }
  const auto path = std::filesystem::path(g.out) / (name + (csv ? ".csv" : ".json"));
  write_text(path, text);
  std::cerr << "wrote " << path.string() << "\n";
}

std::string join_points(const std::vector<std::uint64_t>& layer) {
  std::string s;
  for (auto p : layer) {
    Rational r{BigInt(std::to_string(p)), BigInt(1) << kDyadicBits};
    r.canonicalize();
    s += (s.empty() ? "" : " ") + format_rational(r);
  }
  return s;
}

std::string join_labels(const std::vector<int>& labels) {
  std::string s;
  for (int l : labels) s += std::to_string(l);
  return s;
}

const Json& tuple_of(const Json& in) { return in.is_array() ? in : in.at("tuple"); }

// --- collapse ------------------------------------------------------------------

template <class T>
Json tuple_json(const std::vector<T>& parts) {
  Json a = Json::array();
  for (const auto& p : parts) a.push_back(to_json(p));
  return a;
}

void cmd_collapse(const Global& g, const std::string& regime, const std::string& input) {
  const Json in = read_json_input(input);
  const Json& tuple = tuple_of(in);
  Json out;
  out["regime"] = regime;
  CsvTable table({"position", "flux", "flux_left"});
  auto add_flux = [&](const FluxProfile& flux) {
    out["flux"] = to_json(flux);
    for (std::size_t i = 0; i < flux.positions.size(); ++i) {
      table.add({format_rational(flux.positions[i]), format_rational(flux.values[i]), format_rational(flux.left_values[i])});
    }
  };
  if (regime == "discrete") {
    std::vector<TorusConfig> parts;
    for (const auto& j : tuple) parts.push_back(config_from_json(j));
    out["collapsed"] = tuple_json(collapse_k(parts).parts());
    if (parts.size() == 2) add_flux(collapse_discrete_flux(parts[0], parts[1]).flux);
  } else if (regime == "points") {
    std::vector<PointConfig> parts;
    for (const auto& j : tuple) parts.push_back(points_from_json(j));
    out["collapsed"] = tuple_json(collapse_k(parts).parts());
  } else if (regime == "measure") {
    std::vector<TorusMeasure> parts;
    for (const auto& j : tuple) parts.push_back(measure_from_json(j));
    out["collapsed"] = tuple_json(collapse_k(parts).parts());
    if (parts.size() == 2) add_flux(collapse_measure(parts[0], parts[1]).flux);
  } else {
    throw Error("unknown regime '" + regime + "'");
  }
  emit(g, "collapse", out, &table);
}

// --- dynamics ------------------------------------------------------------------

ProcessSpec make_spec(const std::string& model, int ring, const std::vector<int>& deltas) {
  ProcessSpec spec{model == "had" ? Model::Had : Model::Tasep, ring, deltas};
  if (model != "had" && model != "tasep") throw Error("unknown model '" + model + "'");
  spec.validate();
  return spec;
}

void cmd_simulate(const Global& g, const std::string& model, int ring, const std::vector<int>& deltas, double horizon,
                  bool stationary_start) {
  const auto spec = make_spec(model, ring, deltas);
  Rng rng(g.seed);
  Json out;
  out["model"] = model;
  out["horizon"] = horizon;
  out["seed"] = g.seed;
  if (spec.model == Model::Tasep) {
    const int k = spec.classes();
    CsvTable table([&] {
      std::vector<std::string> h{"time", "event_site"};
      for (int x = 0; x < ring; ++x) h.push_back("x" + std::to_string(x));
      return h;
    }());
    std::vector<int> labels;
    if (stationary_start) {
      const auto parts = sample_invariant_tasep(spec, rng);
      labels = class_label_encode(parts);
    } else {
      labels.assign(static_cast<std::size_t>(ring), 0);
      std::size_t pos = 0;
      for (int c = 0; c < k; ++c) {
        for (int j = 0; j < spec.deltas[c]; ++j) labels[pos++] = c + 1;
      }
      std::shuffle(labels.begin(), labels.end(), rng.engine());
    }
    out["initial"] = labels;
    std::size_t events = 0;
    tasep_simulate(labels, horizon, rng, [&](const TasepEvent& e, const std::vector<int>& now) {
      ++events;
      if (!e.changed) return;
      std::vector<std::string> row{format_double(e.time), std::to_string(e.site)};
      for (int l : now) row.push_back(std::to_string(l));
      table.add(std::move(row));
    });
    out["final"] = labels;
    out["events"] = events;
    out["jumps"] = table.rows().size();
    emit(g, "simulate", out, &table);
  } else {
    CsvTable table([&] {
      std::vector<std::string> h{"time", "mark"};
      for (int c = 0; c < spec.classes(); ++c) h.push_back("layer" + std::to_string(c + 1));
      return h;
    }());
    HadState state;
    if (stationary_start) {
      state = HadState::from_points(sample_invariant_had(spec, rng));
    } else {
      std::vector<PointConfig> layers;
      for (int m : spec.layer_sizes()) layers.push_back(uniform_points(static_cast<std::size_t>(m), rng));
      state = HadState::from_points(collapse_k(layers).parts());
    }
    out["initial"] = tuple_json(state.to_points());
    std::size_t events = 0;
    had_simulate(state, horizon, rng, [&](const HadEvent& e, const HadState& now) {
      ++events;
      std::vector<std::string> row{format_double(e.time), join_points({e.mark})};
      for (const auto& layer : now.layers) row.push_back(join_points(layer));
      table.add(std::move(row));
    });
    out["final"] = tuple_json(state.to_points());
    out["events"] = events;
    emit(g, "simulate", out, &table);
  }
}

void cmd_stationary(const Global& g, int ring, const std::vector<int>& deltas) {
  const auto spec = make_spec("tasep", ring, deltas);
  const auto exact = exact_stationary(spec);
  const auto push = pushforward_distribution(spec);
  Json out;
  out["ring"] = ring;
  out["deltas"] = deltas;
  out["stationary"] = to_json(exact);
  out["pushforward"] = to_json(push);
  out["total_variation"] = format_rational(exact.total_variation(push));
  CsvTable table({"state", "stationary", "pushforward"});
  for (std::size_t i = 0; i < exact.states.size(); ++i) {
    table.add({join_labels(exact.states[i]), format_rational(exact.probabilities[i]),
               format_rational(push.probability_of(exact.states[i]))});
  }
  emit(g, "stationary", out, &table);
}

void cmd_sample(const Global& g, const std::string& model, int ring, const std::vector<int>& deltas, int count) {
  const auto spec = make_spec(model, ring, deltas);
  Json samples = Json::array();
  CsvTable table(spec.model == Model::Tasep ? std::vector<std::string>{"sample", "labels"}
                                            : std::vector<std::string>{"sample", "layer", "points"});
  for (int i = 0; i < count; ++i) {
    Rng rng(derive_seed(g.seed, static_cast<std::uint64_t>(i)));
    if (spec.model == Model::Tasep) {
      const auto parts = sample_invariant_tasep(spec, rng);
      const auto labels = class_label_encode(parts);
      samples.push_back(labels);
      table.add({std::to_string(i), join_labels(labels)});
    } else {
      const auto parts = sample_invariant_had(spec, rng);
      samples.push_back(tuple_json(parts));
      const auto state = HadState::from_points(parts);
      for (std::size_t c = 0; c < state.layers.size(); ++c) {
        table.add({std::to_string(i), std::to_string(c + 1), join_points(state.layers[c])});
      }
    }
  }
  emit(g, "sample-invariant", Json{{"model", model}, {"seed", g.seed}, {"samples", samples}}, &table);
}

// --- rates ---------------------------------------------------------------------

struct RateInput {
  Family family = Family::Tasep;
  TorusMeasure rho1, rho2;
  Rational m1, m2;
};

RateInput read_rate_input(const std::string& path, const std::string& family) {
  const Json in = read_json_input(path);
  RateInput r;
  r.family = parse_family(in.contains("family") ? in.at("family").get<std::string>() : family);
  if (in.contains("rho1")) r.rho1 = measure_from_json(in.at("rho1"));
  if (in.contains("rho2")) r.rho2 = measure_from_json(in.at("rho2"));
  r.m1 = in.contains("m1") ? rational_from_json(in.at("m1")) : r.rho1.total_mass();
  r.m2 = in.contains("m2") ? rational_from_json(in.at("m2")) : r.rho2.total_mass();
  return r;
}

void cmd_rate(const Global& g, const std::string& input, const std::string& family, double eq_tol) {
  const auto in = read_rate_input(input, family);
  const auto r = s2(in.rho1, in.rho2, in.m1, in.m2, in.family);
  Json out = to_json(r);
  out["family"] = family_name(in.family);
  out["m1"] = to_json(in.m1);
  out["m2"] = to_json(in.m2);
  if (eq_tol > 0 && in.rho1.absolutely_continuous() && in.rho2.absolutely_continuous()) {
    const auto approx = plateau_set(in.rho1, in.rho2, eq_tol);
    Json arcs = Json::array();
    for (const auto& a : approx.intervals) arcs.push_back(to_json(a));
    out["approximate_plateaus"] = arcs;
  }
  CsvTable table({"value", "complement", "plateaus", "second", "finite", "reason"});
  table.add({format_double(r.value), format_double(r.terms.complement), format_double(r.terms.plateaus),
             format_double(r.terms.second), r.finite ? "1" : "0", r.reason});
  emit(g, "rate-eval", out, &table);
}

void cmd_minimizer(const Global& g, const std::string& input, const std::string& family, const std::string& free) {
  const auto in = read_rate_input(input, family);
  Json out;
  out["family"] = family_name(in.family);
  TorusMeasure rho1 = in.rho1, rho2 = in.rho2;
  if (free == "rho1") {
    rho1 = minimizer_rho1(in.rho2, in.m1);
    out["rho1"] = to_json(rho1);
  } else if (free == "rho2") {
    const auto arcs = minimizer_rho2_arcs(in.rho1, in.m2);
    rho2 = minimizer_rho2(in.rho1, in.m2);
    out["rho2"] = to_json(rho2);
    Json kept = Json::array(), all = Json::array();
    for (const auto& a : arcs.kept) kept.push_back(to_json(a));
    for (const auto& a : arcs.all) all.push_back(to_json(a));
    out["arcs"] = kept;
    out["arcs_before_nesting"] = all;
  } else {
    throw Error("--free must be rho1 or rho2");
  }
  const auto r = s2(rho1, rho2, in.m1, in.m2, in.family);
  const EntropyKernel fixed(in.family, free == "rho1" ? in.m2 : in.m1);
  out["s2"] = to_json(r);
  out["s1_of_fixed"] = s1(free == "rho1" ? rho2 : rho1, fixed);
  emit(g, "minimizer", out, nullptr);
}

std::vector<Rational> parse_rationals(const std::string& list) {
  std::vector<Rational> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(rational_from_json(Json(item)));
  return out;
}

void cmd_ldp(const Global& g, const std::string& densities, const std::vector<long>& sizes) {
  const auto rows = ldp_decay_exact(parse_rationals(densities), sizes);
  CsvTable table({"N", "decay", "s1", "gap", "bound", "exact"});
  Json out = Json::array();
  for (const auto& r : rows) {
    table.add({std::to_string(r.n), format_double(r.decay), format_double(r.s1), format_double(r.gap),
               format_double(r.bound), r.exact ? "1" : "0"});
    out.push_back(Json{{"N", r.n}, {"decay", r.decay}, {"s1", r.s1}, {"gap", r.gap}, {"bound", r.bound},
                       {"exact", r.exact}});
  }
  emit(g, "ldp-decay", out, &table);
}

void cmd_nonconvex(const Global& g) {
  const auto cert = nonconvexity_certificate();
  CsvTable table({"c", "margin"});
  Json pts = Json::array();
  for (const auto& p : cert.points) {
    table.add({format_rational(p.c), format_double(p.margin)});
    pts.push_back(Json{{"c", format_rational(p.c)}, {"margin", p.margin}});
  }
  emit(g, "certify-nonconvex",
       Json{{"points", pts}, {"most_negative", cert.most_negative}, {"limit", cert.limit},
            {"nonconvex", cert.most_negative < 0}},
       &table);
}

// --- suite ---------------------------------------------------------------------

int cmd_suite(const Global& g, SuiteConfig config, const std::string& replay) {
  if (!replay.empty()) {
    const Json report = Json::parse(read_text(replay));
    config = SuiteConfig::from_json(report.at("config"));
    config.threads = g.threads;
  }
  config.out_dir = g.out;
  config.invocation = g.invocation;
  const auto report = run_suite(config);
  for (const auto& c : report.checks) {
    std::cerr << (c.pass ? "PASS " : "FAIL ") << c.criterion << " " << c.id << ": " << format_double(c.measured) << " "
              << c.relation << " " << format_double(c.threshold) << " (" << c.detail << ")\n";
  }
  if (g.out.empty()) std::cout << report.to_json().dump(2) << "\n";
  return report.pass() ? 0 : 1;
}

std::vector<int> parse_ints(const std::string& list) {
  std::vector<int> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  Global g;
  for (int i = 0; i < argc; ++i) g.invocation += (i ? " " : "") + std::string(argv[i]);
  if (const char* env = std::getenv("TLD_OUT_DIR")) g.out = env;

  CLI::App app{"Multiclass collapsing constructions, dynamics and rate functionals"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--seed", g.seed, "RNG seed")->capture_default_str();
  app.add_option("--format", g.format, "output format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  app.add_option("--out", g.out, "output directory (default $TLD_OUT_DIR, else stdout)");
  app.add_option("--threads", g.threads, "worker threads, 0 for all cores")->capture_default_str();

  std::string input = "-", regime = "discrete", model = "tasep", family = "tasep", free = "rho2";
  std::string deltas_arg = "1,1", densities = "1/2,0", sizes_arg = "100,1000,10000";
  int ring = 6, count = 1;
  double horizon = 10, eq_tol = 0;
  bool stationary_start = false;

  auto* collapse = app.add_subcommand("collapse", "collapse an ordered tuple read as JSON");
  collapse->add_option("--regime", regime)->check(CLI::IsMember({"discrete", "points", "measure"}))->capture_default_str();
  collapse->add_option("--input", input, "JSON file, - for stdin")->capture_default_str();

  auto* simulate = app.add_subcommand("simulate", "run the multiclass dynamics");
  simulate->add_option("--model", model)->check(CLI::IsMember({"tasep", "had"}))->capture_default_str();
  simulate->add_option("--ring", ring, "TASEP ring size")->capture_default_str();
  simulate->add_option("--deltas", deltas_arg, "particles per class, comma separated")->capture_default_str();
  simulate->add_option("--horizon", horizon)->capture_default_str();
  simulate->add_flag("--stationary-start", stationary_start, "start from the collapsing sampler");

  auto* stationary = app.add_subcommand("stationary", "exact TASEP stationary law and collapsed pushforward");
  stationary->add_option("--ring", ring)->capture_default_str();
  stationary->add_option("--deltas", deltas_arg)->capture_default_str();

  auto* sample = app.add_subcommand("sample-invariant", "draw from the collapsing sampler");
  sample->add_option("--model", model)->check(CLI::IsMember({"tasep", "had"}))->capture_default_str();
  sample->add_option("--ring", ring)->capture_default_str();
  sample->add_option("--deltas", deltas_arg)->capture_default_str();
  sample->add_option("--count", count)->capture_default_str();

  auto* rate = app.add_subcommand("rate-eval", "two-class rate functional with its term breakdown");
  rate->add_option("--input", input, "JSON with rho1, rho2 and optional m1, m2, family")->capture_default_str();
  rate->add_option("--family", family)->check(CLI::IsMember({"tasep", "had"}))->capture_default_str();
  rate->add_option("--eq-tol", eq_tol, "relative tolerance for approximate plateaus")->capture_default_str();

  auto* minimizer = app.add_subcommand("minimizer", "optimal free profile given the other one");
  minimizer->add_option("--input", input)->capture_default_str();
  minimizer->add_option("--family", family)->check(CLI::IsMember({"tasep", "had"}))->capture_default_str();
  minimizer->add_option("--free", free, "profile to optimise over")->check(CLI::IsMember({"rho1", "rho2"}))->capture_default_str();

  auto* ldp = app.add_subcommand("ldp-decay", "exact -(1/N) log P against S1 for a bin profile");
  ldp->add_option("--densities", densities, "bin densities, comma separated")->capture_default_str();
  ldp->add_option("--sizes", sizes_arg, "values of N")->capture_default_str();

  app.add_subcommand("certify-nonconvex", "margin of the midpoint convexity inequality");

  SuiteConfig config;
  std::string replay, rings_arg, classes_arg;
  std::vector<std::string> tolerances;
  long suite_count = 0;
  int replicas = 0;
  double suite_horizon = 0;
  auto* suite = app.add_subcommand("suite", "run an acceptance suite");
  suite->add_option("name", config.suite, "suite name or all")->capture_default_str();
  suite->add_option("--count", suite_count, "instances per family or regime");
  suite->add_option("--ring-sizes", rings_arg, "stationarity ring sizes");
  suite->add_option("--class-counts", classes_arg, "stationarity class counts");
  suite->add_option("--replicas", replicas, "had-invariance replicas");
  suite->add_option("--horizon", suite_horizon, "had-invariance horizon");
  suite->add_option("--tol", tolerances, "threshold override id=value");
  suite->add_option("--replay", replay, "rerun the configuration stored in a report.json");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*collapse) cmd_collapse(g, regime, input);
    if (*simulate) cmd_simulate(g, model, ring, parse_ints(deltas_arg), horizon, stationary_start);
    if (*stationary) cmd_stationary(g, ring, parse_ints(deltas_arg));
    if (*sample) cmd_sample(g, model, ring, parse_ints(deltas_arg), count);
    if (*rate) cmd_rate(g, input, family, eq_tol);
    if (*minimizer) cmd_minimizer(g, input, family, free);
    if (*ldp) {
      std::vector<long> sizes;
      for (int n : parse_ints(sizes_arg)) sizes.push_back(n);
      cmd_ldp(g, densities, sizes);
    }
    if (app.got_subcommand("certify-nonconvex")) cmd_nonconvex(g);
    if (*suite) {
      config.seed = g.seed;
      config.threads = g.threads;
      if (suite_count > 0) config.count = suite_count;
      if (replicas > 0) config.replicas = replicas;
      if (suite_horizon > 0) config.horizon = suite_horizon;
      if (!rings_arg.empty()) config.ring_sizes = parse_ints(rings_arg);
      if (!classes_arg.empty()) config.class_counts = parse_ints(classes_arg);
      for (const auto& t : tolerances) {
        const auto eq = t.find('=');
        if (eq == std::string::npos) throw Error("--tol expects id=value");
        config.tolerances[t.substr(0, eq)] = std::stod(t.substr(eq + 1));
      }
      return cmd_suite(g, config, replay);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
