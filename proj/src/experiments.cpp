#include "teichlab/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>

#include "teichlab/dim.hpp"
#include "teichlab/dynamics.hpp"
#include "teichlab/height.hpp"
#include "teichlab/parallel.hpp"
#include "teichlab/rng.hpp"
#include "teichlab/triangulation.hpp"

namespace teichlab {

namespace {

[[noreturn]] void config_error(const std::string& what) { fail(Errc::ConfigError, what); }

std::string type_name(ParamType t) {
  switch (t) {
    case ParamType::Integer: return "integer";
    case ParamType::Number: return "number";
    case ParamType::String: return "string";
    case ParamType::Boolean: return "boolean";
    case ParamType::IntegerArray: return "integer[]";
    case ParamType::NumberArray: return "number[]";
    case ParamType::StringArray: return "string[]";
    case ParamType::Object: return "object";
    case ParamType::Any: return "any";
  }
  return "any";
}

bool matches(const Json& v, ParamType t) {
  auto all = [&v](auto pred) { return v.is_array() && std::all_of(v.begin(), v.end(), pred); };
  switch (t) {
    case ParamType::Integer: return v.is_number_integer();
    case ParamType::Number: return v.is_number();
    case ParamType::String: return v.is_string();
    case ParamType::Boolean: return v.is_boolean();
    case ParamType::IntegerArray: return all([](const Json& e) { return e.is_number_integer(); });
    case ParamType::NumberArray: return all([](const Json& e) { return e.is_number(); });
    case ParamType::StringArray: return all([](const Json& e) { return e.is_string(); });
    case ParamType::Object: return v.is_object();
    case ParamType::Any: return true;
  }
  return false;
}

// Accessors for validated params.
struct Params {
  const Json& j;
  int integer(const char* k) const { return j.at(k).get<int>(); }
  double number(const char* k) const { return j.at(k).get<double>(); }
  std::string str(const char* k) const { return j.at(k).get<std::string>(); }
  bool flag(const char* k) const { return j.at(k).get<bool>(); }
  std::vector<double> numbers(const char* k) const { return j.at(k).get<std::vector<double>>(); }
  const Json& raw(const char* k) const { return j.at(k); }

  int positive(const char* k) const {
    const int v = integer(k);
    if (v < 1) config_error(std::string(k) + " must be positive");
    return v;
  }
  double positive_number(const char* k) const {
    const double v = number(k);
    if (!(v > 0)) config_error(std::string(k) + " must be positive");
    return v;
  }
};

struct Context {
  Params p;
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

struct Output {
  Json summary = Json::object();
  std::vector<OutputFile> files;
  void csv(const std::string& name, const CsvTable& t) { files.push_back({name, t.str()}); }
  void json(const std::string& name, const Json& j) { files.push_back({name, j.dump(2) + "\n"}); }
};

using Runner = std::function<Output(const Context&)>;

// ---- shared input resolution ----

Norm parse_norm(const std::string& s) {
  if (s == "euclidean") return Norm::Euclidean;
  if (s == "max") return Norm::Max;
  config_error("norm must be \"euclidean\" or \"max\"");
}

const NamedSuspension* find_shipped(const std::string& name) {
  static const auto shipped = shipped_suspensions();
  for (const auto& s : shipped)
    if (s.name == name) return &s;
  return nullptr;
}

Json load_if_path(const Json& desc) {
  if (desc.is_string()) {
    const auto s = desc.get<std::string>();
    if (s.size() > 5 && s.ends_with(".json")) return read_json_file(s);
  }
  return desc;
}

// A built-in surface name, a shipped suspension name, a surface or suspension
// object, or a path to a JSON file holding either.
TranslationSurface resolve_surface(const Json& raw) {
  const Json desc = load_if_path(raw);
  if (desc.is_string()) {
    const auto name = desc.get<std::string>();
    if (const auto* s = find_shipped(name)) return suspend(s->data);
    const auto names = builtin_surface_names();
    if (std::find(names.begin(), names.end(), name) == names.end()) config_error("unknown surface '" + name + "'");
    return builtin_surface(name);
  }
  if (desc.is_object() && desc.contains("iet")) return suspend(suspension_from_json(desc));
  if (desc.is_object()) return surface_from_json(desc);
  config_error("surface must be a name, a path or an object");
}

SuspensionData resolve_suspension(const Json& raw) {
  const Json desc = load_if_path(raw);
  if (desc.is_string()) {
    if (const auto* s = find_shipped(desc.get<std::string>())) return s->data;
    config_error("unknown suspension '" + desc.get<std::string>() + "'");
  }
  return suspension_from_json(desc);
}

Iet resolve_iet(const Json& raw) {
  const Json desc = load_if_path(raw);
  if (desc.is_string()) {
    if (const auto* s = find_shipped(desc.get<std::string>())) return s->data.base;
    config_error("unknown IET '" + desc.get<std::string>() + "'");
  }
  return iet_from_json(desc);
}

// "systole", "constant", or {"kind": "bump", "eps": e} / {"kind": "constant", "value": c}.
ObservableF resolve_observable(const Json& desc, Norm norm) {
  if (desc.is_string()) {
    const auto k = desc.get<std::string>();
    if (k == "systole") return systole_observable(norm);
    config_error("unknown observable '" + k + "'");
  }
  if (!desc.is_object() || !desc.contains("kind") || !desc["kind"].is_string()) config_error("observable needs a kind");
  const auto k = desc["kind"].get<std::string>();
  for (const auto& [key, v] : desc.items())
    if (key != "kind" && key != "eps" && key != "value") config_error("unknown observable key '" + key + "'");
  if (k == "systole") return systole_observable(norm);
  if (k == "bump") {
    if (!desc.contains("eps") || !desc["eps"].is_number() || !(desc["eps"].get<double>() > 0)) config_error("bump needs eps > 0");
    return bump_observable(desc["eps"].get<double>(), norm);
  }
  if (k == "constant") {
    if (!desc.contains("value") || !desc["value"].is_number()) config_error("constant needs a value");
    return constant_observable(desc["value"].get<double>());
  }
  config_error("unknown observable '" + k + "'");
}

std::string fmt(double v) { return format_double(v); }

double median(std::vector<double> v) {
  if (v.empty()) return 0;
  std::sort(v.begin(), v.end());
  const auto m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

// ---- experiments ----

void all_irreducible(int d, const std::function<void(const Permutation&)>& fn) {
  std::vector<int> images(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) images[static_cast<std::size_t>(i)] = i + 1;
  do {
    Permutation p(images);
    if (is_irreducible(p)) fn(p);
  } while (std::next_permutation(images.begin(), images.end()));
}

Output typew_scan(const Context& c) {
  const int lo = c.p.integer("d_min"), hi = c.p.integer("d_max");
  const auto family = c.p.str("family");
  if (lo < 2 || hi < lo) config_error("need 2 <= d_min <= d_max");
  if (family != "reversal" && family != "all") config_error("family must be \"reversal\" or \"all\"");
  if (family == "all" && hi > 8) config_error("family \"all\" is limited to d_max <= 8");
  CsvTable t("typew_scan", {"d", "permutation", "type_w"});
  Json per_d = Json::array();
  for (int d = lo; d <= hi; ++d) {
    int total = 0, w = 0;
    auto visit = [&](const Permutation& p) {
      const bool tw = classify_type_w(p).type_w;
      ++total;
      w += tw;
      t.add_row({std::to_string(d), p.to_string(), tw ? "1" : "0"});
    };
    if (family == "reversal")
      visit(Permutation::reversal(d));
    else
      all_irreducible(d, visit);
    per_d.push_back({{"d", d}, {"permutations", total}, {"type_w", w}});
  }
  Output o;
  o.csv("typew.csv", t);
  o.summary["per_d"] = per_d;
  return o;
}

Output iet_epsn(const Context& c) {
  const int n_max = c.p.positive("n_max");
  std::optional<Iet> iet;
  if (!c.p.raw("iet").is_null()) {
    iet = resolve_iet(c.p.raw("iet"));
  } else {
    // random rotation by p/q
    const long max_den = c.p.integer("max_denominator");
    if (max_den < 2) config_error("max_denominator must be at least 2");
    Rng rng = Rng::substream(c.seed, 0);
    const long q = static_cast<long>(rng.uniform_int(2, max_den));
    const long p = static_cast<long>(rng.uniform_int(1, q - 1));
    iet.emplace(std::vector<Rational>{make_rational(q - p, q), make_rational(p, q)}, Permutation({2, 1}));
  }
  const auto eps = epsilon_sequence(*iet, n_max);
  Output o;
  o.csv("partition.csv", partition_csv(eps));
  o.json("iet.json", to_json(*iet));
  const Rational last = eps.back() * static_cast<long>(n_max);
  o.summary["iet"] = to_json(*iet);
  o.summary["epsilon_n_max"] = to_string(eps.back());
  o.summary["n_eps_n_max"] = to_double(last);
  return o;
}

Output weakmix_pipeline(const Context& c) {
  const Iet iet = resolve_iet(c.p.raw("iet"));
  const int depth = c.p.positive("depth"), n_max = c.p.positive("n_max");
  Rational threshold;
  try {
    threshold = parse_rational(c.p.str("threshold"));
  } catch (const Error& e) {
    config_error(e.what());
  }
  const auto v = weak_mixing_verdict(iet, depth, n_max, threshold);
  const auto samples = short_intervals_diagnostic(iet, n_max, Schedule::Geometric, c.p.positive("samples"));
  CsvTable t("n_eps", {"n", "n_eps_num", "n_eps_den", "n_eps_float"});
  for (const auto& s : samples)
    t.add_row({std::to_string(s.n), s.n_epsilon_n.get_num().get_str(), s.n_epsilon_n.get_den().get_str(), fmt(to_double(s.n_epsilon_n))});
  const auto& e = v.evidence;
  Json ev{{"type_w_trace", e.type_w_trace},
          {"idoc_depth_checked", e.idoc.depth_checked},
          {"idoc_collision", e.idoc.collision.has_value()},
          {"tail", {e.tail_begin, e.tail_end}},
          {"tail_max_n_eps", to_string(e.tail_max_n_eps)},
          {"tail_max_n_eps_float", to_double(e.tail_max_n_eps)},
          {"tail_argmax", e.tail_argmax},
          {"threshold", to_string(e.threshold)},
          {"idoc_is_finite_check", e.idoc_is_finite_check},
          {"ergodicity_verified", e.ergodicity_verified}};
  Json verdict{{"iet", to_json(iet)}, {"status", to_string(v.status)}, {"evidence", ev}};
  Output o;
  o.csv("n_eps.csv", t);
  o.json("verdict.json", verdict);
  o.summary["status"] = to_string(v.status);
  o.summary["tail_max_n_eps"] = to_double(e.tail_max_n_eps);
  return o;
}

Output suspend_verify(const Context& c) {
  std::vector<std::pair<std::string, SuspensionData>> items;
  const auto& names = c.p.raw("suspensions");
  if (names.empty())
    for (const auto& s : shipped_suspensions()) items.emplace_back(s.name, s.data);
  for (const auto& n : names) items.emplace_back(n.get<std::string>(), resolve_suspension(n));
  const int samples = c.p.positive("samples"), shears = c.p.positive("shears");
  const double tol_return = c.p.number("return_tolerance"), tol_product = c.p.number("product_tolerance");

  struct Row {
    double area = 0, return_err = 0, breakpoint_err = 0, product = 0;
    int genus = 0, resampled = 0;
  };
  const auto rows = parallel_map<Row>(items.size(), [&](std::size_t k) {
    const auto& s = items[k].second;
    const auto x = suspend(s);
    Row r;
    r.area = x.area();
    r.genus = x.genus();
    const auto table = first_return_oracle(x, base_transversal(s), samples);
    r.resampled = table.resampled;
    for (const auto& smp : table.samples)
      r.return_err = std::max(r.return_err, std::abs(smp.image - to_double(evaluate(s.base, from_double(smp.x)))));
    const auto betas = s.base.betas();
    if (table.breakpoints.size() + 2 != betas.size()) {
      r.breakpoint_err = INFINITY;
    } else {
      for (std::size_t i = 0; i < table.breakpoints.size(); ++i)
        r.breakpoint_err = std::max(r.breakpoint_err, std::abs(table.breakpoints[i] - to_double(betas[i + 1])));
    }
    const auto range = max_admissible_shear(s);
    const double sigma = 0.5 * std::min({range.neg, range.pos, 0.1});
    std::vector<double> sh;
    for (int i = 0; i < shears; ++i) sh.push_back(shears == 1 ? 0.0 : sigma * (2.0 * i / (shears - 1) - 1.0));
    r.product = verify_local_product(s, sh).max_discrepancy;
    return r;
  }, c.threads);

  CsvTable t("suspend_verify", {"suspension", "d", "genus", "area", "first_return_max_error", "breakpoint_max_error",
                                "local_product_discrepancy", "resampled", "pass"});
  Output o;
  bool all_pass = true;
  for (std::size_t k = 0; k < items.size(); ++k) {
    const auto& r = rows[k];
    const bool pass = r.return_err <= tol_return && r.breakpoint_err <= tol_return && r.product <= tol_product;
    all_pass = all_pass && pass;
    t.add_row({items[k].first, std::to_string(items[k].second.base.size()), std::to_string(r.genus), fmt(r.area), fmt(r.return_err),
               fmt(r.breakpoint_err), fmt(r.product), std::to_string(r.resampled), pass ? "1" : "0"});
    o.json("surface_" + items[k].first + ".json", to_json(suspend(items[k].second)));
  }
  o.csv("suspend_verify.csv", t);
  o.summary["suspensions"] = items.size();
  o.summary["all_pass"] = all_pass;
  return o;
}

enum class HeightCheck { Circle, Interval, Gaussian };

const char* check_name(HeightCheck k) {
  switch (k) {
    case HeightCheck::Circle: return "circle";
    case HeightCheck::Interval: return "horocycle_interval";
    case HeightCheck::Gaussian: return "horocycle_gaussian";
  }
  return "";
}

Output height_inequalities(const Context& c) {
  const auto surface = normalize_area(resolve_surface(c.p.raw("surface")));
  const auto times = c.p.numbers("times");
  const int count = c.p.positive("basepoints");
  const double alpha_max = c.p.number("alpha_max"), flow_max = c.p.number("basepoint_flow_max");
  HeightFunction h;
  h.s = c.p.number("s");
  h.params.a = c.p.number("a");
  h.norm = parse_norm(c.p.str("norm"));
  if (times.empty()) config_error("times must not be empty");
  for (double t : times)
    if (!(t > h.params.t0)) config_error("times must be positive");
  std::vector<HeightCheck> checks;
  for (const auto& m : c.p.raw("checks")) {
    const auto s = m.get<std::string>();
    if (s == "circle") checks.push_back(HeightCheck::Circle);
    else if (s == "horocycle_interval") checks.push_back(HeightCheck::Interval);
    else if (s == "horocycle_gaussian") checks.push_back(HeightCheck::Gaussian);
    else config_error("unknown check '" + s + "'");
  }

  // basepoints g_u r_theta x with alpha <= alpha_max
  struct Base {
    double theta = 0, u = 0, alpha = 0;
    TranslationSurface x;
  };
  const auto bases = parallel_map<Base>(static_cast<std::size_t>(count), [&](std::size_t k) {
    Rng rng = Rng::substream(c.seed, k);
    for (int attempt = 0; attempt < 1000; ++attempt) {
      Base b;
      b.theta = rng.uniform(0, 2 * std::numbers::pi);
      b.u = rng.uniform(0, flow_max);
      b.x = act(geodesic(b.u) * rotation(b.theta), surface);
      b.alpha = height_eval(h, b.x);
      if (b.alpha <= alpha_max) return b;
    }
    fail(Errc::BudgetExceeded, "no basepoint with alpha <= alpha_max after 1000 draws");
  }, c.threads);

  struct Cell {
    std::size_t base;
    double t;
    HeightCheck check;
  };
  std::vector<Cell> cells;
  for (std::size_t k = 0; k < bases.size(); ++k)
    for (double t : times)
      for (auto ch : checks) cells.push_back({k, t, ch});
  const auto results = parallel_map<AverageCheck>(cells.size(), [&](std::size_t i) {
    const auto& cell = cells[i];
    const auto& x = bases[cell.base].x;
    switch (cell.check) {
      case HeightCheck::Circle: return verify_circle_average(h, x, cell.t);
      case HeightCheck::Interval: return verify_horocycle_average(h, x, cell.t, HorocycleMode::Interval);
      case HeightCheck::Gaussian: return verify_horocycle_average(h, x, cell.t, HorocycleMode::Gaussian);
    }
    fail(Errc::Internal, "unreachable");
  }, c.threads);

  // b per check: given, or 1.1 times the largest observed excess lhs - a alpha
  std::map<HeightCheck, double> excess, b;
  for (auto ch : checks) excess[ch] = -INFINITY;
  for (std::size_t i = 0; i < cells.size(); ++i)
    excess[cells[i].check] = std::max(excess[cells[i].check], results[i].lhs - h.params.a * results[i].alpha_x);
  const bool calibrate = c.p.raw("b").is_null();
  for (auto ch : checks) b[ch] = calibrate ? std::max(0.0, 1.1 * excess[ch]) : c.p.number("b");

  CsvTable t("height_inequalities",
             {"basepoint", "theta", "u", "check", "t", "alpha", "lhs", "rhs", "quadrature_error", "nodes", "satisfied"});
  int failures = 0;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const auto& cell = cells[i];
    const auto& r = results[i];
    const double rhs = h.params.a * r.alpha_x + b[cell.check];
    const bool ok = r.lhs <= rhs;
    failures += !ok;
    const auto& base = bases[cell.base];
    t.add_row({std::to_string(cell.base), fmt(base.theta), fmt(base.u), check_name(cell.check), fmt(cell.t), fmt(r.alpha_x),
               fmt(r.lhs), fmt(rhs), fmt(r.quadrature_error), std::to_string(r.nodes), ok ? "1" : "0"});
  }
  Json cal{{"a", h.params.a}, {"s", h.s}, {"calibrated", calibrate}, {"checks", Json::object()}};
  for (auto ch : checks) cal["checks"][check_name(ch)] = {{"max_excess", excess[ch]}, {"b", b[ch]}};
  Output o;
  o.csv("height_checks.csv", t);
  o.json("calibration.json", cal);
  o.summary["calibration"] = cal;
  o.summary["failures"] = failures;
  o.summary["evaluations"] = cells.size();
  return o;
}

Output correlation_decay(const Context& c) {
  const auto x = normalize_area(resolve_surface(c.p.raw("surface")));
  const auto phi = resolve_observable(c.p.raw("observable"), parse_norm(c.p.str("norm")));
  const double t1 = c.p.number("t1");
  std::vector<std::pair<double, double>> pairs;
  for (double d : c.p.numbers("deltas")) pairs.emplace_back(t1, t1 + d);
  if (pairs.size() < 2) config_error("need at least two deltas");
  const auto rep = correlation_decay_test(x, phi, c.p.number("beta"), pairs, c.p.integer("quadrature_n"),
                                          c.p.number("rel_tol"), c.p.number("abs_floor"));
  CsvTable t("correlation", {"t1", "t2", "value", "quad_error", "resolved"});
  int resolved = 0;
  for (const auto& pt : rep.points) {
    resolved += pt.resolved;
    t.add_row({fmt(pt.t1), fmt(pt.t2), fmt(pt.value), fmt(pt.quadrature_error), pt.resolved ? "1" : "0"});
  }
  Json fit{{"slope", rep.slope}, {"intercept", rep.intercept}, {"nodes", rep.nodes}, {"resolved_points", resolved},
           {"observable", phi.name}, {"sobolev_norm", phi.sobolev()}};
  Output o;
  o.csv("correlation.csv", t);
  o.json("fit.json", fit);
  o.summary = fit;
  return o;
}

Output birkhoff_deviation(const Context& c) {
  const auto x = normalize_area(resolve_surface(c.p.raw("surface")));
  const auto f = resolve_observable(c.p.raw("observable"), parse_norm(c.p.str("norm")));
  const double T = c.p.positive_number("T"), dt = c.p.positive_number("dt");
  const int count = c.p.positive("directions");
  const auto avgs = parallel_map<std::pair<double, BirkhoffResult>>(static_cast<std::size_t>(count), [&](std::size_t k) {
    Rng rng = Rng::substream(c.seed, k);
    const double s = rng.uniform(-1, 1);
    return std::make_pair(s, birkhoff_average_continuous(x, s, T, f, dt));
  }, c.threads);
  CsvTable t("averages", {"s", "value", "quad_error"});
  std::vector<double> values;
  for (const auto& [s, r] : avgs) {
    t.add_row({fmt(s), fmt(r.value), fmt(r.quadrature_error)});
    values.push_back(r.value);
  }
  const double ref = c.p.raw("reference").is_null() ? median(values) : c.p.number("reference");
  const double beta = c.p.number("beta"), N = c.p.positive_number("N");
  const int i_begin = c.p.integer("level_begin"), i_end = c.p.integer("level_end");
  if (i_begin < 0 || i_end < i_begin) config_error("need 0 <= level_begin <= level_end");
  const auto masks = deviation_masks(x, f, ref, beta, N, i_begin, i_end, dt);
  Json mj = Json::array();
  Json counts = Json::array();
  for (const auto& m : masks) {
    mj.push_back(to_json(m, {{"N", N}, {"t", N}, {"beta", beta}, {"reference", ref}, {"observable", f.name}}));
    counts.push_back(m.count());
  }
  Output o;
  o.csv("averages.csv", t);
  o.json("deviation_masks.json", mj);
  o.summary["median"] = median(values);
  o.summary["reference"] = ref;
  o.summary["min"] = *std::min_element(values.begin(), values.end());
  o.summary["max"] = *std::max_element(values.begin(), values.end());
  o.summary["mask_counts"] = counts;
  return o;
}

Output divergence_cover(const Context& c) {
  const auto x = normalize_area(resolve_surface(c.p.raw("surface")));
  RecurrenceOptions ro;
  ro.eps = c.p.positive_number("eps");
  ro.delta = c.p.number("delta");
  ro.t = c.p.positive_number("t");
  ro.norm = parse_norm(c.p.str("norm"));
  const auto flow = c.p.str("flow");
  if (flow == "horocycle") ro.flow = BasepointFlow::Horocycle;
  else if (flow == "rotation") ro.flow = BasepointFlow::Rotation;
  else config_error("flow must be \"horocycle\" or \"rotation\"");
  if (ro.delta < 0 || ro.delta > 1) config_error("delta must lie in [0, 1]");
  const int lo = c.p.positive("n_min"), hi = c.p.integer("n_max");
  if (hi < lo) config_error("need n_min <= n_max");
  std::vector<BadSetMask> masks;
  Json mj = Json::array();
  std::int64_t nodes = 0;
  for (int n = lo; n <= hi; ++n) {
    ro.N = n;
    RecurrenceStats st;
    masks.push_back(recurrence_mask(x, {n, ro.t}, ro, &st));
    nodes += st.nodes;
    mj.push_back(to_json(masks.back(), {{"N", n}, {"t", ro.t}, {"delta", ro.delta}, {"eps", ro.eps}, {"flow", flow}}));
  }
  const auto cover = accumulate_cover(masks, ro.t);
  FitOptions fo;
  fo.fraction = c.p.number("fit_fraction");
  if (!(fo.fraction > 0 && fo.fraction <= 1)) config_error("fit_fraction must lie in (0, 1]");
  Output o;
  o.csv("cover.csv", cover_csv(cover));
  o.json("masks.json", mj);
  Json counts = Json::array();
  for (const auto& lv : cover.levels) counts.push_back(lv.count);
  o.summary["counts"] = counts;
  o.summary["nodes"] = nodes;
  // Too few usable levels is a property of the data, reported rather than fatal.
  try {
    const auto est = estimate_dimension(cover, fo);
    o.json("estimate.json", {{"estimate", to_json(est)}, {"cover", to_json(cover)}});
    o.summary["dim_upper"] = est.dim_upper;
    o.summary["empty"] = est.empty;
  } catch (const Error& e) {
    if (e.code() != Errc::InsufficientLevels) throw;
    o.json("estimate.json", {{"estimate", nullptr}, {"error", e.what()}, {"cover", to_json(cover)}});
    o.summary["dim_upper"] = nullptr;
    o.summary["estimate_error"] = e.what();
  }
  return o;
}

struct Entry {
  ExperimentInfo info;
  Runner run;
};

const std::vector<Entry>& registry() {
  using P = ParamType;
  static const std::vector<Entry> r = {
      {{"typew_scan",
        "classify permutations as type W for a range of d",
        {{"d_min", P::Integer, 3, "smallest d"},
         {"d_max", P::Integer, 11, "largest d"},
         {"family", P::String, "reversal", "\"reversal\" (d,...,1) or \"all\" irreducible permutations (d <= 8)"}}},
       typew_scan},
      {{"iet_epsn",
        "epsilon_n of the partition generated by preimages of the discontinuities",
        {{"iet", P::Any, nullptr, "IET object, shipped suspension name or path; null draws a rotation p/q from the seed", true},
         {"max_denominator", P::Integer, 1000000, "largest q for a random rotation"},
         {"n_max", P::Integer, 1000, "largest n"}}},
       iet_epsn},
      {{"weakmix_pipeline",
        "type W, IDOC and short-interval evidence for a weak-mixing verdict",
        {{"iet", P::Any, "reversal-3", "IET object, shipped suspension name or path"},
         {"depth", P::Integer, 1000, "IDOC orbit depth"},
         {"n_max", P::Integer, 1000, "largest n for n epsilon_n"},
         {"threshold", P::String, "1/20", "tail threshold for n epsilon_n"},
         {"samples", P::Integer, 64, "geometric samples of n epsilon_n"}}},
       weakmix_pipeline},
      {{"suspend_verify",
        "first-return and local-product checks on suspensions",
        {{"suspensions", P::Any, Json::array(), "names, objects or paths; empty runs every shipped suspension"},
         {"samples", P::Integer, 1000, "first-return sample points"},
         {"shears", P::Integer, 21, "local-product shears"},
         {"return_tolerance", P::Number, 1e-8, "first-return tolerance"},
         {"product_tolerance", P::Number, 1e-9, "local-product tolerance"}}},
       suspend_verify},
      {{"height_inequalities",
        "circle and horocycle averaging inequalities for alpha = max(1, systole^-s)",
        {{"surface", P::Any, "square_torus", "surface name, object or path"},
         {"times", P::NumberArray, Json::array({2.0, 3.0, 4.0}), "flow times t"},
         {"basepoints", P::Integer, 50, "random basepoints g_u r_theta x"},
         {"alpha_max", P::Number, 10.0, "largest alpha accepted for a basepoint"},
         {"basepoint_flow_max", P::Number, 2.0, "u is drawn from [0, basepoint_flow_max]"},
         {"s", P::Number, 0.5, "height exponent"},
         {"a", P::Number, 0.5, "averaging factor"},
         {"b", P::Number, nullptr, "additive constant; null calibrates 1.1 x the largest excess", true},
         {"norm", P::String, "euclidean", "systole norm"},
         {"checks", P::StringArray, Json::array({"circle", "horocycle_interval", "horocycle_gaussian"}), "averages to verify"}}},
       height_inequalities},
      {{"correlation_decay",
        "decay of int f_t1 f_t2 ds for f_t(s) = phi(g_t h_s x) - phi(h_beta g_t h_s x)",
        {{"surface", P::Any, "square_torus", "surface name, object or path"},
         {"observable", P::Any, Json{{"kind", "bump"}, {"eps", 0.5}}, "\"systole\" or {\"kind\": \"bump\", \"eps\": e}"},
         {"norm", P::String, "euclidean", "systole norm"},
         {"beta", P::Number, 1.0, "horocycle offset"},
         {"t1", P::Number, 0.5, "first time"},
         {"deltas", P::NumberArray, Json::array({0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0}), "t2 - t1"},
         {"quadrature_n", P::Integer, 0, "trapezoid nodes; 0 picks max(64, 8 e^{2 max t})"},
         {"rel_tol", P::Number, 0.25, "QuadratureUnstable relative tolerance"},
         {"abs_floor", P::Number, 1e-4, "QuadratureUnstable absolute floor"}}},
       correlation_decay},
      {{"birkhoff_deviation",
        "Birkhoff averages along g_t h_s x and deviation masks F_i(beta)",
        {{"surface", P::Any, "double_pentagon", "surface name, object or path"},
         {"observable", P::Any, "systole", "\"systole\" or {\"kind\": \"bump\", \"eps\": e}"},
         {"norm", P::String, "euclidean", "systole norm"},
         {"T", P::Number, 20.0, "averaging time"},
         {"dt", P::Number, 0.05, "time step"},
         {"directions", P::Integer, 100, "random directions s in [-1, 1]"},
         {"reference", P::Number, nullptr, "reference value for deviations; null uses the median average", true},
         {"beta", P::Number, 0.05, "deviation threshold"},
         {"N", P::Number, 1.0, "block length"},
         {"level_begin", P::Integer, 1, "first block index i"},
         {"level_end", P::Integer, 4, "one past the last block index"}}},
       birkhoff_deviation},
      {{"divergence_cover",
        "cover counts and dimension estimate for directions with few returns to K_eps",
        {{"surface", P::Any, "square_torus", "surface name, object or path"},
         {"eps", P::Number, 0.1, "K_eps threshold"},
         {"delta", P::Number, 0.9, "bad when the return frequency is below 1 - delta"},
         {"t", P::Number, 1.0, "time step"},
         {"n_min", P::Integer, 1, "first level N"},
         {"n_max", P::Integer, 8, "last level N"},
         {"flow", P::String, "horocycle", "basepoint family: horocycle or rotation"},
         {"norm", P::String, "euclidean", "systole norm"},
         {"fit_fraction", P::Number, 0.5, "fraction of the finest levels used in the fit"}}},
       divergence_cover},
  };
  return r;
}

const Entry& entry(const std::string& name) {
  for (const auto& e : registry())
    if (e.info.name == name) return e;
  config_error("unknown experiment '" + name + "'");
}

std::string hex64(std::uint64_t v) {
  std::ostringstream s;
  s << std::hex;
  s.width(16);
  s.fill('0');
  s << v;
  return s.str();
}

}  // namespace

const std::vector<ExperimentInfo>& experiment_catalogue() {
  static const std::vector<ExperimentInfo> cat = [] {
    std::vector<ExperimentInfo> v;
    for (const auto& e : registry()) v.push_back(e.info);
    return v;
  }();
  return cat;
}

const ExperimentInfo* find_experiment(const std::string& name) {
  for (const auto& e : experiment_catalogue())
    if (e.name == name) return &e;
  return nullptr;
}

Json catalogue_json() {
  Json out = Json::array();
  for (const auto& e : experiment_catalogue()) {
    Json params = Json::array();
    for (const auto& p : e.params)
      params.push_back({{"name", p.name}, {"type", type_name(p.type)}, {"default", p.default_value}, {"nullable", p.nullable}, {"help", p.help}});
    out.push_back({{"name", e.name}, {"description", e.description}, {"params", params}});
  }
  return out;
}

Json validate_config(const Json& config) {
  if (!config.is_object()) config_error("config must be a JSON object");
  for (const auto& [k, v] : config.items())
    if (k != "experiment" && k != "seed" && k != "threads" && k != "out_dir" && k != "params")
      config_error("unknown top-level key '" + k + "'");
  if (!config.contains("experiment") || !config["experiment"].is_string()) config_error("missing experiment name");
  const auto* info = find_experiment(config["experiment"].get<std::string>());
  if (!info) config_error("unknown experiment '" + config["experiment"].get<std::string>() + "'");
  Json out{{"experiment", info->name}, {"seed", 0}, {"threads", 1}, {"out_dir", "."}, {"params", Json::object()}};
  if (config.contains("seed")) {
    if (!config["seed"].is_number_integer() || config["seed"].get<std::int64_t>() < 0) config_error("seed must be a non-negative integer");
    out["seed"] = config["seed"];
  }
  if (config.contains("threads")) {
    if (!config["threads"].is_number_integer() || config["threads"].get<std::int64_t>() < 0) config_error("threads must be a non-negative integer");
    out["threads"] = config["threads"];
  }
  if (config.contains("out_dir")) {
    if (!config["out_dir"].is_string()) config_error("out_dir must be a string");
    out["out_dir"] = config["out_dir"];
  }
  const Json given = config.contains("params") ? config["params"] : Json::object();
  if (!given.is_object()) config_error("params must be an object");
  for (const auto& [k, v] : given.items()) {
    const bool known = std::any_of(info->params.begin(), info->params.end(), [&](const ParamInfo& p) { return p.name == k; });
    if (!known) config_error("unknown parameter '" + k + "' for " + info->name);
  }
  for (const auto& p : info->params) {
    if (!given.contains(p.name)) {
      out["params"][p.name] = p.default_value;
      continue;
    }
    const auto& v = given[p.name];
    if (!(v.is_null() && p.nullable) && !matches(v, p.type))
      config_error("parameter '" + p.name + "' must be " + type_name(p.type) + (p.nullable ? " or null" : ""));
    out["params"][p.name] = v;
  }
  return out;
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

int exit_code_for(Errc code) noexcept {
  if (is_numerical_budget(code)) return 3;
  switch (code) {
    case Errc::ConfigError:
    case Errc::InvalidArgument:
    case Errc::NotIrreducible:
    case Errc::NotTypeW:
    case Errc::DimensionMismatch:
    case Errc::InvalidSurface:
    case Errc::InvalidSuspension:
    case Errc::PreconditionViolated:
      return 2;
    default:
      return 1;
  }
}

RunResult run_experiment(const Json& config, const RunOptions& opt) {
  RunResult res;
  res.config = validate_config(config);
  if (opt.seed) res.config["seed"] = *opt.seed;
  if (opt.threads) res.config["threads"] = *opt.threads;
  if (opt.out_dir) res.config["out_dir"] = opt.out_dir->string();
  const auto& e = entry(res.config["experiment"].get<std::string>());
  const unsigned threads = std::max(1u, res.config["threads"].get<unsigned>());
  set_default_threads(threads);

  const auto start = std::chrono::steady_clock::now();
  Output out = e.run(Context{Params{res.config["params"]}, res.config["seed"].get<std::uint64_t>(), threads});
  res.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  res.files = std::move(out.files);

  // The hash covers what determines the results: not threads or out_dir.
  Json hashed{{"experiment", res.config["experiment"]}, {"seed", res.config["seed"]}, {"params", res.config["params"]}};
  const std::string config_hash = "fnv1a64:" + hex64(fnv1a64(hashed.dump()));
  Json outputs = Json::array();
  for (const auto& f : res.files) outputs.push_back({{"file", f.name}, {"bytes", f.content.size()}, {"fnv1a64", hex64(fnv1a64(f.content))}});
  Json modules = Json::object();
  for (const char* m : {"permutation_core", "iet_core", "surface_core", "suspension", "dynamics_lab", "dim_estimator", "cli_experiments"})
    modules[m] = library_version();
  Json manifest{{"experiment", e.info.name},
                {"config_hash", config_hash},
                {"config", res.config},
                {"seed", res.config["seed"]},
                {"threads", threads},
                {"versions", {{"teich-lab", library_version()}, {"csv_format", kCsvFormatVersion}, {"modules", modules}}},
                {"wall_time_s", res.wall_time},
                {"outputs", outputs}};
  res.files.push_back({"manifest.json", manifest.dump(2) + "\n"});
  res.summary = {{"experiment", e.info.name}, {"status", "ok"}, {"config_hash", config_hash}, {"wall_time_s", res.wall_time},
                 {"result", out.summary}};

  const auto dir = res.config["out_dir"].get<std::string>();
  if (!dir.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) fail(Errc::ConfigError, "cannot create output directory " + dir);
    for (const auto& f : res.files) atomic_write(std::filesystem::path(dir) / f.name, f.content);
    Json files = Json::array();
    for (const auto& f : res.files) files.push_back((std::filesystem::path(dir) / f.name).string());
    res.summary["outputs"] = files;
  }
  return res;
}

}  // namespace teichlab
