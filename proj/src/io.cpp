#include "teichlab/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

#include "teichlab/error.hpp"

#ifndef TEICHLAB_VERSION
#define TEICHLAB_VERSION "0.0.0"
#endif

namespace teichlab {

namespace {

[[noreturn]] void bad(const std::string& what) { fail(Errc::ConfigError, what); }

const Json& field(const Json& j, const char* key) {
  if (!j.is_object()) bad(std::string("expected an object with key '") + key + "'");
  auto it = j.find(key);
  if (it == j.end()) bad(std::string("missing key '") + key + "'");
  return *it;
}

void only_keys(const Json& j, std::initializer_list<const char*> keys, const char* what) {
  for (const auto& [k, v] : j.items()) {
    bool known = false;
    for (const char* a : keys) known = known || k == a;
    if (!known) bad(std::string("unknown key '") + k + "' in " + what);
  }
}

double number(const Json& j, const char* what) {
  if (!j.is_number()) bad(std::string(what) + " must be a number");
  return j.get<double>();
}

int integer(const Json& j, const char* what) {
  if (!j.is_number_integer()) bad(std::string(what) + " must be an integer");
  return j.get<int>();
}

Rational rational(const Json& j) {
  if (j.is_string()) {
    try {
      return parse_rational(j.get<std::string>());
    } catch (const Error& e) {
      bad(e.what());
    }
  }
  if (j.is_number_integer()) return Rational(j.get<long>());
  bad("rationals are written as \"p/q\" strings or integers");
}

Vec2 point(const Json& j) {
  if (!j.is_array() || j.size() != 2) bad("points are [x, y] pairs");
  return {number(j[0], "coordinate"), number(j[1], "coordinate")};
}

EdgeRef edge_ref(const Json& j) {
  if (!j.is_array() || j.size() != 2) bad("edges are [polygon, edge] pairs");
  return {integer(j[0], "polygon index"), integer(j[1], "edge index")};
}

std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string library_version() { return TEICHLAB_VERSION; }

Json to_json(const Permutation& p) {
  Json j = Json::array();
  for (int v : p.images()) j.push_back(v);
  return j;
}

Permutation permutation_from_json(const Json& j) {
  if (!j.is_array()) bad("permutation must be an integer array");
  std::vector<int> images;
  for (const auto& v : j) images.push_back(integer(v, "permutation entry"));
  return Permutation(std::move(images));
}

Json to_json(const Iet& t) {
  Json lengths = Json::array();
  for (const auto& l : t.lengths()) lengths.push_back(to_string(l));
  return Json{{"lengths", lengths}, {"perm", to_json(t.perm())}};
}

Iet iet_from_json(const Json& j) {
  only_keys(j, {"lengths", "perm"}, "IET");
  const auto& l = field(j, "lengths");
  if (!l.is_array()) bad("lengths must be an array");
  std::vector<Rational> lengths;
  for (const auto& v : l) lengths.push_back(rational(v));
  return Iet(std::move(lengths), permutation_from_json(field(j, "perm")));
}

Json to_json(const TranslationSurface& x) {
  Json polys = Json::array();
  for (const auto& poly : x.polygons()) {
    Json pj = Json::array();
    for (auto v : poly) pj.push_back({v.real(), v.imag()});
    polys.push_back(pj);
  }
  Json glue = Json::array();
  for (const auto& [a, b] : x.gluings()) glue.push_back({{a.polygon, a.edge}, {b.polygon, b.edge}});
  return Json{{"polygons", polys}, {"gluings", glue}};
}

TranslationSurface surface_from_json(const Json& j) {
  only_keys(j, {"polygons", "gluings"}, "surface");
  const auto& pj = field(j, "polygons");
  const auto& gj = field(j, "gluings");
  if (!pj.is_array() || !gj.is_array()) bad("polygons and gluings must be arrays");
  std::vector<std::vector<Vec2>> polys;
  for (const auto& poly : pj) {
    if (!poly.is_array()) bad("a polygon is an array of points");
    std::vector<Vec2> vs;
    for (const auto& v : poly) vs.push_back(point(v));
    polys.push_back(std::move(vs));
  }
  std::vector<std::pair<EdgeRef, EdgeRef>> glue;
  for (const auto& g : gj) {
    if (!g.is_array() || g.size() != 2) bad("a gluing is a pair of edges");
    glue.emplace_back(edge_ref(g[0]), edge_ref(g[1]));
  }
  return TranslationSurface(std::move(polys), std::move(glue));
}

Json to_json(const SuspensionData& s) {
  return Json{{"iet", to_json(s.base)}, {"b", s.b}};
}

SuspensionData suspension_from_json(const Json& j) {
  only_keys(j, {"iet", "b"}, "suspension");
  const auto& bj = field(j, "b");
  if (!bj.is_array()) bad("b must be an array");
  std::vector<double> b;
  for (const auto& v : bj) b.push_back(number(v, "b entry"));
  SuspensionData s{iet_from_json(field(j, "iet")), std::move(b)};
  validate(s);
  return s;
}

Json to_json(const BadSetMask& m, const Json& meta) {
  Json j{{"kind", mask_kind_name(m.kind)},
         {"index", m.index},
         {"level", m.grid.level},
         {"step", m.grid.step},
         {"width", m.grid.width()},
         {"interval_count", m.interval_count()},
         {"count", m.count()}};
  if (m.interval_count() <= (std::int64_t{1} << 20)) {
    j["encoding"] = "bits";
    j["bits"] = m.bitstring();
  } else {
    j["encoding"] = "indices";
    j["indices"] = m.bits;
  }
  j["meta"] = meta;
  return j;
}

BadSetMask mask_from_json(const Json& j) {
  BadSetMask m;
  m.grid.level = integer(field(j, "level"), "level");
  m.grid.step = number(field(j, "step"), "step");
  const auto kind = field(j, "kind").get<std::string>();
  bool found = false;
  for (auto k : {MaskKind::Z, MaskKind::B, MaskKind::F, MaskKind::R})
    if (mask_kind_name(k) == kind) m.kind = k, found = true;
  if (!found) bad("unknown mask kind '" + kind + "'");
  if (j.contains("index")) m.index = integer(j["index"], "index");
  const auto enc = field(j, "encoding").get<std::string>();
  if (enc == "bits") {
    const auto s = field(j, "bits").get<std::string>();
    if (static_cast<std::int64_t>(s.size()) != m.interval_count()) bad("bit-string length does not match the grid");
    for (std::size_t k = 0; k < s.size(); ++k)
      if (s[k] == '1') m.bits.push_back(static_cast<std::int64_t>(k));
  } else if (enc == "indices") {
    m.bits = field(j, "indices").get<std::vector<std::int64_t>>();
  } else {
    bad("unknown mask encoding '" + enc + "'");
  }
  return m;
}

Json to_json(const DimensionEstimate& e) {
  return Json{{"dim_upper", e.dim_upper},
              {"slope", e.slope},
              {"intercept", e.intercept},
              {"empty", e.empty},
              {"first_level", e.first_level},
              {"last_level", e.last_level},
              {"levels_used", e.levels_used},
              {"residuals", e.residuals},
              {"rms_residual", e.rms_residual}};
}

Json to_json(const CoverReport& r) {
  Json levels = Json::array();
  for (const auto& lv : r.levels)
    levels.push_back({{"n", lv.n}, {"width", lv.width}, {"count", lv.count}, {"total", lv.total}});
  return Json{{"t", r.t}, {"convention", convention_name(r.convention)}, {"levels", levels}};
}

CsvTable::CsvTable(std::string kind, std::vector<std::string> columns) : kind_(std::move(kind)), columns_(std::move(columns)) {}

void CsvTable::add_row(std::vector<std::string> cells) {
  require(cells.size() == columns_.size(), Errc::DimensionMismatch, "CSV row width differs from the header");
  rows_.push_back(std::move(cells));
}

std::string CsvTable::body() const {
  std::string out;
  auto line = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out += (i ? "," : "") + csv_cell(cells[i]);
    out += '\n';
  };
  line(columns_);
  for (const auto& r : rows_) line(r);
  return out;
}

std::string CsvTable::str() const {
  return "# teich-lab-csv version=" + std::to_string(kCsvFormatVersion) + " kind=" + kind_ + " generator=teich-lab/" +
         library_version() + "\n" + body();
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

CsvTable cover_csv(const CoverReport& r) {
  CsvTable t("cover", {"n", "width", "count"});
  for (const auto& lv : r.levels) t.add_row({std::to_string(lv.n), format_double(lv.width), std::to_string(lv.count)});
  return t;
}

CsvTable partition_csv(const std::vector<Rational>& eps) {
  CsvTable t("partition", {"n", "epsilon_n_num", "epsilon_n_den", "n_eps_float"});
  for (std::size_t i = 0; i < eps.size(); ++i) {
    const auto n = static_cast<long>(i + 1);
    const Rational ne = eps[i] * n;
    t.add_row({std::to_string(n), eps[i].get_num().get_str(), eps[i].get_den().get_str(), format_double(to_double(ne))});
  }
  return t;
}

void atomic_write(const std::filesystem::path& path, const std::string& content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) fail(Errc::ConfigError, "cannot write " + tmp.string());
    f << content;
    f.flush();
    if (!f) fail(Errc::ConfigError, "write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    fail(Errc::ConfigError, "cannot rename into " + path.string());
  }
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) fail(Errc::ConfigError, "cannot open " + path.string());
  try {
    return Json::parse(f);
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::ConfigError, path.string() + ": " + e.what());
  }
}

}  // namespace teichlab
