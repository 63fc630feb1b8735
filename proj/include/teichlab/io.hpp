#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "teichlab/dim.hpp"
#include "teichlab/dynamics.hpp"
#include "teichlab/iet.hpp"
#include "teichlab/permutation.hpp"
#include "teichlab/surface.hpp"
#include "teichlab/suspension.hpp"

namespace teichlab {

using Json = nlohmann::ordered_json;

inline constexpr int kCsvFormatVersion = 1;
std::string library_version();

// Parsers throw Error(ConfigError) on malformed input; values the type itself
// rejects (a non-bijection, a negative length) keep their own error codes.

// [3,2,1]
Json to_json(const Permutation& p);
Permutation permutation_from_json(const Json& j);

// {"lengths": ["1/3","2/3"], "perm": [2,1]}
Json to_json(const Iet& t);
Iet iet_from_json(const Json& j);

// {"polygons": [[[x,y],...]], "gluings": [[[p,e],[p',e']],...]}
Json to_json(const TranslationSurface& x);
TranslationSurface surface_from_json(const Json& j);

// {"iet": {...}, "b": [...]}
Json to_json(const SuspensionData& s);
SuspensionData suspension_from_json(const Json& j);

// Grid, kind and count, the marked intervals as a bit-string ('1' = bad) when
// the grid has at most 2^20 intervals and as an index list otherwise, and the
// caller's parameters (N, t, delta, eps, ...) under "meta".
Json to_json(const BadSetMask& m, const Json& meta = Json::object());
BadSetMask mask_from_json(const Json& j);

Json to_json(const DimensionEstimate& e);
Json to_json(const CoverReport& r);

// CSV text: a "# teich-lab-csv version=1 ..." comment line, the column names,
// then the rows. Cells are written verbatim; doubles use format_double.
class CsvTable {
 public:
  CsvTable(std::string kind, std::vector<std::string> columns);
  void add_row(std::vector<std::string> cells);
  std::size_t rows() const noexcept { return rows_.size(); }
  std::string str() const;
  // Everything after the version line.
  std::string body() const;

 private:
  std::string kind_;
  std::vector<std::string> columns_;
  std::vector<std::vector<std::string>> rows_;
};

// Shortest round-trip decimal form.
std::string format_double(double v);

CsvTable cover_csv(const CoverReport& r);
// n, epsilon_n_num, epsilon_n_den, n_eps_float for n = 1..size
CsvTable partition_csv(const std::vector<Rational>& eps);

// Writes to a sibling temporary file and renames it over `path`.
void atomic_write(const std::filesystem::path& path, const std::string& content);

Json read_json_file(const std::filesystem::path& path);

}  // namespace teichlab
