#include <filesystem>
#include <fstream>
#include <functional>

#include "doctest.h"
#include "teichlab/error.hpp"
#include "teichlab/io.hpp"

using namespace teichlab;

namespace {

Errc code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return Errc::Internal;
}

}  // namespace

TEST_CASE("permutation and IET round trips") {
  const Permutation p({3, 2, 1});
  CHECK(to_json(p).dump() == "[3,2,1]");
  CHECK(permutation_from_json(to_json(p)) == p);
  CHECK(code_of([] { permutation_from_json(Json::parse("[1,1]")); }) == Errc::InvalidArgument);
  CHECK(code_of([] { permutation_from_json(Json::parse("[1,\"2\"]")); }) == Errc::ConfigError);

  const Iet t({make_rational(1, 3), make_rational(2, 3)}, Permutation({2, 1}));
  CHECK(to_json(t).dump() == R"({"lengths":["1/3","2/3"],"perm":[2,1]})");
  const Iet back = iet_from_json(to_json(t));
  CHECK(back.perm() == t.perm());
  CHECK(back.lengths()[0] == t.lengths()[0]);
  CHECK(code_of([] { iet_from_json(Json::parse(R"({"lengths":["1/3","2/3"],"perm":[2,1],"x":1})")); }) == Errc::ConfigError);
  CHECK(code_of([] { iet_from_json(Json::parse(R"({"lengths":["1/0","2/3"],"perm":[2,1]})")); }) == Errc::ConfigError);
  CHECK(code_of([] { iet_from_json(Json::parse(R"({"lengths":["1/3","2/3"],"perm":[1,2]})")); }) == Errc::NotIrreducible);
}

TEST_CASE("surface and suspension round trips") {
  for (const auto& name : builtin_surface_names()) {
    const auto x = builtin_surface(name);
    const auto y = surface_from_json(to_json(x));
    CHECK(y.area() == doctest::Approx(x.area()));
    CHECK(y.genus() == x.genus());
    CHECK(y.stratum() == x.stratum());
    CHECK(to_json(y) == to_json(x));
  }
  const auto j = Json::parse(R"({"polygons":[[[0,0],[1,0],[1,1],[0,1]]],"gluings":[[[0,0],[0,1]],[[0,2],[0,3]]]})");
  CHECK(code_of([&] { surface_from_json(j); }) == Errc::InvalidSurface);

  for (const auto& s : shipped_suspensions()) {
    const auto back = suspension_from_json(to_json(s.data));
    CHECK(back.b == s.data.b);
    CHECK(to_json(back.base) == to_json(s.data.base));
  }
  auto broken = to_json(shipped_suspensions()[0].data);
  broken["b"] = {-1.0, 1.0};
  CHECK(code_of([&] { suspension_from_json(broken); }) == Errc::InvalidSuspension);
}

TEST_CASE("mask encodings") {
  BadSetMask m;
  m.grid = {2, 0.5};
  m.kind = MaskKind::F;
  m.index = 3;
  m.bits = {0, 4, 7};
  const auto j = to_json(m, {{"N", 2}, {"t", 0.5}, {"delta", 0.1}, {"eps", 0.2}});
  CHECK(j["encoding"] == "bits");
  CHECK(j["bits"].get<std::string>().size() == static_cast<std::size_t>(m.interval_count()));
  CHECK(j["meta"]["delta"] == 0.1);
  const auto back = mask_from_json(j);
  CHECK(back.bits == m.bits);
  CHECK(back.kind == MaskKind::F);
  CHECK(back.index == 3);

  BadSetMask big;
  big.grid = {12, 1.0};
  big.bits = {5, 123456789};
  const auto bj = to_json(big);
  CHECK(bj["encoding"] == "indices");
  CHECK(mask_from_json(bj).bits == big.bits);
}

TEST_CASE("CSV tables") {
  CsvTable t("demo", {"a", "b"});
  t.add_row({"1", "x,y"});
  CHECK_THROWS_AS(t.add_row({"1"}), Error);
  CHECK(t.body() == "a,b\n1,\"x,y\"\n");
  CHECK(t.str().starts_with("# teich-lab-csv version=1 kind=demo generator=teich-lab/"));
  CHECK(format_double(0.1) == "0.1");
  CHECK(std::stod(format_double(1.0 / 3)) == 1.0 / 3);

  const auto eps = epsilon_sequence(Iet({make_rational(1, 3), make_rational(2, 3)}, Permutation({2, 1})), 3);
  const auto csv = partition_csv(eps).body();
  CHECK(csv.starts_with("n,epsilon_n_num,epsilon_n_den,n_eps_float\n1,1,3,"));
}

TEST_CASE("dimension outputs") {
  const auto r = accumulate_cover(cantor_masks(4), cantor_step());
  CHECK(cover_csv(r).body().starts_with("n,width,count\n1,"));
  const auto j = to_json(estimate_dimension(r));
  for (const char* k : {"dim_upper", "slope", "empty", "levels_used", "residuals", "rms_residual"}) CHECK(j.contains(k));
  CHECK(to_json(r)["levels"].size() == 4);
}

TEST_CASE("atomic writes") {
  const auto dir = std::filesystem::temp_directory_path() / "teichlab_io_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / "out.txt";
  atomic_write(path, "first");
  atomic_write(path, "second");
  std::ifstream f(path);
  std::string s;
  std::getline(f, s);
  CHECK(s == "second");
  CHECK_FALSE(std::filesystem::exists(dir / "out.txt.tmp"));
  CHECK(code_of([&] { atomic_write(dir / "missing" / "x.txt", "y"); }) == Errc::ConfigError);
  CHECK(code_of([&] { read_json_file(dir / "absent.json"); }) == Errc::ConfigError);
  std::filesystem::remove_all(dir);
}
