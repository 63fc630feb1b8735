#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "teichlab/dim.hpp"
#include "teichlab/dynamics.hpp"
#include "teichlab/experiments.hpp"
#include "teichlab/io.hpp"
#include "teichlab/saddle.hpp"
#include "teichlab/suspension.hpp"
#include "teichlab/triangulation.hpp"

namespace py = pybind11;
using namespace teichlab;

namespace {

Norm norm_arg(const std::string& s) {
  if (s == "max") return Norm::Max;
  if (s == "euclidean") return Norm::Euclidean;
  throw Error(Errc::InvalidArgument, "norm must be 'max' or 'euclidean'");
}

Iet iet_arg(const std::vector<std::string>& lengths, const std::vector<int>& perm) {
  std::vector<Rational> l;
  for (const auto& s : lengths) l.push_back(parse_rational(s));
  return Iet(std::move(l), Permutation(perm));
}

SuspensionData suspension_arg(const std::string& desc) {
  for (const auto& s : shipped_suspensions())
    if (s.name == desc) return s.data;
  return suspension_from_json(Json::parse(desc));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "teich-lab core: interval exchanges and the SL(2,R) action on translation surfaces";
  m.attr("__version__") = library_version();

  static py::exception<Error> exc(m, "TeichLabError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      PyObject* type = exc.ptr();
      py::object inst = py::reinterpret_steal<py::object>(PyObject_CallFunction(type, "s", e.what()));
      inst.attr("code") = std::string(errc_name(e.code()));
      PyErr_SetObject(type, inst.ptr());
    }
  });

  // permutations and IETs
  m.def("classify_type_w", [](const std::vector<int>& images) {
    const auto r = classify_type_w(Permutation(images));
    return py::make_tuple(r.type_w, r.trace);
  }, "(type_w, a_p trace) for a permutation given by its images");
  m.def("is_irreducible", [](const std::vector<int>& images) { return is_irreducible(Permutation(images)); });
  m.def("iet_evaluate", [](const std::vector<std::string>& lengths, const std::vector<int>& perm, const std::string& x) {
    return to_string(evaluate(iet_arg(lengths, perm), parse_rational(x)));
  }, "T(x) with rationals as 'p/q' strings");
  m.def("epsilon_sequence", [](const std::vector<std::string>& lengths, const std::vector<int>& perm, int n_max) {
    std::vector<std::string> out;
    for (const auto& e : epsilon_sequence(iet_arg(lengths, perm), n_max)) out.push_back(to_string(e));
    return out;
  }, "epsilon_1..epsilon_n_max as 'p/q' strings");
  m.def("weak_mixing_verdict", [](const std::vector<std::string>& lengths, const std::vector<int>& perm, int depth, int n_max,
                                  const std::string& threshold) {
    const auto v = weak_mixing_verdict(iet_arg(lengths, perm), depth, n_max, parse_rational(threshold));
    return py::make_tuple(to_string(v.status), to_double(v.evidence.tail_max_n_eps));
  });

  // matrices
  py::class_<SL2Matrix>(m, "SL2Matrix")
      .def(py::init<double, double, double, double>())
      .def_property_readonly("a", &SL2Matrix::a)
      .def_property_readonly("b", &SL2Matrix::b)
      .def_property_readonly("c", &SL2Matrix::c)
      .def_property_readonly("d", &SL2Matrix::d)
      .def("__mul__", [](const SL2Matrix& x, const SL2Matrix& y) { return x * y; })
      .def("inverse", &SL2Matrix::inverse)
      .def("__repr__", [](const SL2Matrix& x) { return to_string(x); });
  m.def("geodesic", &geodesic);
  m.def("rotation", &rotation);
  m.def("horocycle", &horocycle);
  m.def("opposite_horocycle", &opposite_horocycle);

  // surfaces
  py::class_<TranslationSurface>(m, "TranslationSurface")
      .def_property_readonly("area", &TranslationSurface::area)
      .def_property_readonly("genus", &TranslationSurface::genus)
      .def_property_readonly("stratum", &TranslationSurface::stratum)
      .def_property_readonly("polygon_count", &TranslationSurface::polygon_count)
      .def("cone_angles", [](const TranslationSurface& x) {
        std::vector<double> a;
        for (const auto& c : x.cone_points()) a.push_back(c.angle);
        return a;
      })
      .def("to_json", [](const TranslationSurface& x) { return to_json(x).dump(); });
  m.def("surface_from_json", [](const std::string& s) { return surface_from_json(Json::parse(s)); });
  m.def("builtin_surface", &builtin_surface);
  m.def("builtin_surface_names", &builtin_surface_names);
  m.def("act", &act);
  m.def("normalize_area", &normalize_area);
  m.def("delaunay_surface", &delaunay_surface);
  m.def("systole", [](const TranslationSurface& x, const std::string& norm) { return systole(x, norm_arg(norm)); },
        py::arg("x"), py::arg("norm") = "max");
  m.def("saddle_connections", [](const TranslationSurface& x, double bound, const std::string& norm) {
    SaddleOptions o;
    o.norm = norm_arg(norm);
    std::vector<std::complex<double>> out;
    for (const auto& sc : saddle_connections(x, bound, o)) out.push_back(sc.holonomy);
    return out;
  }, py::arg("x"), py::arg("bound"), py::arg("norm") = "max", "holonomies of saddle connections with norm <= bound");

  // suspensions
  m.def("shipped_suspensions", [] {
    std::vector<std::string> names;
    for (const auto& s : shipped_suspensions()) names.push_back(s.name);
    return names;
  });
  m.def("suspension_json", [](const std::string& name) { return to_json(suspension_arg(name)).dump(); });
  m.def("suspend", [](const std::string& desc) { return suspend(suspension_arg(desc)); },
        "suspend a shipped suspension (by name) or a SuspensionData JSON string");
  m.def("verify_local_product", [](const std::string& desc, const std::vector<double>& shears) {
    return verify_local_product(suspension_arg(desc), shears).max_discrepancy;
  });
  m.def("first_return_max_error", [](const std::string& desc, int samples) {
    const auto s = suspension_arg(desc);
    const auto table = first_return_oracle(suspend(s), base_transversal(s), samples);
    double worst = 0;
    for (const auto& smp : table.samples) worst = std::max(worst, std::abs(smp.image - to_double(evaluate(s.base, from_double(smp.x)))));
    return worst;
  });

  // dynamics and dimension
  py::class_<BadSetMask>(m, "BadSetMask")
      .def_property_readonly("level", [](const BadSetMask& b) { return b.grid.level; })
      .def_property_readonly("step", [](const BadSetMask& b) { return b.grid.step; })
      .def_property_readonly("interval_count", &BadSetMask::interval_count)
      .def_property_readonly("indices", [](const BadSetMask& b) { return b.bits; })
      .def("__len__", &BadSetMask::count)
      .def("to_json", [](const BadSetMask& b) { return to_json(b).dump(); });
  m.def("recurrence_mask", [](const TranslationSurface& x, int level, double eps, int N, double t, double delta, const std::string& norm) {
    RecurrenceOptions o;
    o.eps = eps;
    o.N = N;
    o.t = t;
    o.delta = delta;
    o.norm = norm_arg(norm);
    py::gil_scoped_release release;
    return recurrence_mask(x, {level, t}, o);
  }, py::arg("x"), py::arg("level"), py::arg("eps"), py::arg("N"), py::arg("t"), py::arg("delta"), py::arg("norm") = "euclidean");
  m.def("birkhoff_average", [](const TranslationSurface& x, double s, double T, double dt) {
    const auto r = birkhoff_average_continuous(x, s, T, systole_observable(), dt);
    return py::make_tuple(r.value, r.quadrature_error);
  }, "(1/T) int_0^T min(1, systole(g_t h_s x)) dt and its quadrature error");
  m.def("full_masks", &full_masks);
  m.def("singleton_masks", &singleton_masks);
  m.def("cantor_masks", &cantor_masks);
  m.def("cantor_step", &cantor_step);
  m.def("estimate_dimension", [](const std::vector<BadSetMask>& masks, double t, double fraction) {
    FitOptions o;
    o.fraction = fraction;
    return to_json(estimate_dimension(accumulate_cover(masks, t), o)).dump();
  }, py::arg("masks"), py::arg("t"), py::arg("fraction") = 0.5, "DimensionEstimate as a JSON string");

  // experiments
  m.def("catalogue_json", [] { return catalogue_json().dump(); });
  m.def("run_experiment_json", [](const std::string& config, std::optional<std::string> out_dir, std::optional<std::uint64_t> seed,
                                  std::optional<unsigned> threads) {
    RunOptions o;
    if (out_dir) o.out_dir = *out_dir;
    if (seed) o.seed = *seed;
    if (threads) o.threads = *threads;
    const Json cfg = Json::parse(config);
    RunResult r;
    {
      py::gil_scoped_release release;
      r = run_experiment(cfg, o);
    }
    Json files = Json::object();
    for (const auto& f : r.files) files[f.name] = f.content;
    return Json{{"summary", r.summary}, {"files", files}}.dump();
  }, py::arg("config"), py::arg("out_dir") = py::none(), py::arg("seed") = py::none(), py::arg("threads") = py::none());
}
