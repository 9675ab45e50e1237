#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cli.hpp"

#include <sstream>

namespace py = pybind11;
using namespace hyperheight;

namespace {

HeightOptions options(const HyperellipticCurve& C, int prec, std::uint64_t seed,
                      const std::vector<std::string>& reduction) {
  HeightOptions o;
  o.prec.digits = prec;
  o.seed = seed;
  for (const auto& path : reduction)
    for (auto& [p, d] : cli::load_reduction_file(path, &C)) o.reduction_data.emplace(p, std::move(d));
  return o;
}

std::string decimal(const Real& x, const Precision& p) { return to_string(x, p.working_digits()); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Neron-Tate heights on Jacobians of odd-degree hyperelliptic curves";

  auto base = py::register_exception<Error>(m, "HyperheightError", PyExc_RuntimeError);
  py::register_exception<ValidationError>(m, "ValidationError", base.ptr());
  py::register_exception<NumericalDegeneracy>(m, "NumericalDegeneracy", base.ptr());
  py::register_exception<PrecisionError>(m, "PrecisionError", base.ptr());
  py::register_exception<FactorizationBudgetExceeded>(m, "FactorizationBudgetExceeded", base.ptr());
  py::register_exception<ReductionDataRequired>(m, "ReductionDataRequired", base.ptr());

  m.def(
      "height_json",
      [](const std::string& curve, const std::string& divisor, int prec, std::uint64_t seed,
         const std::vector<std::string>& reduction) {
        auto C = cli::parse_curve(curve);
        auto D = cli::parse_divisor(divisor, C);
        auto o = options(C, prec, seed, reduction);
        py::gil_scoped_release nogil;
        return cli::to_json(neron_tate_height(C, D, o)).dump();
      },
      py::arg("curve"), py::arg("divisor"), py::arg("prec") = 40, py::arg("seed") = 0,
      py::arg("reduction") = std::vector<std::string>{});

  m.def(
      "pairing",
      [](const std::string& curve, const std::string& d1, const std::string& d2, int prec, std::uint64_t seed) {
        auto C = cli::parse_curve(curve);
        auto D1 = cli::parse_divisor(d1, C), D2 = cli::parse_divisor(d2, C);
        auto o = options(C, prec, seed, {});
        py::gil_scoped_release nogil;
        Real v = height_pairing(C, D1, D2, o);
        PrecisionScope s(o.prec);
        return decimal(v, o.prec);
      },
      py::arg("curve"), py::arg("d1"), py::arg("d2"), py::arg("prec") = 40, py::arg("seed") = 0);

  m.def(
      "regulator",
      [](const std::string& curve, const std::vector<std::string>& points, int prec, std::uint64_t seed) {
        auto C = cli::parse_curve(curve);
        std::vector<MumfordDivisor> pts;
        for (const auto& t : points) pts.push_back(cli::parse_divisor(t, C));
        auto o = options(C, prec, seed, {});
        py::gil_scoped_release nogil;
        Real v = regulator(C, pts, o);
        PrecisionScope s(o.prec);
        return decimal(v, o.prec);
      },
      py::arg("curve"), py::arg("points"), py::arg("prec") = 40, py::arg("seed") = 0);

  m.def(
      "theta",
      [](const std::vector<std::vector<std::complex<double>>>& tau, const std::vector<std::complex<double>>& z,
         int prec) {
        Precision p{prec, 10};
        PrecisionScope s(p);
        CMatrix O;
        for (const auto& row : tau) {
          CVector r;
          for (auto v : row) r.emplace_back(Real(v.real()), Real(v.imag()));
          O.push_back(std::move(r));
        }
        CVector zz;
        for (auto v : z) zz.emplace_back(Real(v.real()), Real(v.imag()));
        if (zz.empty()) zz.resize(O.size());
        Complex t = theta(zz, O, p);
        return std::complex<double>(t.re.convert_to<double>(), t.im.convert_to<double>());
      },
      py::arg("tau"), py::arg("z") = std::vector<std::complex<double>>{}, py::arg("prec") = 30);

  m.def(
      "run",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        int code;
        {
          py::gil_scoped_release nogil;
          code = cli::run(args, out, err);
        }
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs the command line tool in process; returns (exit code, stdout, stderr).");
}
