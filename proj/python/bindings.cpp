#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "shockcop/checks.hpp"
#include "shockcop/copulas.hpp"
#include "shockcop/csv.hpp"
#include "shockcop/descriptors.hpp"
#include "shockcop/distributions.hpp"
#include "shockcop/errors.hpp"
#include "shockcop/generators.hpp"
#include "shockcop/sampling.hpp"
#include "shockcop/shock_models.hpp"

namespace py = pybind11;
using namespace shockcop;

namespace {

double ext(const ExtendedReal& x) { return x.to_double(); }

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Shock-model copulas";
    m.attr("__version__") = io::version();

    auto base = py::register_exception<Error>(m, "Error");
    py::register_exception<ParseError>(m, "ParseError", base.ptr());
    py::register_exception<DomainError>(m, "DomainError", base.ptr());
    py::register_exception<IllegalConfiguration>(m, "IllegalConfiguration", base.ptr());
    py::register_exception<ContractViolation>(m, "ContractViolation", base.ptr());

    py::class_<Distribution>(m, "Distribution")
        .def_static("uniform", &Distribution::uniform, py::arg("a") = 0.0, py::arg("b") = 1.0)
        .def_static("exponential", &Distribution::exponential, py::arg("rate"))
        .def_static("power_function", &Distribution::power_function, py::arg("k"))
        .def_static("efgm_margin", &Distribution::efgm_margin, py::arg("a"))
        .def_static("efgm_shock", &Distribution::efgm_shock, py::arg("a"))
        .def_static("product", &Distribution::product)
        .def_static("minimum", &Distribution::minimum)
        .def_static("negated", &Distribution::negated)
        .def_static("parse", &descriptors::parse_distribution)
        .def("cdf", [](const Distribution& d, double x) { return d.cdf(x); })
        .def("cdf_left", [](const Distribution& d, double x) { return d.cdf_left(x); })
        .def("quantile", [](const Distribution& d, double u) { return ext(d.quantile(u)); })
        .def("upper_quantile", [](const Distribution& d, double u) { return ext(d.upper_quantile(u)); })
        .def("describe", &Distribution::describe)
        .def("__repr__", [](const Distribution& d) { return "Distribution('" + d.describe() + "')"; });

    py::enum_<GeneratorClass>(m, "GeneratorClass")
        .value("MarshallF", GeneratorClass::MarshallF)
        .value("MaxminPsi", GeneratorClass::MaxminPsi)
        .value("RmmF", GeneratorClass::RmmF)
        .value("SmmH", GeneratorClass::SmmH);

    py::class_<Violation>(m, "Violation")
        .def_readonly("condition", &Violation::condition)
        .def_readonly("u", &Violation::u)
        .def_readonly("observed", &Violation::observed)
        .def_readonly("threshold", &Violation::threshold);

    py::class_<ValidationReport>(m, "ValidationReport")
        .def_readonly("passed", &ValidationReport::passed)
        .def_readonly("violations", &ValidationReport::violations)
        .def_readonly("unenforced", &ValidationReport::unenforced)
        .def("summary", &ValidationReport::summary);

    py::class_<Generator>(m, "Generator")
        .def_static("identity", &Generator::identity, py::arg("cls") = GeneratorClass::MarshallF)
        .def_static("power", &Generator::power, py::arg("alpha"))
        .def_static("two_param", &Generator::two_param, py::arg("alpha"), py::arg("beta"))
        .def_static("efgm", &Generator::efgm, py::arg("a"))
        .def_static("efgm_hat", &Generator::efgm_hat, py::arg("a"))
        .def_static("ramp", &Generator::ramp, py::arg("slope"))
        .def_static("parse", &descriptors::parse_generator, py::arg("descriptor"), py::arg("cls") = py::none())
        .def("__call__", &Generator::operator())
        .def("with_class", &Generator::with_class)
        .def_property_readonly("declared_class", &Generator::declared_class)
        .def("descriptor", &Generator::descriptor)
        .def("describe", &Generator::describe);

    m.def("validate", &validate, py::arg("generator"), py::arg("grid_size") = 1001, py::arg("tol") = py::none());
    m.def("generator_from_shocks",
          [](const Distribution& comp, const Distribution& margin, bool min_relation) {
              ShockGeneratorOptions o;
              o.relation = min_relation ? MarginRelation::Min : MarginRelation::Max;
              return generator_from_shocks(comp, margin, o);
          },
          py::arg("comp"), py::arg("margin"), py::arg("min_relation") = false);
    m.def("hat_to_f", &hat_to_f);
    m.def("rmm_to_smm", &rmm_to_smm);
    m.def("smm_to_rmm", &smm_to_rmm);

    py::class_<Copula>(m, "Copula")
        .def_static("frechet_w", &Copula::frechet_w)
        .def_static("frechet_m", &Copula::frechet_m)
        .def_static("independence", &Copula::independence)
        .def_static("marshall", &Copula::marshall)
        .def_static("maxmin", &Copula::maxmin)
        .def_static("rmm", &Copula::rmm)
        .def_static("smm", &Copula::smm)
        .def_static("efgm", &Copula::efgm, py::arg("a"))
        .def_static("exponential_rmm", &Copula::exponential_rmm)
        .def_static("parse", &descriptors::parse_copula)
        .def("__call__", &Copula::operator())
        .def("eval_clamped", &Copula::eval_clamped)
        .def("describe", &Copula::describe)
        .def("__repr__", [](const Copula& c) { return "Copula('" + c.describe() + "')"; });

    m.def("survival", &survival);
    m.def("sigma1", &sigma1);
    m.def("sigma2", &sigma2);
    m.def("normalize", &normalize);
    m.def("volume", [](const Copula& c, double u1, double u2, double v1, double v2) {
        return volume(c, {u1, u2, v1, v2});
    });

    py::class_<ShockModel>(m, "ShockModel")
        .def_static("marshall", &ShockModel::marshall)
        .def_static("rmm", &ShockModel::rmm)
        .def_static("smm", &ShockModel::smm)
        .def_static("maxmin", &ShockModel::maxmin)
        .def_static("parse", &descriptors::parse_model)
        .def_readonly("fx", &ShockModel::fx)
        .def_readonly("fy", &ShockModel::fy)
        .def_readonly("g1", &ShockModel::g1)
        .def_readonly("g2", &ShockModel::g2)
        .def("describe", &ShockModel::describe);

    m.def("margins", &margins);
    m.def("joint_cdf", [](const ShockModel& s, double x, double y) { return joint_cdf(s, x, y); });
    m.def("induced_copula", &induced_copula);

    py::class_<SamplePairs>(m, "SamplePairs")
        .def_readonly("u", &SamplePairs::u)
        .def_readonly("v", &SamplePairs::v)
        .def_readonly("seed", &SamplePairs::seed)
        .def("__len__", &SamplePairs::size)
        .def("to_csv", [](const SamplePairs& s, bool ranks) { return to_csv(s, ranks); }, py::arg("ranks") = false);

    m.def("sample_model", &sample_model, py::arg("model"), py::arg("n"), py::arg("seed"), py::arg("workers") = 0);

    py::class_<EmpiricalCopula>(m, "EmpiricalCopula")
        .def(py::init<const std::vector<double>&, const std::vector<double>&>())
        .def(py::init<const SamplePairs&>())
        .def("__call__", &EmpiricalCopula::operator())
        .def("as_copula", &EmpiricalCopula::as_copula, py::arg("name") = "sample");

    m.def("sup_distance", &sup_distance, py::arg("a"), py::arg("b"), py::arg("grid") = 21);

    py::class_<CheckEntry>(m, "CheckEntry")
        .def_readonly("id", &CheckEntry::id)
        .def_readonly("passed", &CheckEntry::passed)
        .def_readonly("magnitude", &CheckEntry::magnitude)
        .def_readonly("u", &CheckEntry::u)
        .def_readonly("v", &CheckEntry::v);

    py::class_<CheckSuiteReport>(m, "CheckSuiteReport")
        .def_readonly("suite", &CheckSuiteReport::suite)
        .def_readonly("entries", &CheckSuiteReport::entries)
        .def_property_readonly("passed", &CheckSuiteReport::passed)
        .def("to_text", &CheckSuiteReport::to_text)
        .def("to_csv", &CheckSuiteReport::to_csv);

    m.def("check_copula_axioms",
          [](const Copula& c, std::size_t grid, std::size_t rectangles, double tol, std::uint64_t seed) {
              return check_copula_axioms(c, {grid, rectangles, tol, seed});
          },
          py::arg("copula"), py::arg("grid") = 101, py::arg("rectangles") = 10000, py::arg("tol") = 1e-12,
          py::arg("seed") = 1);
    m.def("check_model_theorem",
          [](const ShockModel& s, std::size_t n, std::size_t grid, std::optional<double> eps, std::uint64_t seed) {
              ModelCheckOptions o;
              o.n = n;
              o.grid = grid;
              o.eps = eps;
              o.seed = seed;
              return check_model_theorem(s, o);
          },
          py::arg("model"), py::arg("n") = 200000, py::arg("grid") = 21, py::arg("eps") = py::none(),
          py::arg("seed") = 1);
    m.def("check_reconstruction",
          [](const Copula& c, const Distribution& fu, const Distribution& fv, std::size_t grid, double tol) {
              ReconstructionCheckOptions o;
              o.grid = grid;
              o.tol = tol;
              return check_reconstruction(c, fu, fv, o);
          },
          py::arg("copula"), py::arg("fu"), py::arg("fv"), py::arg("grid") = 1001, py::arg("tol") = 1e-10);
}
