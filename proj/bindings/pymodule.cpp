#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dirac/generator.hpp"
#include "dirac/inverse.hpp"
#include "dirac/io.hpp"
#include "dirac/spectrum.hpp"

namespace py = pybind11;
using namespace dirac;

namespace {

Spectrum spectrum_from_entries(const std::vector<SpectrumEntry>& entries) {
    Spectrum s;
    s.entries = entries;
    return s;
}

SpectralDatum datum_from_entries(const std::vector<SpectrumEntry>& entries,
                                 const BoundaryParams& bp, int k_min, int k_max) {
    return SpectralDatum::from_spectrum(spectrum_from_entries(entries), bp, k_min, k_max);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Spectral solver for the 1-D Dirac operator with a rank-one non-local potential";

    py::class_<BoundaryParams>(m, "BoundaryParams")
        .def(py::init<double, double>(), py::arg("alpha"), py::arg("beta"))
        .def_property_readonly("alpha", &BoundaryParams::alpha)
        .def_property_readonly("beta", &BoundaryParams::beta)
        .def_property_readonly("offset", &BoundaryParams::offset)
        .def("free_eigenvalue", &BoundaryParams::free_eigenvalue, py::arg("k"))
        .def("__repr__", [](const BoundaryParams& bp) {
            return "BoundaryParams(alpha=" + std::to_string(bp.alpha()) +
                   ", beta=" + std::to_string(bp.beta()) + ")";
        });

    py::class_<Potential>(m, "Potential")
        .def_static(
            "from_coefficients",
            [](const std::map<int, Complex>& coeffs, const BoundaryParams& bp) {
                return Potential::from_coefficients(coeffs, bp);
            },
            py::arg("coeffs"), py::arg("boundary"))
        .def_static(
            "from_grid",
            [](const std::vector<Complex>& v1, const std::vector<Complex>& v2,
               const BoundaryParams& bp) { return Potential::from_grid(v1, v2, bp); },
            py::arg("v1"), py::arg("v2"), py::arg("boundary"))
        .def("shifted", &Potential::shifted, py::arg("c"))
        .def("norm_sq", &Potential::norm_sq)
        .def("coefficients", &Potential::coefficients, py::arg("k_min"), py::arg("k_max"))
        .def("v1_at", &Potential::v1_at, py::arg("x"))
        .def("v2_at", &Potential::v2_at, py::arg("x"))
        .def("vtilde_plus", &Potential::vtilde_plus, py::arg("lam"))
        .def("vtilde_minus", &Potential::vtilde_minus, py::arg("lam"))
        .def("phi_plus", &Potential::phi_plus, py::arg("lam"))
        .def("phi_minus", &Potential::phi_minus, py::arg("lam"))
        .def("g_plus", &Potential::g_plus, py::arg("xi"))
        .def("g_minus", &Potential::g_minus, py::arg("xi"))
        .def("v_big", &Potential::v_big, py::arg("lam"))
        .def_property_readonly("boundary", &Potential::boundary);

    py::class_<OperatorSpec>(m, "OperatorSpec")
        .def_static("make", &OperatorSpec::make, py::arg("mu"), py::arg("potential"))
        .def_property_readonly("mu", &OperatorSpec::mu)
        .def_property_readonly("potential", &OperatorSpec::potential)
        .def_property_readonly("renormalized", &OperatorSpec::renormalized);

    py::class_<CharFunEval>(m, "CharFunEval")
        .def(py::init<OperatorSpec>(), py::arg("spec"))
        .def("delta0", &CharFunEval::delta0, py::arg("lam"))
        .def("delta", &CharFunEval::delta, py::arg("lam"))
        .def("q", &CharFunEval::q, py::arg("lam"))
        .def("r_function", &CharFunEval::r_function, py::arg("lam"));

    py::class_<SpectrumEntry>(m, "SpectrumEntry")
        .def_readonly("lam", &SpectrumEntry::lambda)
        .def_readonly("multiplicity", &SpectrumEntry::multiplicity)
        .def_readonly("k_hint", &SpectrumEntry::k_hint)
        .def_property_readonly(
            "cls", [](const SpectrumEntry& e) { return std::string(to_string(e.cls)); })
        .def("__repr__", [](const SpectrumEntry& e) {
            return "SpectrumEntry(lam=" + std::to_string(e.lambda) +
                   ", mult=" + std::to_string(e.multiplicity) + ")";
        });

    py::class_<Classification>(m, "Classification")
        .def_readonly("sigma0", &Classification::sigma0)
        .def_readonly("sigma1", &Classification::sigma1)
        .def_readonly("sigma2", &Classification::sigma2);

    py::class_<RecoveredOperator>(m, "RecoveredOperator")
        .def_readonly("mu", &RecoveredOperator::mu)
        .def_readonly("coefficients", &RecoveredOperator::coefficients)
        .def_readonly("phase_ambiguous", &RecoveredOperator::phase_ambiguous)
        .def_readonly("residuals", &RecoveredOperator::residuals)
        .def_readonly("warnings", &RecoveredOperator::warnings);

    py::class_<ClassJReport>(m, "ClassJReport")
        .def_readonly("real_symmetric", &ClassJReport::real_symmetric)
        .def_readonly("origin_nonzero", &ClassJReport::origin_nonzero)
        .def_readonly("type_ok", &ClassJReport::type_ok)
        .def_readonly("bounded_ok", &ClassJReport::bounded_ok)
        .def_readonly("roots_real_simple", &ClassJReport::roots_real_simple)
        .def_readonly("interlaced", &ClassJReport::interlaced)
        .def_readonly("limit_one", &ClassJReport::limit_one)
        .def_readonly("rate_bounded", &ClassJReport::rate_bounded)
        .def_readonly("type_estimate", &ClassJReport::type_estimate)
        .def_readonly("f_limit", &ClassJReport::f_limit)
        .def_readonly("f_rate", &ClassJReport::f_rate)
        .def_readonly("n_roots", &ClassJReport::n_roots)
        .def_readonly("n_doubles", &ClassJReport::n_doubles)
        .def("verdict", &ClassJReport::verdict);

    m.def("delta_free", &delta_free, py::arg("boundary"), py::arg("lam"));

    m.def(
        "free_spectrum",
        [](const BoundaryParams& bp, int k_min, int k_max) {
            return free_spectrum(bp, k_min, k_max).entries;
        },
        py::arg("boundary"), py::arg("k_min"), py::arg("k_max"));

    m.def("classify", &classify, py::arg("spec"), py::arg("k_min"), py::arg("k_max"),
          py::arg("zero_tol") = 1e-10);

    m.def(
        "assemble",
        [](const OperatorSpec& spec, double lo, double hi, int k_min, int k_max, double tol) {
            return assemble(spec, Interval{lo, hi}, k_min, k_max, tol).entries;
        },
        py::arg("spec"), py::arg("lo"), py::arg("hi"), py::arg("k_min"), py::arg("k_max"),
        py::arg("tol") = 1e-12);

    m.def("matrix_oracle", &matrix_oracle, py::arg("spec"), py::arg("k_min"), py::arg("k_max"));

    m.def(
        "recover_single",
        [](const std::vector<SpectrumEntry>& entries, const BoundaryParams& bp, int k_min,
           int k_max) { return recover_single(datum_from_entries(entries, bp, k_min, k_max)); },
        py::arg("entries"), py::arg("boundary"), py::arg("k_min"), py::arg("k_max"));

    m.def(
        "recover_two_spectra_fourier",
        [](const std::vector<SpectrumEntry>& a, const std::vector<SpectrumEntry>& b,
           const BoundaryParams& bp, int ka_min, int ka_max, int kb_min, int kb_max, double c) {
            return recover_two_spectra_fourier(datum_from_entries(a, bp, ka_min, ka_max),
                                               datum_from_entries(b, bp, kb_min, kb_max), c);
        },
        py::arg("entries_a"), py::arg("entries_b"), py::arg("boundary"), py::arg("ka_min"),
        py::arg("ka_max"), py::arg("kb_min"), py::arg("kb_max"), py::arg("c"));

    m.def(
        "recover_two_spectra_cauchy",
        [](const std::vector<SpectrumEntry>& a, const std::vector<SpectrumEntry>& b,
           const BoundaryParams& bp, int ka_min, int ka_max, int kb_min, int kb_max, double c) {
            return recover_two_spectra_cauchy(datum_from_entries(a, bp, ka_min, ka_max),
                                              datum_from_entries(b, bp, kb_min, kb_max), c);
        },
        py::arg("entries_a"), py::arg("entries_b"), py::arg("boundary"), py::arg("ka_min"),
        py::arg("ka_max"), py::arg("kb_min"), py::arg("kb_max"), py::arg("c"));

    m.def(
        "validate_operator",
        [](const OperatorSpec& spec, double lo, double hi) {
            CharFunEval ev(spec);
            ClassJOptions opt;
            auto delta = [ev](Complex z) { return ev.delta(z); };
            if (spec.potential().closed_form() && spec.potential().constant_shift() == 0.0 &&
                !spec.zero_potential() && spec.mu() != 0.0)
                opt.f_override = [ev](Complex z) { return ev.q(z); };
            return classJ_validate(delta, spec.boundary(), Interval{lo, hi}, opt);
        },
        py::arg("spec"), py::arg("lo"), py::arg("hi"));

    m.def(
        "random_spec_json",
        [](std::uint64_t seed) {
            gen::Rng rng(seed);
            return io::write_spec_json(gen::random_spec(rng));
        },
        py::arg("seed"));

    m.attr("__version__") = "0.1.0";
}
