#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sltc/asymptotics.hpp"
#include "sltc/inverse.hpp"
#include "sltc/io.hpp"
#include "sltc/scattering.hpp"
#include "sltc/spectrum.hpp"

namespace py = pybind11;
using namespace sltc;

PYBIND11_MODULE(_sltc, m) {
    m.doc() = "Sturm-Liouville spectra, Titchmarsh-Weyl m-functions and 1D scattering "
              "with an interior transfer condition";

    py::register_exception<ConfigError>(m, "SltcConfigError", PyExc_ValueError);
    py::register_exception<PreconditionError>(m, "PreconditionError", PyExc_ValueError);
    py::register_exception<PoleError>(m, "PoleError", PyExc_ArithmeticError);
    py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);

    py::class_<TransferMatrix>(m, "TransferMatrix")
        .def(py::init<double, double, double, double>(), py::arg("m11"), py::arg("m12"),
             py::arg("m21"), py::arg("m22"))
        .def_readonly("m11", &TransferMatrix::m11)
        .def_readonly("m12", &TransferMatrix::m12)
        .def_readonly("m21", &TransferMatrix::m21)
        .def_readonly("m22", &TransferMatrix::m22)
        .def("det", &TransferMatrix::det);

    py::class_<Problem>(m, "Problem")
        .def(py::init<double, std::vector<double>, TransferMatrix>(), py::arg("half_width"),
             py::arg("q_samples"), py::arg("transfer") = TransferMatrix())
        .def_static("free", &Problem::free_problem, py::arg("half_width"),
                    py::arg("transfer") = TransferMatrix())
        .def_property_readonly("half_width", &Problem::half_width)
        .def_property_readonly("transfer", &Problem::transfer)
        .def_readwrite("steps_per_side", &Problem::steps_per_side)
        .def("q_at", &Problem::q_at, py::arg("x"));

    py::class_<BoundaryAngles>(m, "BoundaryAngles")
        .def(py::init<double, double>(), py::arg("alpha"), py::arg("beta"))
        .def_readonly("alpha", &BoundaryAngles::alpha)
        .def_readonly("beta", &BoundaryAngles::beta);

    py::class_<SpectralDataset>(m, "SpectralDataset")
        .def_readonly("eigenvalues", &SpectralDataset::eigenvalues)
        .def_readonly("norming_constants", &SpectralDataset::norming_constants);

    m.def(
        "eigenvalues",
        [](const Problem& p, const BoundaryAngles& a, int n_max, bool with_norming) {
            SpectrumOptions opts;
            opts.with_norming = with_norming;
            return compute_spectrum(p, a, n_max, opts);
        },
        py::arg("problem"), py::arg("angles"), py::arg("n_max"), py::arg("with_norming") = false);
    m.def(
        "characteristic",
        [](const Problem& p, const BoundaryAngles& a, Complex lam) {
            return characteristic(p, a, lam);
        },
        py::arg("problem"), py::arg("angles"), py::arg("lambda"));
    m.def(
        "weyl_m",
        [](const Problem& p, const BoundaryAngles& a, Complex lam) { return weyl_m(p, a, lam); },
        py::arg("problem"), py::arg("angles"), py::arg("lambda"));
    m.def("weyl_m_residue", &weyl_m_residue, py::arg("problem"), py::arg("angles"),
          py::arg("lambda_n"));
    m.def("norming_constant", &norming_constant, py::arg("problem"), py::arg("angles"),
          py::arg("lambda_n"));
    m.def(
        "m_asymptote",
        [](const BoundaryAngles& a, Complex lam) { return m_asymptote(a, lam); },
        py::arg("angles"), py::arg("lambda"));
    m.def(
        "delta_leading",
        [](double S, const TransferMatrix& M, const BoundaryAngles& a, Complex lam) {
            return delta_leading(S, M, a, lam);
        },
        py::arg("half_width"), py::arg("transfer"), py::arg("angles"), py::arg("lambda"));

    py::class_<TwoSpectraInput>(m, "TwoSpectraInput")
        .def(py::init<>())
        .def_readwrite("lambdas", &TwoSpectraInput::lambdas)
        .def_readwrite("mus", &TwoSpectraInput::mus)
        .def_readwrite("alpha", &TwoSpectraInput::alpha)
        .def_readwrite("alpha_prime", &TwoSpectraInput::alpha_prime)
        .def_readwrite("truncation", &TwoSpectraInput::truncation);

    py::class_<MEval>(m, "MEval")
        .def_readonly("value", &MEval::value)
        .def_readonly("tail_bound", &MEval::tail_bound);

    py::class_<ValueWithError>(m, "ValueWithError")
        .def_readonly("value", &ValueWithError::value)
        .def_readonly("error", &ValueWithError::error);

    m.def("hadamard_ratio", &hadamard_ratio, py::arg("input"), py::arg("lambda"));
    m.def("constant_C", &constant_C, py::arg("input"), py::arg("k0") = 25.0);
    m.def("m_from_two_spectra", &m_from_two_spectra, py::arg("input"), py::arg("lambda"));
    m.def("extend_spectrum", &extend_spectrum, py::arg("lambdas"), py::arg("target_count"));

    py::class_<MittagLefflerModel>(m, "MittagLefflerModel")
        .def(py::init<>())
        .def_readwrite("eigenvalues", &MittagLefflerModel::eigenvalues)
        .def_readwrite("norming_constants", &MittagLefflerModel::norming_constants)
        .def_readwrite("alpha", &MittagLefflerModel::alpha)
        .def_readwrite("m_at_zero", &MittagLefflerModel::m_at_zero)
        .def_readwrite("truncation", &MittagLefflerModel::truncation);

    m.def("m_from_norming", &m_from_norming, py::arg("model"), py::arg("lambda"));
    m.def("m_prime_at_zero", &m_prime_at_zero, py::arg("model"));
    m.def("shifted_model", &shifted_model, py::arg("model"), py::arg("shift"));

    py::class_<ABPair>(m, "ABPair")
        .def_readonly("A", &ABPair::A)
        .def_readonly("B", &ABPair::B);

    py::class_<ScatteringData>(m, "ScatteringData")
        .def_readonly("half_width", &ScatteringData::half_width)
        .def_readonly("xi_grid", &ScatteringData::xi_grid)
        .def_readonly("R", &ScatteringData::R)
        .def_readonly("AB", &ScatteringData::AB)
        .def_readonly("bound_states", &ScatteringData::bound_states);

    py::class_<NeumannData>(m, "NeumannData")
        .def_readonly("nn_eigenvalues", &NeumannData::nn_eigenvalues)
        .def_readonly("nn_norming", &NeumannData::nn_norming)
        .def_readonly("nd_eigenvalues", &NeumannData::nd_eigenvalues);

    m.def("scattering_coefficients", &scattering_coefficients, py::arg("problem"), py::arg("xi"));
    m.def(
        "reflection",
        [](const Problem& p, std::vector<double> grid, bool with_bound_states) {
            ReflectionOptions opts;
            opts.with_bound_states = with_bound_states;
            return reflection(p, std::move(grid), opts);
        },
        py::arg("problem"), py::arg("xi_grid"), py::arg("with_bound_states") = true);
    m.def("bound_states", &bound_states, py::arg("problem"), py::arg("eta_max") = 12.0);
    m.def(
        "neumann_data_from_scattering",
        [](const Problem& p, int n_max) {
            const ForwardScatteringModel model(p);
            return neumann_data_from_scattering(model, p.transfer(), n_max);
        },
        py::arg("problem"), py::arg("n_max"),
        "NN/ND spectra and NN norming constants recovered through the scattering layer");

    m.def(
        "load_problem",
        [](const std::string& path) {
            const io::ProblemFile pf = io::load_problem(path);
            return py::make_tuple(pf.problem, pf.angles);
        },
        py::arg("path"));
}
