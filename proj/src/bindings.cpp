#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mplc/config.hpp"
#include "mplc/io.hpp"
#include "mplc/modes.hpp"
#include "mplc/projector.hpp"
#include "mplc/propagation.hpp"
#include "mplc/quantum.hpp"
#include "mplc/wfm.hpp"

namespace py = pybind11;
using namespace mplc;

namespace {

py::array_t<Complex> field_array(const ComplexField& f) {
    const GridSpec& g = f.grid();
    py::array_t<Complex> out({g.ny, g.nx});
    std::copy(f.amplitude().begin(), f.amplitude().end(), out.mutable_data());
    return out;
}

ComplexField field_from_array(const GridSpec& grid, py::array_t<Complex, py::array::c_style | py::array::forcecast> arr) {
    if (arr.ndim() != 2 || arr.shape(0) != grid.ny || arr.shape(1) != grid.nx)
        throw DimensionError("array shape must be (ny, nx)");
    std::vector<Complex> amp(arr.data(), arr.data() + grid.samples());
    return ComplexField(grid, std::move(amp));
}

py::array_t<double> mask_array(const PhaseMask& m) {
    const GridSpec& g = m.grid();
    py::array_t<double> out({g.ny, g.nx});
    std::copy(m.phase().begin(), m.phase().end(), out.mutable_data());
    return out;
}

PhaseMask mask_from_array(const GridSpec& grid, py::array_t<double, py::array::c_style | py::array::forcecast> arr) {
    if (arr.ndim() != 2 || arr.shape(0) != grid.ny || arr.shape(1) != grid.nx)
        throw DimensionError("array shape must be (ny, nx)");
    std::vector<double> phase(arr.data(), arr.data() + grid.samples());
    return PhaseMask(grid, std::move(phase));
}

py::array_t<double> matrix_array(const CrosstalkMatrix& c) {
    const int d = c.dimension();
    py::array_t<double> out({d, d});
    std::copy(c.values.begin(), c.values.end(), out.mutable_data());
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "multi-plane light conversion: wavefront matching, mode projectors, "
              "and the derived qudit experiments";

    // translators run newest-first, so register the base before the derived
    py::register_exception<DimensionError>(m, "DimensionError", PyExc_ValueError);
    py::register_exception<DegenerateFieldError>(m, "DegenerateFieldError", PyExc_ValueError);
    py::register_exception<TruncationError>(m, "TruncationError", PyExc_ValueError);
    py::register_exception<IoError>(m, "IoError", PyExc_OSError);
    py::register_exception<FormatError>(m, "FormatError", PyExc_ValueError);

    py::class_<GridSpec>(m, "GridSpec")
        .def(py::init<int, int, double, double>(), py::arg("nx"), py::arg("ny"),
             py::arg("pitch_m"), py::arg("wavelength_m"))
        .def_readonly("nx", &GridSpec::nx)
        .def_readonly("ny", &GridSpec::ny)
        .def_readonly("pitch_m", &GridSpec::pitch)
        .def_readonly("wavelength_m", &GridSpec::wavelength)
        .def("__eq__", [](const GridSpec& a, const GridSpec& b) { return a == b; })
        .def("__repr__", [](const GridSpec& g) {
            return "GridSpec(" + std::to_string(g.nx) + "x" + std::to_string(g.ny) + ")";
        });

    py::class_<ComplexField>(m, "ComplexField")
        .def(py::init(&field_from_array), py::arg("grid"), py::arg("amplitude"))
        .def_property_readonly("grid", &ComplexField::grid)
        .def_property_readonly("amplitude", &field_array,
                               "complex128 array of shape (ny, nx)");

    py::class_<PhaseMask>(m, "PhaseMask")
        .def(py::init(&mask_from_array), py::arg("grid"), py::arg("phase"))
        .def_property_readonly("grid", &PhaseMask::grid)
        .def_property_readonly("phase", &mask_array, "float64 array of shape (ny, nx)");

    py::enum_<ModeFamily>(m, "ModeFamily")
        .value("LG", ModeFamily::LG)
        .value("HG", ModeFamily::HG);

    py::class_<ModeSpec>(m, "ModeSpec")
        .def(py::init([](ModeFamily f, int i1, int i2, double waist) {
                 ModeSpec s{f, i1, i2, waist};
                 s.validate();
                 return s;
             }),
             py::arg("family"), py::arg("index1"), py::arg("index2"),
             py::arg("waist_m") = 0.94e-3)
        .def_readonly("family", &ModeSpec::family)
        .def_readonly("index1", &ModeSpec::index1)
        .def_readonly("index2", &ModeSpec::index2)
        .def_readonly("waist_m", &ModeSpec::waist)
        .def("token", &ModeSpec::token)
        .def("label", &ModeSpec::label)
        .def("__repr__", &ModeSpec::label);

    m.def("parse_mode_token", &parse_mode_token, py::arg("token"),
          py::arg("default_waist_m") = 0.94e-3);

    py::class_<WfmConfig>(m, "WfmConfig")
        .def(py::init<>())
        .def_readwrite("n_planes", &WfmConfig::n_planes)
        .def_readwrite("max_sweeps", &WfmConfig::max_sweeps)
        .def_readwrite("target_overlap", &WfmConfig::target_overlap)
        .def_readwrite("active_region", &WfmConfig::active_region)
        .def_readwrite("update_offset", &WfmConfig::update_offset);

    py::class_<ConverterDesign>(m, "ConverterDesign")
        .def_property_readonly("grid", [](const ConverterDesign& d) { return d.grid; })
        .def_property_readonly("masks",
                               [](const ConverterDesign& d) {
                                   py::list out;
                                   for (const PhaseMask& mask : d.masks) out.append(mask_array(mask));
                                   return out;
                               })
        .def_readonly("spacings_m", &ConverterDesign::spacings)
        .def_readonly("input_spec", &ConverterDesign::input_spec)
        .def_readonly("target_waist_m", &ConverterDesign::target_waist)
        .def_readonly("achieved_overlap", &ConverterDesign::achieved_overlap)
        .def_readonly("sweeps_used", &ConverterDesign::sweeps_used)
        .def_readonly("converged", &ConverterDesign::converged)
        .def_readonly("overlap_history", &ConverterDesign::overlap_history);

    // field operations
    m.def("inner_product", &inner_product, py::arg("a"), py::arg("b"));
    m.def("power", &power, py::arg("a"));
    m.def("normalize", &normalize, py::arg("a"));
    m.def("apply_phase", &apply_phase, py::arg("a"), py::arg("mask"));
    m.def("second_moment_width", &second_moment_width, py::arg("a"));

    // mode synthesis
    m.def("lg_mode", &lg_mode, py::arg("spec"), py::arg("grid"));
    m.def("hg_mode", &hg_mode, py::arg("spec"), py::arg("grid"));
    m.def("generate_mode", &generate_mode, py::arg("spec"), py::arg("grid"));
    m.def("gaussian_mode", &gaussian_mode, py::arg("grid"), py::arg("waist_m"));
    m.def(
        "superpose",
        [](const std::vector<Complex>& coefficients, const std::vector<ModeSpec>& specs,
           const GridSpec& grid) {
            return superpose(Superposition{coefficients, specs}, grid);
        },
        py::arg("coefficients"), py::arg("specs"), py::arg("grid"));

    // propagation
    m.def("propagate", &propagate, py::arg("a"), py::arg("distance_m"),
          py::call_guard<py::gil_scoped_release>());
    m.def("forward_pass", &forward_pass, py::arg("a"), py::arg("masks"), py::arg("spacings_m"),
          py::call_guard<py::gil_scoped_release>());
    m.def("backward_pass", &backward_pass, py::arg("g"), py::arg("masks"), py::arg("spacings_m"),
          py::call_guard<py::gil_scoped_release>());

    // wavefront matching
    m.def("overlap_field", &overlap_field, py::arg("m"), py::arg("g"), py::arg("mask"));
    m.def("phase_update", &phase_update, py::arg("overlap"), py::arg("apply_offset") = true);
    m.def("reference_output", &reference_output, py::arg("target"), py::arg("spacings_m"));
    m.def("design_converter", &design_converter, py::arg("input"), py::arg("target"),
          py::arg("config"), py::arg("spacings_m"),
          py::call_guard<py::gil_scoped_release>());
    m.def("conversion_overlap", &conversion_overlap, py::arg("design"), py::arg("input"),
          py::arg("target"), py::call_guard<py::gil_scoped_release>());

    // projector
    py::class_<ProjectionPerturbation>(m, "ProjectionPerturbation")
        .def(py::init([](int sx, int sy, double ws) {
                 return ProjectionPerturbation{sx, sy, ws};
             }),
             py::arg("shift_x_px") = 0, py::arg("shift_y_px") = 0,
             py::arg("waist_scale") = 1.0)
        .def_readwrite("shift_x_px", &ProjectionPerturbation::shift_x_px)
        .def_readwrite("shift_y_px", &ProjectionPerturbation::shift_y_px)
        .def_readwrite("waist_scale", &ProjectionPerturbation::waist_scale);

    py::class_<CrosstalkMatrix>(m, "CrosstalkMatrix")
        .def_readonly("labels", &CrosstalkMatrix::labels)
        .def_property_readonly("values", &matrix_array)
        .def_property_readonly("row_converged",
                               [](const CrosstalkMatrix& c) {
                                   return std::vector<bool>(c.row_converged.begin(),
                                                            c.row_converged.end());
                               })
        .def("visibility", [](const CrosstalkMatrix& c) { return visibility(c); });

    m.def("project", &project, py::arg("design"), py::arg("field"),
          py::arg("perturbation") = ProjectionPerturbation{},
          py::call_guard<py::gil_scoped_release>());
    m.def(
        "crosstalk_matrix",
        [](const std::vector<std::pair<std::string, ComplexField>>& modes, const WfmConfig& cfg,
           const std::vector<double>& spacings, double target_waist, bool require_orthogonal,
           const ProjectionPerturbation& pert) {
            std::vector<LabeledMode> labeled;
            labeled.reserve(modes.size());
            for (const auto& [label, field] : modes) labeled.push_back({label, field});
            py::gil_scoped_release release;
            return crosstalk_matrix(labeled, cfg, spacings, target_waist, require_orthogonal, pert);
        },
        py::arg("modes"), py::arg("config"), py::arg("spacings_m"), py::arg("target_waist_m"),
        py::arg("require_orthogonal") = true,
        py::arg("perturbation") = ProjectionPerturbation{});
    m.def("visibility", &visibility, py::arg("matrix"));

    py::class_<ThroughputModel>(m, "ThroughputModel")
        .def(py::init([](double eff, int n, double coupling) {
                 ThroughputModel t{eff, n, coupling};
                 t.validate();
                 return t;
             }),
             py::arg("per_plane_efficiency") = 0.75, py::arg("n_planes") = 3,
             py::arg("fiber_coupling") = 1.0)
        .def_readwrite("per_plane_efficiency", &ThroughputModel::per_plane_efficiency)
        .def_readwrite("n_planes", &ThroughputModel::n_planes)
        .def_readwrite("fiber_coupling", &ThroughputModel::fiber_coupling);
    m.def("throughput", &throughput, py::arg("model"));

    // quantum layer
    py::class_<ModeBasis>(m, "ModeBasis")
        .def(py::init([](const std::vector<ModeSpec>& modes) {
                 return ModeBasis{static_cast<int>(modes.size()), modes};
             }),
             py::arg("modes"))
        .def_readonly("dimension", &ModeBasis::dimension)
        .def_readonly("modes", &ModeBasis::modes);
    m.def("default_mode_basis", &default_mode_basis, py::arg("waist_m") = 0.94e-3);
    m.def("lg9_set", &lg9_set, py::arg("waist_m") = 0.94e-3);
    m.def("hg9_set", &hg9_set, py::arg("waist_m") = 0.94e-3);

    py::class_<MubSet>(m, "MubSet")
        .def_readonly("dimension", &MubSet::dimension)
        .def_property_readonly("bases", [](const MubSet& s) {
            py::list bases;
            for (const auto& basis : s.bases) {
                py::list states;
                for (const auto& v : basis) states.append(v);
                bases.append(states);
            }
            return bases;
        });
    m.def("mub_states", &mub_states, py::arg("d"));

    m.def("shannon_entropy_d", &shannon_entropy_d, py::arg("x"), py::arg("d"));
    m.def("secret_key_rate", &secret_key_rate, py::arg("error_rate"), py::arg("d"));
    m.def("born_probabilities", &born_probabilities, py::arg("psi"), py::arg("basis"));

    py::class_<Bb84Result>(m, "Bb84Result")
        .def_readonly("dimension", &Bb84Result::dimension)
        .def_readonly("rounds", &Bb84Result::rounds)
        .def_readonly("sifted", &Bb84Result::sifted)
        .def_readonly("errors", &Bb84Result::errors)
        .def_readonly("sifted_fraction", &Bb84Result::sifted_fraction)
        .def_readonly("error_rate", &Bb84Result::error_rate)
        .def_readonly("key_rate", &Bb84Result::key_rate);
    m.def("ideal_bb84_channel", &ideal_bb84_channel, py::arg("d"));
    m.def("simulate_bb84", &simulate_bb84, py::arg("channel"), py::arg("n_rounds"),
          py::arg("seed"));
    m.def("bb84_expected_error_rate", &bb84_expected_error_rate, py::arg("channel"));

    m.def("reconstruct_density", &reconstruct_density, py::arg("probabilities"), py::arg("mubs"));
    m.def("fidelity", &fidelity, py::arg("rho_exp"), py::arg("rho_th"));

    py::enum_<ProjectorSource>(m, "ProjectorSource")
        .value("Ideal", ProjectorSource::Ideal)
        .value("WfmSimulated", ProjectorSource::WfmSimulated);

    py::class_<TomographyOptions>(m, "TomographyOptions")
        .def(py::init<>())
        .def_readwrite("source", &TomographyOptions::source)
        .def_readwrite("grid", &TomographyOptions::grid)
        .def_readwrite("wfm", &TomographyOptions::wfm)
        .def_readwrite("spacings_m", &TomographyOptions::spacings)
        .def_readwrite("target_waist_m", &TomographyOptions::target_waist)
        .def_readwrite("progress", &TomographyOptions::progress);

    py::class_<TomographyResult>(m, "TomographyResult")
        .def_readonly("probabilities", &TomographyResult::probabilities)
        .def_readonly("rho", &TomographyResult::rho)
        .def_readonly("fidelity", &TomographyResult::fidelity)
        .def_readonly("source", &TomographyResult::source)
        .def_readonly("all_converged", &TomographyResult::all_converged);
    // keeps the GIL: options.progress may be a python callable
    m.def("run_tomography", &run_tomography, py::arg("psi"), py::arg("basis"), py::arg("options"));
    m.def("sin_test_state", &sin_test_state);

    // file I/O
    m.def("save_field", &save_field, py::arg("path"), py::arg("field"));
    m.def("load_field", &load_field, py::arg("path"));
    m.def("save_converter", &save_converter, py::arg("path"), py::arg("design"));
    m.def("load_converter", &load_converter, py::arg("path"));
    m.def("save_crosstalk_csv", &save_crosstalk_csv, py::arg("path"), py::arg("matrix"));
    m.def("load_crosstalk_csv", &load_crosstalk_csv, py::arg("path"));
}
