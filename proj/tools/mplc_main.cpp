// mplc: design wavefront-matched mode converters and run the derived
// mode-measurement, quantum-cryptography, and tomography experiments.
//
// Exit codes: 0 success, 2 usage or parse error, 3 optimizer did not
// converge, 4 I/O failure.

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mplc/config.hpp"
#include "mplc/io.hpp"
#include "mplc/modes.hpp"
#include "mplc/projector.hpp"
#include "mplc/quantum.hpp"
#include "mplc/wfm.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace mplc;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitUnconverged = 3;
constexpr int kExitIo = 4;

struct CommonFlags {
    std::string config_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<int> planes;
    std::optional<int> grid_n;
    std::optional<double> waist_mm;
    std::optional<double> spacing_m;
    std::optional<int> active;
    std::optional<double> target_overlap;
    std::optional<int> max_sweeps;
};

void add_common_flags(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("--config", f.config_path, "key=value config file");
    cmd->add_option("--out", f.out_dir, "output directory (default .)");
    cmd->add_option("--seed", f.seed, "RNG seed");
    cmd->add_option("--planes", f.planes, "number of phase planes");
    cmd->add_option("--grid", f.grid_n, "grid samples per side");
    cmd->add_option("--waist", f.waist_mm, "beam waist in mm");
    cmd->add_option("--spacing", f.spacing_m, "plane spacing in meters");
    cmd->add_option("--active", f.active, "active mask region in samples");
    cmd->add_option("--overlap", f.target_overlap, "target conversion overlap");
    cmd->add_option("--sweeps", f.max_sweeps, "maximum optimizer sweeps");
}

RunConfig resolve_config(const CommonFlags& f) {
    RunConfig cfg;
    if (!f.config_path.empty())
        apply_key_values(cfg, read_key_values(f.config_path));
    if (!f.out_dir.empty()) cfg.output_dir = f.out_dir;
    if (f.seed) cfg.seed = *f.seed;
    if (f.planes) cfg.n_planes = *f.planes;
    if (f.grid_n) cfg.nx = cfg.ny = *f.grid_n;
    if (f.waist_mm) cfg.waist_m = *f.waist_mm * 1e-3;
    if (f.spacing_m) cfg.spacings_m = {*f.spacing_m};
    if (f.active) cfg.active_region = *f.active;
    if (f.target_overlap) cfg.target_overlap = *f.target_overlap;
    if (f.max_sweeps) cfg.max_sweeps = *f.max_sweeps;
    cfg.validate();
    return cfg;
}

std::string sanitize(std::string s) {
    for (char& c : s)
        if (c == ':' || c == ',' || c == ' ' || c == '/') c = '_';
    return s;
}

json config_json(const RunConfig& cfg) {
    return json{{"nx", cfg.nx},
                {"ny", cfg.ny},
                {"pitch_m", cfg.pitch_m},
                {"wavelength_m", cfg.wavelength_m},
                {"waist_m", cfg.waist_m},
                {"n_planes", cfg.n_planes},
                {"spacings_m", cfg.spacings()},
                {"target_overlap", cfg.target_overlap},
                {"max_sweeps", cfg.max_sweeps},
                {"active_region", cfg.active_region},
                {"seed", cfg.seed},
                {"output_dir", cfg.output_dir}};
}

void write_report(const fs::path& path, const json& report) {
    std::ofstream out(path);
    if (!out)
        throw IoError("cannot write report: " + path.string());
    out << report.dump(2) << '\n';
}

fs::path ensure_out_dir(const RunConfig& cfg) {
    fs::path dir(cfg.output_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
        throw IoError("cannot create output directory: " + dir.string());
    return dir;
}

double elapsed_s(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

ComplexField field_for_token(const std::string& token, const RunConfig& cfg) {
    if (!token.empty() && token.front() == '[')
        return superpose(parse_superposition_json(token, cfg.waist_m), cfg.grid());
    return generate_mode(parse_mode_token(token, cfg.waist_m), cfg.grid());
}

int cmd_design(const std::string& token, const CommonFlags& flags) {
    const RunConfig cfg = resolve_config(flags);
    const auto dir = ensure_out_dir(cfg);
    const auto t0 = std::chrono::steady_clock::now();

    const ComplexField input = field_for_token(token, cfg);
    const ComplexField target = gaussian_mode(cfg.grid(), cfg.waist_m);
    ConverterDesign design = design_converter(input, target, cfg.wfm(), cfg.spacings());
    design.input_spec = token;

    const fs::path conv_path = dir / ("converter_" + sanitize(token) + ".mplc");
    save_converter(conv_path.string(), design);

    json report{{"command", "design"},
                {"config", config_json(cfg)},
                {"mode", token},
                {"achieved_overlap", design.achieved_overlap},
                {"sweeps_used", design.sweeps_used},
                {"converged", design.converged},
                {"timings_s", {{"total", elapsed_s(t0)}}},
                {"outputs", {conv_path.string()}}};
    const fs::path report_path = dir / ("report_design_" + sanitize(token) + ".json");
    write_report(report_path, report);

    std::printf("design %s: overlap=%.6f sweeps=%d %s\n", token.c_str(),
                design.achieved_overlap, design.sweeps_used,
                design.converged ? "converged" : "NOT CONVERGED");
    std::printf("wrote %s\n", conv_path.c_str());
    return design.converged ? kExitOk : kExitUnconverged;
}

std::vector<LabeledMode> mode_set_for_token(const std::string& set_token, const RunConfig& cfg) {
    std::vector<LabeledMode> modes;
    if (set_token == "lg9" || set_token == "hg9") {
        const auto specs = set_token == "lg9" ? lg9_set(cfg.waist_m) : hg9_set(cfg.waist_m);
        for (const auto& spec : specs)
            modes.push_back({spec.label(), generate_mode(spec, cfg.grid())});
    } else if (set_token == "mub14") {
        const ModeBasis basis = default_mode_basis(cfg.waist_m);
        const MubSet mubs = mub_states(basis.dimension);
        for (int b = 0; b < 2; ++b) {
            for (int n = 0; n < basis.dimension; ++n) {
                Superposition s;
                for (int m = 0; m < basis.dimension; ++m) {
                    s.coefficients.push_back(mubs.bases[b][n](m));
                    s.specs.push_back(basis.modes[m]);
                }
                modes.push_back({(b == 0 ? "comp" : "fourier") + std::to_string(n),
                                 superpose(s, cfg.grid())});
            }
        }
    } else {
        throw std::invalid_argument("unknown mode set '" + set_token +
                                    "' (expected lg9, hg9, or mub14)");
    }
    return modes;
}

int cmd_crosstalk(const std::string& set_token, const CommonFlags& flags, int shift_px) {
    const RunConfig cfg = resolve_config(flags);
    const auto dir = ensure_out_dir(cfg);
    const auto t0 = std::chrono::steady_clock::now();

    const auto modes = mode_set_for_token(set_token, cfg);
    ProjectionPerturbation pert;
    pert.shift_x_px = shift_px;
    const bool orthogonal_set = set_token != "mub14";
    std::fprintf(stderr, "designing %zu converters...\n", modes.size());
    const CrosstalkMatrix matrix = crosstalk_matrix(modes, cfg.wfm(), cfg.spacings(),
                                                    cfg.waist_m, orthogonal_set, pert);
    const double vis = visibility(matrix);

    const fs::path csv_path = dir / ("crosstalk_" + set_token + ".csv");
    save_crosstalk_csv(csv_path.string(), matrix);

    bool all_converged = true;
    json rows = json::array();
    for (int i = 0; i < matrix.dimension(); ++i) {
        all_converged = all_converged && matrix.row_converged[i];
        rows.push_back({{"label", matrix.labels[i]},
                        {"converged", static_cast<bool>(matrix.row_converged[i])},
                        {"diagonal", matrix.at(i, i)}});
    }
    json report{{"command", "crosstalk"},
                {"config", config_json(cfg)},
                {"set", set_token},
                {"visibility", vis},
                {"mask_shift_px", shift_px},
                {"rows", rows},
                {"timings_s", {{"total", elapsed_s(t0)}}},
                {"outputs", {csv_path.string()}}};
    write_report(dir / ("report_crosstalk_" + set_token + ".json"), report);

    std::printf("crosstalk %s: visibility=%.6f (%d modes)%s\n", set_token.c_str(), vis,
                matrix.dimension(), all_converged ? "" : " [UNCONVERGED ROWS]");
    std::printf("wrote %s\n", csv_path.c_str());
    return all_converged ? kExitOk : kExitUnconverged;
}

int cmd_bb84(const std::string& channel, std::int64_t rounds, const CommonFlags& flags) {
    const RunConfig cfg = resolve_config(flags);
    const auto dir = ensure_out_dir(cfg);

    CrosstalkMatrix matrix;
    if (channel == "ideal") {
        matrix = ideal_bb84_channel(7);
    } else {
        matrix = load_crosstalk_csv(channel);
        if (matrix.dimension() != 14)
            throw FormatError("bb84 channel must be a 14x14 matrix (7 computational + 7 Fourier)");
    }
    const Bb84Result r = simulate_bb84(matrix, rounds, cfg.seed);

    json report{{"command", "bb84"},
                {"config", config_json(cfg)},
                {"channel", channel},
                {"rounds", r.rounds},
                {"sifted", r.sifted},
                {"errors", r.errors},
                {"sifted_fraction", r.sifted_fraction},
                {"error_rate", r.error_rate},
                {"key_rate_bits", r.key_rate},
                {"expected_error_rate", bb84_expected_error_rate(matrix)},
                {"detector_factor_note",
                 "single-outcome projection reduces the per-sent-photon rate by a factor d"}};
    write_report(dir / "report_bb84.json", report);

    std::printf("bb84: rounds=%lld sifted=%lld e_b=%.4f R=%.4f bits/sifted photon\n",
                static_cast<long long>(r.rounds), static_cast<long long>(r.sifted),
                r.error_rate, r.key_rate);
    return kExitOk;
}

StateVector state_for_token(const std::string& token) {
    if (token == "sinstate")
        return sin_test_state();
    if (token.rfind("comp:", 0) == 0) {
        const int k = std::stoi(token.substr(5));
        if (k < 1 || k > 7)
            throw std::invalid_argument("comp:<k> expects k in 1..7");
        StateVector psi = StateVector::Zero(7);
        psi(k - 1) = 1.0;
        return psi;
    }
    if (!token.empty() && token.front() == '[') {
        json j = json::parse(token);
        StateVector psi(j.size());
        for (std::size_t i = 0; i < j.size(); ++i) {
            if (j[i].is_array())
                psi(i) = Complex(j[i].at(0).get<double>(), j[i].at(1).get<double>());
            else
                psi(i) = j[i].get<double>();
        }
        const double n = psi.norm();
        if (!(n > 0.0))
            throw std::invalid_argument("state amplitudes are all zero");
        return psi / n;
    }
    throw std::invalid_argument("unknown state token '" + token +
                                "' (expected sinstate, comp:<k>, or a JSON amplitude list)");
}

int cmd_tomography(const std::string& state_token, const std::string& source,
                   const CommonFlags& flags) {
    const RunConfig cfg = resolve_config(flags);
    const auto dir = ensure_out_dir(cfg);
    const auto t0 = std::chrono::steady_clock::now();

    const StateVector psi = state_for_token(state_token);
    const ModeBasis basis = default_mode_basis(cfg.waist_m);
    if (psi.size() != basis.dimension)
        throw std::invalid_argument("state dimension must be 7 for the LG mode basis");

    TomographyOptions opts;
    if (source == "ideal") {
        opts.source = ProjectorSource::Ideal;
    } else if (source == "wfm") {
        opts.source = ProjectorSource::WfmSimulated;
        opts.grid = cfg.grid();
        opts.wfm = cfg.wfm();
        opts.spacings = cfg.spacings();
        opts.target_waist = cfg.waist_m;
        opts.progress = [](int done, int total) {
            std::fprintf(stderr, "\rprojector %d/%d", done, total);
            if (done == total) std::fprintf(stderr, "\n");
        };
    } else {
        throw std::invalid_argument("projector source must be 'ideal' or 'wfm'");
    }

    const TomographyResult result = run_tomography(psi, basis, opts);
    const int d = basis.dimension;

    json probs = json::array();
    json rho_re = json::array(), rho_im = json::array();
    for (int k = 0; k <= d; ++k) {
        json row = json::array();
        for (int n = 0; n < d; ++n) row.push_back(result.probabilities(k, n));
        probs.push_back(row);
    }
    for (int i = 0; i < d; ++i) {
        json re = json::array(), im = json::array();
        for (int j = 0; j < d; ++j) {
            re.push_back(result.rho(i, j).real());
            im.push_back(result.rho(i, j).imag());
        }
        rho_re.push_back(re);
        rho_im.push_back(im);
    }
    json report{{"command", "tomography"},
                {"config", config_json(cfg)},
                {"state_spec", state_token},
                {"probabilities", probs},
                {"rho_real", rho_re},
                {"rho_imag", rho_im},
                {"fidelity", result.fidelity},
                {"projector_source", source},
                {"all_converged", result.all_converged},
                {"timings_s", {{"total", elapsed_s(t0)}}}};
    const fs::path report_path = dir / ("report_tomography_" + sanitize(state_token) + ".json");
    write_report(report_path, report);

    std::printf("tomography %s (%s projectors): fidelity=%.6f%s\n", state_token.c_str(),
                source.c_str(), result.fidelity,
                result.all_converged ? "" : " [UNCONVERGED PROJECTORS]");
    std::printf("wrote %s\n", report_path.c_str());
    return result.all_converged ? kExitOk : kExitUnconverged;
}

int cmd_propagate(const std::string& token, double distance, const CommonFlags& flags) {
    const RunConfig cfg = resolve_config(flags);
    const auto dir = ensure_out_dir(cfg);

    const ComplexField field = field_for_token(token, cfg);
    const ComplexField out = propagate(field, distance);
    const double width = second_moment_width(out);

    char zbuf[32];
    std::snprintf(zbuf, sizeof zbuf, "%g", distance);
    const fs::path field_path =
        dir / ("field_" + sanitize(token) + "_z" + sanitize(zbuf) + ".mplc");
    save_field(field_path.string(), out);

    json report{{"command", "propagate"},
                {"config", config_json(cfg)},
                {"mode", token},
                {"distance_m", distance},
                {"second_moment_waist_m", width},
                {"power", power(out)},
                {"outputs", {field_path.string()}}};
    write_report(dir / ("report_propagate_" + sanitize(token) + ".json"), report);

    std::printf("propagate %s z=%g m: second-moment waist = %.6g mm, power = %.9f\n",
                token.c_str(), distance, width * 1e3, power(out));
    std::printf("wrote %s\n", field_path.c_str());
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"multi-plane light conversion designer and simulator"};
    app.require_subcommand(1);

    CommonFlags flags;

    std::string design_token;
    auto* design = app.add_subcommand("design", "design a converter for one mode");
    design->add_option("mode", design_token, "mode token, e.g. LG:-1,1:0.94")->required();
    add_common_flags(design, flags);

    std::string set_token;
    int shift_px = 0;
    auto* crosstalk = app.add_subcommand("crosstalk", "cross-talk matrix for a mode set");
    crosstalk->add_option("set", set_token, "lg9, hg9, or mub14")->required();
    crosstalk->add_option("--shift-px", shift_px, "lateral mask misalignment in pixels");
    add_common_flags(crosstalk, flags);

    std::string channel = "ideal";
    std::int64_t rounds = 100000;
    auto* bb84 = app.add_subcommand("bb84", "run the 7-dimensional BB84 protocol");
    bb84->add_option("--channel", channel, "crosstalk CSV path or 'ideal'");
    bb84->add_option("--rounds", rounds, "number of rounds");
    add_common_flags(bb84, flags);

    std::string state_token, source = "ideal";
    auto* tomo = app.add_subcommand("tomography", "reconstruct a 7-dimensional state");
    tomo->add_option("state", state_token, "sinstate, comp:<k>, or JSON amplitudes")->required();
    tomo->add_option("--projectors", source, "ideal or wfm");
    add_common_flags(tomo, flags);

    std::string prop_token;
    double distance = 0.0;
    auto* prop = app.add_subcommand("propagate", "propagate a mode and report its width");
    prop->add_option("mode", prop_token, "mode token")->required();
    prop->add_option("--distance", distance, "propagation distance in meters")->required();
    add_common_flags(prop, flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (design->parsed()) return cmd_design(design_token, flags);
        if (crosstalk->parsed()) return cmd_crosstalk(set_token, flags, shift_px);
        if (bb84->parsed()) return cmd_bb84(channel, rounds, flags);
        if (tomo->parsed()) return cmd_tomography(state_token, source, flags);
        if (prop->parsed()) return cmd_propagate(prop_token, distance, flags);
    } catch (const IoError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitIo;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    } catch (const std::domain_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return kExitUsage;
}
