#include "mplc/io.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

static_assert(std::endian::native == std::endian::little,
              "file payloads are little-endian float64");

namespace mplc {

namespace {

constexpr char kMagic[] = "MPLC1";

using nlohmann::json;

std::ofstream open_out(const std::string& path, bool binary) {
    std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
    if (!out)
        throw IoError("cannot open for writing: " + path);
    return out;
}

std::ifstream open_in(const std::string& path, bool binary) {
    std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
    if (!in)
        throw IoError("cannot open for reading: " + path);
    return in;
}

json read_header(std::istream& in, const std::string& path, const std::string& kind) {
    std::string magic, meta;
    if (!std::getline(in, magic) || magic != kMagic)
        throw FormatError(path + ": bad magic, expected MPLC1");
    if (!std::getline(in, meta))
        throw FormatError(path + ": missing metadata line");
    json j;
    try {
        j = json::parse(meta);
    } catch (const json::exception& e) {
        throw FormatError(path + ": bad metadata JSON: " + e.what());
    }
    if (j.value("kind", "") != kind)
        throw FormatError(path + ": expected kind '" + kind + "'");
    return j;
}

void write_doubles(std::ostream& out, const double* data, std::size_t count) {
    out.write(reinterpret_cast<const char*>(data),
              static_cast<std::streamsize>(count * sizeof(double)));
}

void read_doubles(std::istream& in, double* data, std::size_t count, const std::string& path) {
    in.read(reinterpret_cast<char*>(data),
            static_cast<std::streamsize>(count * sizeof(double)));
    if (static_cast<std::size_t>(in.gcount()) != count * sizeof(double))
        throw FormatError(path + ": truncated payload");
}

GridSpec grid_from_json(const json& j, const std::string& path) {
    try {
        return GridSpec(j.at("nx").get<int>(), j.at("ny").get<int>(),
                        j.at("pitch_m").get<double>(), j.at("wavelength_m").get<double>());
    } catch (const json::exception& e) {
        throw FormatError(path + ": bad grid metadata: " + e.what());
    } catch (const std::invalid_argument& e) {
        throw FormatError(path + ": invalid grid: " + e.what());
    }
}

}  // namespace

void save_field(const std::string& path, const ComplexField& field) {
    auto out = open_out(path, true);
    const GridSpec& g = field.grid();
    json meta = {{"kind", "field"},
                 {"nx", g.nx},
                 {"ny", g.ny},
                 {"pitch_m", g.pitch},
                 {"wavelength_m", g.wavelength}};
    out << kMagic << '\n' << meta.dump() << '\n';
    // std::complex<double> is layout-compatible with double[2] (re, im)
    write_doubles(out, reinterpret_cast<const double*>(field.amplitude().data()),
                  2 * field.size());
    if (!out)
        throw IoError("write failed: " + path);
}

ComplexField load_field(const std::string& path) {
    auto in = open_in(path, true);
    const json meta = read_header(in, path, "field");
    const GridSpec grid = grid_from_json(meta, path);
    std::vector<Complex> amp(grid.samples());
    read_doubles(in, reinterpret_cast<double*>(amp.data()), 2 * amp.size(), path);
    ComplexField field(grid, std::move(amp));
    if (!field.finite())
        throw FormatError(path + ": non-finite samples");
    return field;
}

void save_converter(const std::string& path, const ConverterDesign& design) {
    if (design.masks.empty())
        throw std::invalid_argument("save_converter: design has no masks");
    auto out = open_out(path, true);
    const GridSpec& g = design.grid;
    json meta = {{"kind", "converter"},
                 {"n_planes", design.n_planes()},
                 {"spacings_m", design.spacings},
                 {"target_waist_m", design.target_waist},
                 {"achieved_overlap", design.achieved_overlap},
                 {"input_spec", design.input_spec},
                 {"grid", {{"nx", g.nx}, {"ny", g.ny}, {"pitch_m", g.pitch},
                           {"wavelength_m", g.wavelength}}}};
    out << kMagic << '\n' << meta.dump() << '\n';
    for (const PhaseMask& m : design.masks)
        write_doubles(out, m.phase().data(), m.phase().size());
    if (!out)
        throw IoError("write failed: " + path);
}

ConverterDesign load_converter(const std::string& path) {
    auto in = open_in(path, true);
    const json meta = read_header(in, path, "converter");
    ConverterDesign design;
    try {
        design.grid = grid_from_json(meta.at("grid"), path);
        design.spacings = meta.at("spacings_m").get<std::vector<double>>();
        design.target_waist = meta.at("target_waist_m").get<double>();
        design.achieved_overlap = meta.at("achieved_overlap").get<double>();
        design.input_spec = meta.value("input_spec", "");
        const int n_planes = meta.at("n_planes").get<int>();
        if (n_planes < 1 || static_cast<std::size_t>(n_planes) != design.spacings.size())
            throw FormatError(path + ": n_planes does not match spacings");
        for (int t = 0; t < n_planes; ++t) {
            std::vector<double> phase(design.grid.samples());
            read_doubles(in, phase.data(), phase.size(), path);
            design.masks.emplace_back(design.grid, std::move(phase));
        }
    } catch (const json::exception& e) {
        throw FormatError(path + ": bad converter metadata: " + e.what());
    }
    design.converged = true;  // convergence is a property of the producing run
    return design;
}

std::string format_crosstalk_csv(const CrosstalkMatrix& matrix) {
    const int d = matrix.dimension();
    std::ostringstream os;
    for (int j = 0; j < d; ++j) os << ',' << matrix.labels[j];
    os << '\n';
    char cell[64];
    for (int i = 0; i < d; ++i) {
        os << matrix.labels[i];
        for (int j = 0; j < d; ++j) {
            std::snprintf(cell, sizeof cell, "%.9g", matrix.at(i, j));
            os << ',' << cell;
        }
        os << '\n';
    }
    std::snprintf(cell, sizeof cell, "%.9g", visibility(matrix));
    os << "# visibility=" << cell << '\n';
    return os.str();
}

CrosstalkMatrix parse_crosstalk_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line))
        throw FormatError("crosstalk csv: empty file");

    auto split = [](const std::string& s) {
        std::vector<std::string> out;
        std::string cur;
        for (char c : s) {
            if (c == ',') {
                out.push_back(cur);
                cur.clear();
            } else if (c != '\r') {
                cur += c;
            }
        }
        out.push_back(cur);
        return out;
    };

    const auto header = split(line);
    if (header.size() < 2 || !header[0].empty())
        throw FormatError("crosstalk csv: bad header row");
    CrosstalkMatrix m;
    m.labels.assign(header.begin() + 1, header.end());
    const int d = m.dimension();
    m.values.assign(static_cast<std::size_t>(d) * d, 0.0);
    m.row_converged.assign(d, true);

    for (int i = 0; i < d; ++i) {
        if (!std::getline(in, line))
            throw FormatError("crosstalk csv: missing row " + std::to_string(i));
        const auto cells = split(line);
        if (static_cast<int>(cells.size()) != d + 1)
            throw FormatError("crosstalk csv: row " + std::to_string(i) + " has wrong width");
        if (cells[0] != m.labels[i])
            throw FormatError("crosstalk csv: row label mismatch at row " + std::to_string(i));
        for (int j = 0; j < d; ++j) {
            try {
                m.at(i, j) = std::stod(cells[j + 1]);
            } catch (const std::exception&) {
                throw FormatError("crosstalk csv: bad number at (" + std::to_string(i) + "," +
                                  std::to_string(j) + ")");
            }
            if (!std::isfinite(m.at(i, j)))
                throw FormatError("crosstalk csv: non-finite value");
        }
    }
    return m;
}

void save_crosstalk_csv(const std::string& path, const CrosstalkMatrix& matrix) {
    auto out = open_out(path, false);
    out << format_crosstalk_csv(matrix);
    if (!out)
        throw IoError("write failed: " + path);
}

CrosstalkMatrix load_crosstalk_csv(const std::string& path) {
    auto in = open_in(path, false);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_crosstalk_csv(buf.str());
}

}  // namespace mplc
