#include "mplc/config.hpp"

#include <fstream>
#include <sstream>

namespace mplc {

GridSpec RunConfig::grid() const {
    return GridSpec(nx, ny, pitch_m, wavelength_m);
}

WfmConfig RunConfig::wfm() const {
    WfmConfig cfg;
    cfg.n_planes = n_planes;
    cfg.max_sweeps = max_sweeps;
    cfg.target_overlap = target_overlap;
    cfg.active_region = active_region;
    return cfg;
}

std::vector<double> RunConfig::spacings() const {
    if (spacings_m.empty())
        return std::vector<double>(n_planes, 0.80);
    if (spacings_m.size() == 1)
        return std::vector<double>(n_planes, spacings_m.front());
    if (static_cast<int>(spacings_m.size()) != n_planes)
        throw std::invalid_argument("config: spacings_m must have 1 or n_planes entries");
    return spacings_m;
}

void RunConfig::validate() const {
    grid();  // throws on bad grid values
    if (!(waist_m > 0.0))
        throw std::invalid_argument("config: waist_m must be positive");
    if (n_planes < 1)
        throw std::invalid_argument("config: n_planes must be >= 1");
    for (double z : spacings())
        if (!(z > 0.0))
            throw std::invalid_argument("config: spacings must be positive");
    wfm().validate(grid());
}

std::map<std::string, std::string> read_key_values(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open config file: " + path);
    std::map<std::string, std::string> kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto strip = [](std::string s) {
            const auto a = s.find_first_not_of(" \t\r");
            if (a == std::string::npos) return std::string();
            const auto b = s.find_last_not_of(" \t\r");
            return s.substr(a, b - a + 1);
        };
        line = strip(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw FormatError(path + ":" + std::to_string(lineno) + ": expected key=value");
        kv[strip(line.substr(0, eq))] = strip(line.substr(eq + 1));
    }
    return kv;
}

void apply_key_values(RunConfig& config, const std::map<std::string, std::string>& kv) {
    for (const auto& [key, value] : kv) {
        try {
            if (key == "nx") config.nx = std::stoi(value);
            else if (key == "ny") config.ny = std::stoi(value);
            else if (key == "pitch_m") config.pitch_m = std::stod(value);
            else if (key == "wavelength_m") config.wavelength_m = std::stod(value);
            else if (key == "waist_m") config.waist_m = std::stod(value);
            else if (key == "n_planes") config.n_planes = std::stoi(value);
            else if (key == "target_overlap") config.target_overlap = std::stod(value);
            else if (key == "max_sweeps") config.max_sweeps = std::stoi(value);
            else if (key == "active_region") config.active_region = std::stoi(value);
            else if (key == "seed") config.seed = std::stoull(value);
            else if (key == "output_dir") config.output_dir = value;
            else if (key == "spacings_m") {
                config.spacings_m.clear();
                std::istringstream ss(value);
                std::string tok;
                while (std::getline(ss, tok, ','))
                    config.spacings_m.push_back(std::stod(tok));
            } else {
                throw std::invalid_argument("config: unknown key '" + key + "'");
            }
        } catch (const std::invalid_argument& e) {
            if (std::string(e.what()).rfind("config:", 0) == 0) throw;
            throw std::invalid_argument("config: bad value for '" + key + "': " + value);
        } catch (const std::out_of_range&) {
            throw std::invalid_argument("config: value out of range for '" + key + "': " + value);
        }
    }
}

std::string config_snapshot(const RunConfig& config) {
    std::ostringstream os;
    os.precision(17);
    os << "nx=" << config.nx << "\nny=" << config.ny
       << "\npitch_m=" << config.pitch_m
       << "\nwavelength_m=" << config.wavelength_m
       << "\nwaist_m=" << config.waist_m
       << "\nn_planes=" << config.n_planes
       << "\nspacings_m=";
    const auto sp = config.spacings();
    for (std::size_t i = 0; i < sp.size(); ++i) os << (i ? "," : "") << sp[i];
    os << "\ntarget_overlap=" << config.target_overlap
       << "\nmax_sweeps=" << config.max_sweeps
       << "\nactive_region=" << config.active_region
       << "\nseed=" << config.seed
       << "\noutput_dir=" << config.output_dir << '\n';
    return os.str();
}

}  // namespace mplc
