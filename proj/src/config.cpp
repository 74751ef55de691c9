#include "tmsim/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <sstream>
#include <stdexcept>

#include "tmsim/io.hpp"

namespace tmsim {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

double parse_num(const std::string& s, const std::string& where) {
    double v = 0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last)
        throw std::invalid_argument(where + ": bad number '" + s + "'");
    return v;
}

}  // namespace

Ini Ini::parse_file(const std::string& path) {
    return parse_string(read_file(path), path);
}

Ini Ini::parse_string(const std::string& text, const std::string& origin) {
    Ini ini;
    ini.origin_ = origin;
    std::istringstream in(text);
    std::string line, section;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto where = origin + ":" + std::to_string(line_no);
        if (const auto c = line.find_first_of("#;"); c != std::string::npos)
            line.erase(c);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw std::invalid_argument(where + ": unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty())
                throw std::invalid_argument(where + ": empty section name");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument(where + ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        if (key.empty()) throw std::invalid_argument(where + ": empty key");
        ini.data_[section][key] = trim(line.substr(eq + 1));
    }
    return ini;
}

bool Ini::has(const std::string& section, const std::string& key) const {
    const auto s = data_.find(section);
    return s != data_.end() && s->second.count(key) != 0;
}

std::string Ini::get_str(const std::string& section, const std::string& key) const {
    const auto s = data_.find(section);
    if (s != data_.end())
        if (const auto k = s->second.find(key); k != s->second.end())
            return k->second;
    throw std::invalid_argument(origin_ + ": missing key '" + key + "' in [" +
                                section + "]");
}

double Ini::get_num(const std::string& section, const std::string& key) const {
    return parse_num(get_str(section, key),
                     origin_ + ": [" + section + "] " + key);
}

long long Ini::get_int(const std::string& section, const std::string& key) const {
    const std::string s = get_str(section, key);
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw std::invalid_argument(origin_ + ": [" + section + "] " + key +
                                    ": bad integer '" + s + "'");
    return v;
}

std::string Ini::get_str(const std::string& section, const std::string& key,
                         const std::string& dflt) const {
    return has(section, key) ? get_str(section, key) : dflt;
}

double Ini::get_num(const std::string& section, const std::string& key,
                    double dflt) const {
    return has(section, key) ? get_num(section, key) : dflt;
}

long long Ini::get_int(const std::string& section, const std::string& key,
                       long long dflt) const {
    return has(section, key) ? get_int(section, key) : dflt;
}

std::vector<double> Ini::get_nums(const std::string& section,
                                  const std::string& key) const {
    std::istringstream in(get_str(section, key));
    std::vector<double> out;
    std::string tok;
    while (in >> tok)
        out.push_back(
            parse_num(tok, origin_ + ": [" + section + "] " + key));
    return out;
}

std::vector<double> GridSpec::points() const {
    if (n < 1) throw std::invalid_argument("grid needs at least one point");
    std::vector<double> out(static_cast<std::size_t>(n));
    if (n == 1) {
        out[0] = lo;
        return out;
    }
    for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (n - 1);
    return out;
}

namespace {

bool parse_bool(const Ini& ini, const std::string& section, const std::string& key,
                bool dflt) {
    if (!ini.has(section, key)) return dflt;
    std::string s = ini.get_str(section, key);
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
    if (s == "false" || s == "0" || s == "no" || s == "off") return false;
    throw std::invalid_argument(ini.origin() + ": [" + section + "] " + key +
                                ": bad boolean '" + s + "'");
}

GridSpec parse_grid(const Ini& ini, const std::string& key, GridSpec dflt) {
    if (!ini.has("grids", key)) return dflt;
    const auto v = ini.get_nums("grids", key);
    const auto where = ini.origin() + ": [grids] " + key;
    if (v.size() != 3)
        throw std::invalid_argument(where + ": expected 'lo hi count'");
    GridSpec g;
    g.lo = v[0];
    g.hi = v[1];
    const double cnt = v[2];
    g.n = static_cast<int>(std::llround(cnt));
    if (g.n < 1 || g.n != cnt)
        throw std::invalid_argument(where + ": count must be a positive integer");
    if (!(g.hi >= g.lo))
        throw std::invalid_argument(where + ": hi must be >= lo");
    return g;
}

LevelPair builtin_tensors() {
    // fitted against the published site splittings under the bisector field
    LevelPair lp;
    lp.ground = {18.2605, 403.0, 0.0};
    lp.excited = {14.5411, 100.4, 12.0};
    return lp;
}

void check_tensor(const GyroTensor& t, const std::string& name,
                  const std::string& origin) {
    if (t.x < 0 || t.y < 0 || t.z < 0)
        throw std::invalid_argument(origin + ": negative gamma in " + name);
    if (t.x == 0 && t.y == 0 && t.z == 0)
        throw std::invalid_argument(origin + ": all-zero tensor " + name);
}

}  // namespace

Scenario load_scenario(const std::string& path) {
    const std::string text = read_file(path);
    const Ini ini = Ini::parse_string(text, path);
    const std::filesystem::path base = std::filesystem::path(path).parent_path();
    const auto resolve = [&](const std::string& rel) {
        const std::filesystem::path q(rel);
        return q.is_absolute() ? q.string() : (base / q).string();
    };

    Scenario sc;
    sc.config_path = path;
    sc.config_hash = fnv1a64_hex(text);

    sc.theta_deg = ini.get_num("field", "theta_deg", sc.theta_deg);
    sc.B_T = ini.get_num("field", "B_T", sc.B_T);
    if (sc.B_T < 0)
        throw std::invalid_argument(path + ": [field] B_T must be >= 0");
    if (ini.has("field", "polarization")) {
        const auto v = ini.get_nums("field", "polarization");
        if (v.size() != 3)
            throw std::invalid_argument(path +
                                        ": [field] polarization wants 3 components");
        sc.polarization = Vec3(v[0], v[1], v[2]);
    }
    if (sc.polarization.norm() == 0)
        throw std::invalid_argument(path + ": [field] polarization must be nonzero");
    sc.polarization.normalize();

    if (ini.has("tensors", "file")) {
        sc.tensors = load_tensors(resolve(ini.get_str("tensors", "file")));
    } else if (ini.has("tensors.ground", "gamma_x") ||
               ini.has("tensors.excited", "gamma_x")) {
        sc.tensors.ground = {ini.get_num("tensors.ground", "gamma_x"),
                             ini.get_num("tensors.ground", "gamma_y"),
                             ini.get_num("tensors.ground", "gamma_z")};
        sc.tensors.excited = {ini.get_num("tensors.excited", "gamma_x"),
                              ini.get_num("tensors.excited", "gamma_y"),
                              ini.get_num("tensors.excited", "gamma_z")};
    } else {
        sc.tensors = builtin_tensors();
    }
    check_tensor(sc.tensors.ground, "[tensors.ground]", path);
    check_tensor(sc.tensors.excited, "[tensors.excited]", path);

    if (ini.has("frames", "file")) {
        sc.frames_file = resolve(ini.get_str("frames", "file"));
        load_frames(sc.frames_file);  // fail now, not mid-pipeline
    }

    sc.pump.p = ini.get_num("pump", "p", 30.4);
    sc.pump.r = ini.get_num("pump", "r", 69.6);
    sc.pump.kappa = ini.get_num("pump", "kappa", 0.0);
    if (sc.pump.p < 0 || sc.pump.r < 0 || sc.pump.kappa < 0)
        throw std::invalid_argument(path + ": [pump] rates must be >= 0");

    sc.d0 = ini.get_num("probe", "d0", sc.d0);
    sc.window_MHz = ini.get_num("probe", "window_MHz", sc.window_MHz);
    if (!(sc.d0 > 0))
        throw std::invalid_argument(path + ": [probe] d0 must be positive");
    if (!(sc.window_MHz > 0))
        throw std::invalid_argument(path + ": [probe] window_MHz must be positive");

    sc.sweep_theta = parse_grid(ini, "sweep_theta", sc.sweep_theta);
    sc.nutation_t = parse_grid(ini, "nutation_t", sc.nutation_t);
    sc.spectrum_offset.lo = -sc.window_MHz / 2;
    sc.spectrum_offset.hi = sc.window_MHz / 2;
    sc.spectrum_offset = parse_grid(ini, "spectrum_offset", sc.spectrum_offset);
    sc.echo_drive = parse_grid(ini, "echo_drive", sc.echo_drive);
    sc.lifetime_t = parse_grid(ini, "lifetime_t", sc.lifetime_t);

    sc.noise_level = ini.get_num("noise", "level", sc.noise_level);
    if (sc.noise_level < 0)
        throw std::invalid_argument(path + ": [noise] level must be >= 0");
    sc.echo_lognormal = parse_bool(ini, "noise", "echo_lognormal", sc.echo_lognormal);
    const long long seed = ini.get_int("noise", "seed", 0);
    if (seed < 0)
        throw std::invalid_argument(path + ": [noise] seed must be >= 0");
    sc.seed = static_cast<std::uint64_t>(seed);

    sc.hole_fwhm_MHz = ini.get_num("spectrum", "hole_fwhm_MHz", sc.hole_fwhm_MHz);
    sc.antihole_extra_fwhm_MHz =
        ini.get_num("spectrum", "antihole_extra_fwhm_MHz", sc.antihole_extra_fwhm_MHz);
    if (!(sc.hole_fwhm_MHz > 0) || sc.antihole_extra_fwhm_MHz < 0)
        throw std::invalid_argument(path + ": [spectrum] bad linewidths");

    sc.rabi_MHz = ini.get_num("nutation", "rabi_MHz", sc.rabi_MHz);
    if (!(sc.rabi_MHz > 0))
        throw std::invalid_argument(path + ": [nutation] rabi_MHz must be positive");

    sc.area_coeff = ini.get_num("echo", "area_coeff", sc.area_coeff);
    sc.echo_I0 = ini.get_num("echo", "I0", sc.echo_I0);
    if (!(sc.area_coeff > 0) || !(sc.echo_I0 > 0))
        throw std::invalid_argument(path + ": [echo] area_coeff and I0 must be positive");
    if (ini.has("echo", "R")) {
        const double R = ini.get_num("echo", "R");
        if (R < 0 || R > 1)
            throw std::invalid_argument(path + ": [echo] R must lie in [0, 1]");
        sc.R_override = R;
    }

    sc.T1_s = ini.get_num("lifetime", "T1_s", sc.T1_s);
    sc.hole_depth0 = ini.get_num("lifetime", "depth0", sc.hole_depth0);
    sc.no_decay = parse_bool(ini, "lifetime", "no_decay", sc.no_decay);
    if (!(sc.T1_s > 0) || !(sc.hole_depth0 > 0))
        throw std::invalid_argument(path + ": [lifetime] T1_s and depth0 must be positive");

    return sc;
}

}  // namespace tmsim
