#pragma once

// INI-style config handling: [section] headers, key = value lines, '#' or ';'
// comments.  Section and key lookups are exact; numeric parsing is
// locale-independent.  Scenario files tie a field setup, tensor set, pump
// rates, grids and noise model together for the CLI pipelines.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tmsim/geometry.hpp"
#include "tmsim/popdyn.hpp"
#include "tmsim/zeeman.hpp"

namespace tmsim {

class Ini {
  public:
    static Ini parse_file(const std::string& path);
    static Ini parse_string(const std::string& text, const std::string& origin = "<string>");

    bool has(const std::string& section, const std::string& key) const;
    // get_* throw std::invalid_argument naming section/key on missing or bad values
    std::string get_str(const std::string& section, const std::string& key) const;
    double get_num(const std::string& section, const std::string& key) const;
    long long get_int(const std::string& section, const std::string& key) const;
    std::string get_str(const std::string& section, const std::string& key, const std::string& dflt) const;
    double get_num(const std::string& section, const std::string& key, double dflt) const;
    long long get_int(const std::string& section, const std::string& key, long long dflt) const;
    // whitespace-separated list of numbers
    std::vector<double> get_nums(const std::string& section, const std::string& key) const;

    const std::string& origin() const { return origin_; }

  private:
    std::map<std::string, std::map<std::string, std::string>> data_;
    std::string origin_;
};

struct GridSpec {
    double lo = 0, hi = 0;
    int n = 0;

    std::vector<double> points() const;  // n evenly spaced values, lo..hi inclusive
};

struct Scenario {
    // [field]
    double theta_deg = 0;
    double B_T = 0;
    Vec3 polarization = Vec3(1, 1, 1);  // crystal frame, normalized on load

    // [tensors.ground] / [tensors.excited], or [tensors] file = ...
    LevelPair tensors;

    // [frames] file = ... (optional; built-in default otherwise)
    std::string frames_file;

    // [pump]
    PumpParams pump;

    // [probe]
    double d0 = 0.36;          // zero-field optical density
    double window_MHz = 35;    // probe scan width centered on nu0

    // [grids]
    GridSpec sweep_theta{-90, 0, 181};      // degrees
    GridSpec nutation_t{0, 25, 400};        // us
    GridSpec spectrum_offset{-17.5, 17.5, 1401};  // MHz; defaults follow window
    GridSpec echo_drive{0.03, 0.31, 8};     // fraction of I0
    GridSpec lifetime_t{0, 12, 25};         // s

    // [noise]
    double noise_level = 0;       // additive sigma on trace values
    bool echo_lognormal = false;  // multiplicative log-normal on echo samples
    std::uint64_t seed = 0;

    // [spectrum]
    double hole_fwhm_MHz = 1.0;
    double antihole_extra_fwhm_MHz = 0.6;

    // [nutation]
    double rabi_MHz = 2.6;  // Omega/2pi; Omega[rad/us] = 2pi * rabi_MHz

    // [echo]
    double area_coeff = 1.4;
    double echo_I0 = 1.0;
    std::optional<double> R_override;  // bypass the tensor-derived R

    // [lifetime]
    double T1_s = 4.5;
    double hole_depth0 = 1.0;
    bool no_decay = false;  // generate a constant hole depth instead

    // provenance
    std::string config_path;
    std::string config_hash;  // fnv1a64 of the config bytes, hex
};

// Loads and validates a scenario; referenced files (tensors, frames) are
// resolved relative to the scenario file's directory and must validate.
Scenario load_scenario(const std::string& path);

}  // namespace tmsim
