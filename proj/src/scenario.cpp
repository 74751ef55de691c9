#include "tmsim/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "tmsim/analysis.hpp"
#include "tmsim/coherent.hpp"
#include "tmsim/io.hpp"
#include "tmsim/popdyn.hpp"
#include "tmsim/rng.hpp"

namespace tmsim {

using json = nlohmann::ordered_json;

namespace {

// fixed noise-stream indices so adding a pipeline never reshuffles another's draws
constexpr std::uint64_t kStreamSpectrum = 1;
constexpr std::uint64_t kStreamNutation = 10;  // +0..3 for cases a..d
constexpr std::uint64_t kStreamEcho = 20;
constexpr std::uint64_t kStreamLifetime = 30;

FrameSet frames_for(const Scenario& sc) {
    return sc.frames_file.empty() ? default_frames() : load_frames(sc.frames_file);
}

LambdaParams lambda_at(const Scenario& sc, const FrameSet& fs, int site) {
    const Vec3 B = bisector_field(sc.theta_deg, sc.B_T);
    return lambda_for(sc.tensors, local_field(fs[site], B));
}

// R entering the nutation/echo pipelines: explicit override, else the
// {3,5}-group value at the configured field point
double working_R(const Scenario& sc, const FrameSet& fs) {
    if (sc.R_override) return *sc.R_override;
    return lambda_at(sc, fs, 3).R;
}

json header(const Scenario& sc) {
    json j;
    j["tool"] = "tmsim";
    j["version"] = kVersion;
    j["config_hash"] = sc.config_hash;
    return j;
}

json fit_json(const FitResult& f) {
    json j;
    j["params"] = f.params;
    j["sigma"] = f.sigma;
    j["residual_norm"] = f.residual_norm;
    j["converged"] = f.converged;
    j["iterations"] = f.iterations;
    j["flags"] = f.flags;
    return j;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

const char* kind_name(SpectrumFeature::Kind k) {
    return k == SpectrumFeature::hole ? "hole" : "antihole";
}

std::string transition_name(const Transition& t) {
    return std::to_string(t.ground) + "-" + std::to_string(t.excited);
}

}  // namespace

const std::string& RunFiles::content(const std::string& name) const {
    for (const auto& [n, c] : files)
        if (n == name) return c;
    throw std::runtime_error("no such output: " + name);
}

RunFiles run_sweep(const Scenario& sc) {
    const FrameSet fs = frames_for(sc);
    const auto grid = sc.sweep_theta.points();

    struct Group {
        const char* label;
        int rep;  // representative site
    };
    const Group groups[] = {{"3-5", 3}, {"4-6", 4}, {"1", 1}};

    std::string csv = "site_group,theta_deg,delta_g_MHz,delta_e_MHz,R\n";
    json jgroups;
    for (const auto& g : groups) {
        const auto pts = sweep_R(sc.tensors, fs[g.rep], grid, sc.B_T);
        for (const auto& pt : pts) {
            csv += g.label;
            csv += ',';
            csv += format_double(pt.theta_deg);
            if (pt.value) {
                csv += ',' + format_double(pt.value->delta_g) + ',' +
                       format_double(pt.value->delta_e) + ',' +
                       format_double(pt.value->R);
            } else {
                csv += ",,,";  // splitting vanished; no Lambda system here
            }
            csv += '\n';
        }

        json jg;
        // value at the configured working angle
        try {
            const LambdaParams lp = lambda_at(sc, fs, g.rep);
            jg["R"] = lp.R;
            jg["delta_g_MHz"] = lp.delta_g;
            jg["delta_e_MHz"] = lp.delta_e;
            jg["mu_s_sq"] = lp.mu_s * lp.mu_s;
            jg["mu_w_sq"] = lp.mu_w * lp.mu_w;
        } catch (const std::exception& e) {
            jg["R"] = nullptr;
            jg["error"] = e.what();
        }
        // grid maximum and its +-1 degree flatness
        double r_max = -1, th_max = 0;
        for (const auto& pt : pts)
            if (pt.value && pt.value->R > r_max) {
                r_max = pt.value->R;
                th_max = pt.theta_deg;
            }
        if (r_max > 0) {
            jg["R_max"] = r_max;
            jg["theta_at_R_max_deg"] = th_max;
            const auto r_at = [&](double th) -> std::optional<double> {
                const Vec3 B = bisector_field(th, sc.B_T);
                try {
                    return lambda_for(sc.tensors, local_field(fs[g.rep], B)).R;
                } catch (const std::exception&) {
                    return std::nullopt;
                }
            };
            const auto lo = r_at(th_max - 1), hi = r_at(th_max + 1);
            if (lo && hi) {
                const double dev =
                    std::max(std::abs(*lo - r_max), std::abs(*hi - r_max));
                jg["flatness_pm1deg"] = dev / r_max;
            }
        }
        jgroups[g.label] = jg;
    }

    json report = header(sc);
    report["B_T"] = sc.B_T;
    report["theta_deg"] = sc.theta_deg;
    report["groups"] = jgroups;

    RunFiles rf;
    rf.files.emplace_back("sweep.csv", csv);
    rf.files.emplace_back("report.json", dump(report));
    return rf;
}

RunFiles run_spectrum(const Scenario& sc) {
    const FrameSet fs = frames_for(sc);
    const auto excited = excited_sites(sc.polarization, fs);
    if (excited.empty())
        throw std::runtime_error("polarization drives no site");
    const Vec3 B = bisector_field(sc.theta_deg, sc.B_T);
    // burn phase only: the repump beam belongs to the density experiments
    PumpParams burn = sc.pump;
    burn.r = 0;
    const double rho = steady_state_fraction(burn);

    double wsum = 0;
    for (const auto& s : excited) wsum += s.coupling * s.coupling;

    std::vector<SpectrumFeature> rendered;
    json jsites = json::array();
    for (const auto& s : excited) {
        const LambdaParams lp = lambda_for(sc.tensors, local_field(fs[s.site], B));
        const auto classes = enumerate_classes(lp.delta_g, lp.delta_e, lp);
        const auto features =
            spectrum_features(classes, {rho, rho, rho, rho});
        const double d_site = sc.d0 * s.coupling * s.coupling / wsum;

        json jf = json::array();
        for (const auto& f : features) {
            if (std::abs(f.offset_MHz) > sc.window_MHz / 2) continue;
            SpectrumFeature scaled = f;
            scaled.amplitude *= d_site;
            rendered.push_back(scaled);

            json e;
            e["offset_MHz"] = f.offset_MHz;
            e["kind"] = kind_name(f.kind);
            e["delta_D"] = scaled.amplitude;
            json contribs = json::array();
            for (const auto& c : f.contributors) {
                json jc;
                jc["class"] = class_name(c.cls);
                jc["transition"] = transition_name(c.t);
                jc["strength"] = c.strength;
                contribs.push_back(jc);
            }
            e["contributors"] = contribs;
            jf.push_back(e);
        }

        json js;
        js["site"] = s.site;
        js["coupling"] = s.coupling;
        js["D_site"] = d_site;
        js["delta_g_MHz"] = lp.delta_g;
        js["delta_e_MHz"] = lp.delta_e;
        js["R"] = lp.R;
        js["features"] = jf;
        jsites.push_back(js);
    }

    Trace tr = synth_spectrum(rendered, sc.d0, sc.hole_fwhm_MHz,
                              sc.antihole_extra_fwhm_MHz,
                              sc.spectrum_offset.points());
    if (sc.noise_level > 0) {
        NoiseGen ng(split_seed(sc.seed, kStreamSpectrum));
        ng.add_gaussian(tr.y, sc.noise_level);
    }

    json report = header(sc);
    report["rho"] = rho;
    report["window_MHz"] = sc.window_MHz;
    report["sites"] = jsites;
    for (const auto& w : tr.warnings) report["warnings"].push_back(w);

    RunFiles rf;
    rf.files.emplace_back("spectrum.csv", csv_from_trace(tr));
    rf.files.emplace_back("features.json", dump(report));
    return rf;
}

RunFiles run_nutation(const Scenario& sc) {
    const FrameSet fs = frames_for(sc);
    const double omega = 2 * std::numbers::pi * sc.rabi_MHz;  // rad/us
    const double rho = steady_state_fraction(sc.pump);
    const double R = working_R(sc, fs);
    const CompositeDensities cd = composite_densities(sc.d0, rho, R);
    PumpParams no_repump = sc.pump;
    no_repump.r = 0;
    const double rho_d = steady_state_fraction(no_repump);
    const double d_unpumped = 2.0 / 3.0 * sc.d0 * rho_d;

    struct Case {
        const char* tag;
        const char* what;
        double D;
    };
    const Case cases[] = {
        {"a", "zero field, full line", sc.d0},
        {"b", "repump at -delta_g, strong+weak classes", cd.sw},
        {"c", "repump at +delta_g+delta_e, weak classes", cd.w},
        {"d", "no repump", d_unpumped},
    };

    const auto grid = sc.nutation_t.points();
    RunFiles rf;
    json jcases;
    std::map<std::string, FitResult> fits;
    for (int k = 0; k < 4; ++k) {
        const Case& c = cases[k];
        Trace tr = nutation_trace({omega, c.D, grid});
        if (sc.noise_level > 0) {
            NoiseGen ng(split_seed(sc.seed, kStreamNutation + static_cast<std::uint64_t>(k)));
            ng.add_gaussian(tr.y, sc.noise_level);
        }
        rf.files.emplace_back(std::string("nutation_") + c.tag + ".csv",
                              csv_from_trace(tr));

        json jc;
        jc["setup"] = c.what;
        jc["D_true"] = c.D;
        try {
            const FitResult f = fit_nutation(tr);
            jc["fit"] = fit_json(f);
            fits[c.tag] = f;
        } catch (const std::exception& e) {
            jc["fit"] = nullptr;
            jc["error"] = e.what();
        }
        jcases[c.tag] = jc;
    }

    json report = header(sc);
    report["omega_rad_per_us"] = omega;
    report["rho_true"] = rho;
    report["R_true"] = R;
    report["D_true"] = {{"full", sc.d0}, {"sw", cd.sw}, {"w", cd.w}, {"s", cd.s}};
    report["cases"] = jcases;

    // densities -> R and rho, when the needed fits exist
    try {
        const double D0 = fits.at("a").params.at("D");
        const double Dsw = fits.at("b").params.at("D");
        const double Dw = fits.at("c").params.at("D");
        const ValueWithSigma r = extract_R_from_densities(
            Dw, Dsw, fits.at("c").sigma.at("D"), fits.at("b").sigma.at("D"));
        report["R"] = {{"value", r.value}, {"sigma", r.sigma}};
        report["rho"] = extract_rho(Dsw, D0);
    } catch (const std::exception& e) {
        report["R"] = nullptr;
        report["rho"] = nullptr;
        report["extraction_error"] = e.what();
    }

    rf.files.emplace_back("extraction.json", dump(report));
    return rf;
}

RunFiles run_echo(const Scenario& sc) {
    const FrameSet fs = frames_for(sc);
    const double R_true = working_R(sc, fs);
    const EchoModel model = default_echo_model(sc.area_coeff, R_true);

    EchoDataset data;
    data.I0 = sc.echo_I0;
    for (double u : sc.echo_drive.points()) {
        const double I = u * sc.echo_I0;
        data.drive.push_back(I);
        data.echo.push_back(echo_intensity(model, I, Branch::strong, R_true));
    }
    data.Iw_at_I0 = echo_intensity(model, sc.echo_I0, Branch::weak, R_true);

    if (sc.noise_level > 0) {
        NoiseGen ng(split_seed(sc.seed, kStreamEcho));
        if (sc.echo_lognormal) {
            ng.mul_lognormal(data.echo, sc.noise_level);
            std::vector<double> w{data.Iw_at_I0};
            ng.mul_lognormal(w, sc.noise_level);
            data.Iw_at_I0 = w[0];
        } else {
            ng.add_gaussian(data.echo, sc.noise_level);
            data.Iw_at_I0 += ng.gaussian(sc.noise_level);
        }
        for (double e : data.echo)
            data.sigma.push_back(sc.noise_level * std::abs(e));
        data.sigma_Iw = sc.noise_level * std::abs(data.Iw_at_I0);
    }

    std::string csv = "drive_over_I0,echo_strong,weighted\n";
    for (std::size_t i = 0; i < data.drive.size(); ++i) {
        const double u = data.drive[i] / data.I0;
        csv += format_double(u) + ',' + format_double(data.echo[i]) + ',' +
               format_double(data.echo[i] * u) + '\n';
    }

    json report = header(sc);
    report["R_true"] = R_true;
    report["area_coeff"] = sc.area_coeff;
    report["I0"] = data.I0;
    report["Iw_at_I0"] = data.Iw_at_I0;
    try {
        const ValueWithSigma r = solve_R_from_echo(data);
        report["R"] = {{"value", r.value}, {"sigma", r.sigma}};
    } catch (const std::exception& e) {
        report["R"] = nullptr;
        report["solve_error"] = e.what();
    }

    RunFiles rf;
    rf.files.emplace_back("echo.csv", csv);
    rf.files.emplace_back("solution.json", dump(report));
    return rf;
}

RunFiles run_lifetime(const Scenario& sc) {
    const auto t = sc.lifetime_t.points();
    std::vector<double> depth(t.size());
    for (std::size_t i = 0; i < t.size(); ++i)
        depth[i] = sc.no_decay ? sc.hole_depth0
                               : hole_decay(sc.hole_depth0, sc.T1_s, t[i]);
    if (sc.noise_level > 0) {
        NoiseGen ng(split_seed(sc.seed, kStreamLifetime));
        ng.add_gaussian(depth, sc.noise_level * sc.hole_depth0);
    }

    std::string csv = "t_s,hole_depth\n";
    for (std::size_t i = 0; i < t.size(); ++i)
        csv += format_double(t[i]) + ',' + format_double(depth[i]) + '\n';

    json report = header(sc);
    if (sc.no_decay)
        report["T1_true"] = nullptr;
    else
        report["T1_true"] = sc.T1_s;
    try {
        report["fit"] = fit_json(fit_exponential(t, depth));
    } catch (const std::exception& e) {
        report["fit"] = nullptr;
        report["fit_error"] = e.what();
    }

    RunFiles rf;
    rf.files.emplace_back("decay.csv", csv);
    rf.files.emplace_back("fit.json", dump(report));
    return rf;
}

namespace {

Trace parse_two_column_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line))
        throw std::runtime_error("empty input CSV");
    Trace tr;
    const auto comma = line.find(',');
    if (comma == std::string::npos)
        throw std::runtime_error("input CSV needs two columns");
    tr.x_label = line.substr(0, comma);
    tr.y_label = line.substr(comma + 1);
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto c = line.find(',');
        if (c == std::string::npos)
            throw std::runtime_error("input CSV line " + std::to_string(line_no) +
                                     ": expected two columns");
        try {
            tr.x.push_back(std::stod(line.substr(0, c)));
            tr.y.push_back(std::stod(line.substr(c + 1)));
        } catch (const std::exception&) {
            throw std::runtime_error("input CSV line " + std::to_string(line_no) +
                                     ": bad number");
        }
    }
    return tr;
}

}  // namespace

RunFiles run_fit(const Scenario& sc, const std::string& input_csv,
                 const std::string& model) {
    const std::string bytes = read_file(input_csv);
    const Trace tr = parse_two_column_csv(bytes);

    FitResult f;
    if (model == "nutation") {
        f = fit_nutation(tr);
    } else if (model == "exponential") {
        f = fit_exponential(tr.x, tr.y);
    } else {
        throw std::invalid_argument("unknown fit model '" + model +
                                    "' (want nutation or exponential)");
    }

    json report = header(sc);
    report["model"] = model;
    report["input"] = std::filesystem::path(input_csv).filename().string();
    report["input_hash"] = fnv1a64_hex(bytes);
    report["n_samples"] = tr.size();
    report["fit"] = fit_json(f);

    RunFiles rf;
    rf.files.emplace_back("fit.json", dump(report));
    return rf;
}

void write_outputs(const RunFiles& rf, const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    for (const auto& [name, content] : rf.files)
        write_file((std::filesystem::path(out_dir) / name).string(), content);
}

}  // namespace tmsim
