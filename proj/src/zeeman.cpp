#include "tmsim/zeeman.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "tmsim/config.hpp"

namespace tmsim {

double splitting(const GyroTensor& t, const Vec3& B_local) {
    const double a = t.x * B_local[0];
    const double b = t.y * B_local[1];
    const double c = t.z * B_local[2];
    return std::sqrt(a * a + b * b + c * c);
}

Vec3 effective_axis(const GyroTensor& t, const Vec3& B_local) {
    Vec3 v(t.x * B_local[0], t.y * B_local[1], t.z * B_local[2]);
    const double n = v.norm();
    if (n <= 0)
        throw std::invalid_argument(
            "effective_axis: zero splitting, quantization axis undefined");
    return v / n;
}

Branching branching_ratio(const Vec3& axis_g, const Vec3& axis_e) {
    double c = axis_g.dot(axis_e);
    c = std::clamp(c, -1.0, 1.0);
    double theta = std::acos(c);
    // Strong/weak are magnitude labels, not sublevel identities: an inter-axis
    // angle beyond 90 deg just swaps which transition we call strong.
    if (theta > std::numbers::pi / 2) theta = std::numbers::pi - theta;

    Branching br;
    br.mu_s = std::cos(theta / 2);
    br.mu_w = std::sin(theta / 2);
    const double t = std::tan(theta / 2);
    br.R = t * t;
    return br;
}

LambdaParams lambda_for(const LevelPair& pair, const Vec3& B_local) {
    LambdaParams lp;
    lp.delta_g = splitting(pair.ground, B_local);
    lp.delta_e = splitting(pair.excited, B_local);
    lp.axis_g = effective_axis(pair.ground, B_local);
    lp.axis_e = effective_axis(pair.excited, B_local);
    const Branching br = branching_ratio(lp.axis_g, lp.axis_e);
    lp.R = br.R;
    lp.mu_s = br.mu_s;
    lp.mu_w = br.mu_w;
    return lp;
}

std::vector<SweepPoint> sweep_R(const LevelPair& pair, const SiteFrame& site,
                                const std::vector<double>& theta_grid_deg,
                                double magnitude_T) {
    for (size_t k = 1; k < theta_grid_deg.size(); ++k)
        if (theta_grid_deg[k] <= theta_grid_deg[k - 1])
            throw std::invalid_argument("sweep_R: theta grid must be increasing");

    std::vector<SweepPoint> out;
    out.reserve(theta_grid_deg.size());
    for (double th : theta_grid_deg) {
        SweepPoint pt;
        pt.theta_deg = th;
        const Vec3 Bl = local_field(site, bisector_field(th, magnitude_T));
        if (splitting(pair.ground, Bl) > 0 && splitting(pair.excited, Bl) > 0)
            pt.value = lambda_for(pair, Bl);
        // else: gap — the quantization axis is undefined at this angle
        out.push_back(std::move(pt));
    }
    return out;
}

LevelPair load_tensors(const std::string& path) {
    const Ini ini = Ini::parse_file(path);
    LevelPair lp;
    for (auto [sec, t] : {std::pair<const char*, GyroTensor*>{"tensors.ground", &lp.ground},
                          {"tensors.excited", &lp.excited}}) {
        t->x = ini.get_num(sec, "gamma_x");
        t->y = ini.get_num(sec, "gamma_y");
        t->z = ini.get_num(sec, "gamma_z");
        if (t->x < 0 || t->y < 0 || t->z < 0)
            throw std::invalid_argument(path + ": [" + sec + "]: components must be >= 0");
    }
    return lp;
}

}  // namespace tmsim
