#include "tmsim/geometry.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace tmsim {

namespace {

constexpr double kAxisTol = 1e-12;

SiteFrame make_site(int id, const Vec3& dipole, const Vec3& z_axis) {
    SiteFrame s;
    s.id = id;
    s.y = dipole.normalized();
    s.z = z_axis.normalized();
    s.x = s.y.cross(s.z);  // completes the right-handed triad (x cross y = z)
    return s;
}

}  // namespace

const SiteFrame& FrameSet::operator[](int id) const {
    for (const auto& s : site)
        if (s.id == id) return s;
    throw std::invalid_argument("no site with id " + std::to_string(id));
}

FrameSet default_frames() {
    FrameSet fs;
    fs.site[0] = make_site(1, Vec3(1, 1, 0), Vec3(0, 0, 1));
    fs.site[1] = make_site(2, Vec3(1, -1, 0), Vec3(0, 0, 1));
    fs.site[2] = make_site(3, Vec3(1, 0, 1), Vec3(0, 1, 0));
    fs.site[3] = make_site(4, Vec3(1, 0, -1), Vec3(0, 1, 0));
    fs.site[4] = make_site(5, Vec3(0, 1, 1), Vec3(1, 0, 0));
    fs.site[5] = make_site(6, Vec3(0, 1, -1), Vec3(1, 0, 0));
    return fs;
}

FrameSet load_frames(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open frame config: " + path);

    FrameSet fs;
    size_t count = 0;
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find_first_of("#;");
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        int id;
        if (!(ls >> id)) continue;  // blank or comment-only line
        Vec3 x, y, z;
        if (!(ls >> x[0] >> x[1] >> x[2] >> y[0] >> y[1] >> y[2] >> z[0] >> z[1] >> z[2]))
            throw std::invalid_argument(path + ": site " + std::to_string(id) +
                                        ": expected 9 axis components");
        if (count >= fs.site.size())
            throw std::invalid_argument(path + ": more than 6 site records");
        SiteFrame s;
        s.id = id;
        // Miller-index style integers allowed; normalize here, validate after.
        s.x = x.normalized();
        s.y = y.normalized();
        s.z = z.normalized();
        fs.site[count++] = s;
    }
    if (count != fs.site.size())
        throw std::invalid_argument(path + ": expected 6 site records, got " +
                                    std::to_string(count));
    validate_frames(fs);
    return fs;
}

void validate_frames(const FrameSet& fs) {
    unsigned seen = 0;
    for (const auto& s : fs.site) {
        if (s.id < 1 || s.id > 6)
            throw std::invalid_argument("site id out of range: " + std::to_string(s.id));
        if (seen & (1u << s.id))
            throw std::invalid_argument("duplicate site id " + std::to_string(s.id));
        seen |= 1u << s.id;

        const std::string where = "site " + std::to_string(s.id) + ": ";
        for (const Vec3* a : {&s.x, &s.y, &s.z})
            if (std::abs(a->norm() - 1.0) > kAxisTol)
                throw std::invalid_argument(where + "axis not unit length");
        if (std::abs(s.x.dot(s.y)) > kAxisTol || std::abs(s.y.dot(s.z)) > kAxisTol ||
            std::abs(s.z.dot(s.x)) > kAxisTol)
            throw std::invalid_argument(where + "axes not orthogonal");
        if (std::abs(s.x.cross(s.y).dot(s.z) - 1.0) > kAxisTol)
            throw std::invalid_argument(where + "axes not right-handed");
    }
}

Vec3 bisector_field(double theta_deg, double magnitude_T) {
    if (magnitude_T < 0) throw std::invalid_argument("field magnitude must be >= 0");
    const double th = theta_deg * std::numbers::pi / 180.0;
    const double s = std::sin(th), c = std::cos(th);
    return magnitude_T * Vec3(s / std::numbers::sqrt2, s / std::numbers::sqrt2, c);
}

Vec3 local_field(const SiteFrame& site, const Vec3& B_crystal) {
    return Vec3(site.x.dot(B_crystal), site.y.dot(B_crystal), site.z.dot(B_crystal));
}

std::vector<SiteCoupling> excited_sites(const Vec3& E_polarization, const FrameSet& fs) {
    const double En = E_polarization.norm();
    if (En <= 0) throw std::invalid_argument("zero polarization vector");

    double cmax = 0;
    std::array<double, 6> c{};
    for (size_t k = 0; k < fs.site.size(); ++k) {
        c[k] = std::abs(E_polarization.dot(fs.site[k].y)) / En;
        cmax = std::max(cmax, c[k]);
    }
    std::vector<SiteCoupling> out;
    if (cmax <= 0) return out;
    for (size_t k = 0; k < fs.site.size(); ++k) {
        const double rel = c[k] / cmax;
        if (rel > 1e-12) out.push_back({fs.site[k].id, rel});
    }
    return out;
}

}  // namespace tmsim
