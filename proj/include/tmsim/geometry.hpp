#pragma once

// Crystal-frame geometry for the six orientationally inequivalent substitution
// sites of Tm3+ in YAG (D2 point symmetry).  The optical transition dipole of
// each site lies along its local y axis; a magnetic field applied in the
// (1-10) bisector plane is parametrized by the angle theta it makes with
// [001].  All crystal-frame vectors use the cubic axes.

#include <array>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace tmsim {

using Vec3 = Eigen::Vector3d;

struct SiteFrame {
    int id = 0;           // 1..6
    Vec3 x, y, z;         // orthonormal right-handed triad; dipole along y
};

struct FrameSet {
    std::array<SiteFrame, 6> site;

    const SiteFrame& operator[](int id) const;  // id in 1..6
};

// Built-in frame assignment: dipoles along the six <110> axes
//   site1 [110]  site2 [1-10]  site3 [101]  site4 [10-1]  site5 [011]  site6 [01-1]
// with local z along the <001> axis perpendicular to the dipole and x = y cross z.
// This is the assignment under which E||[111] couples to sites {1,3,5} and
// E||[-1-11] to {1,4,6}, both with equal strength.
FrameSet default_frames();

// Frame config file: one record per non-comment line,
//   site_id  x1 x2 x3  y1 y2 y3  z1 z2 z3
// Vectors may be given as Miller-style integers; they are normalized on load.
FrameSet load_frames(const std::string& path);

// Throws std::invalid_argument unless every site has orthonormal (1e-12),
// right-handed axes and the six ids are exactly 1..6.
void validate_frames(const FrameSet& fs);

// B_vec = B * (sin(theta)/sqrt(2), sin(theta)/sqrt(2), cos(theta)),  |B_vec| = B.
Vec3 bisector_field(double theta_deg, double magnitude_T);

// Components of a crystal-frame field in the site-local axes.
Vec3 local_field(const SiteFrame& site, const Vec3& B_crystal);

struct SiteCoupling {
    int site;
    double coupling;  // |E . y_site|, normalized so the largest is 1
};

// Sites optically driven by polarization E (crystal frame, need not be unit).
// Sites whose relative coupling falls below 1e-12 are omitted.
std::vector<SiteCoupling> excited_sites(const Vec3& E_polarization,
                                        const FrameSet& fs = default_frames());

}  // namespace tmsim
