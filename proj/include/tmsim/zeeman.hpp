#pragma once

// Gyromagnetic-tensor algebra.  Each electronic level (ground / excited) of a
// site carries a diagonal tensor (gamma_x, gamma_y, gamma_z) in MHz/T in the
// site-local frame.  A field B splits the two nuclear-spin sublevels by
//   delta = sqrt((gx Bx)^2 + (gy By)^2 + (gz Bz)^2)
// and quantizes the effective spin 1/2 along (gx Bx, gy By, gz Bz)/delta.
// Because the two levels see differently weighted axes, the sublevel bases are
// rotated against each other; the branching ratio of the resulting Lambda
// system is R = tan^2(theta/2) for the inter-axis angle theta, relabeled so
// that the strong transition is the stronger one (R <= 1).

#include <optional>
#include <string>
#include <vector>

#include "tmsim/geometry.hpp"

namespace tmsim {

struct GyroTensor {
    double x = 0, y = 0, z = 0;  // MHz/T, site-local frame, all >= 0
};

struct LevelPair {
    GyroTensor ground, excited;
};

// Everything the Lambda system needs at one field point.
struct LambdaParams {
    double delta_g = 0, delta_e = 0;  // MHz
    Vec3 axis_g, axis_e;              // unit, site-local
    double R = 0;                     // mu_w^2 / mu_s^2, in [0,1]
    double mu_s = 1, mu_w = 0;        // normalized dipole magnitudes, mu_s^2+mu_w^2 = 1
};

double splitting(const GyroTensor& t, const Vec3& B_local);  // MHz

// Throws std::invalid_argument when the splitting vanishes (axis undefined).
Vec3 effective_axis(const GyroTensor& t, const Vec3& B_local);

struct Branching {
    double R, mu_s, mu_w;
};

// axis_g, axis_e must be unit vectors.  Strong/weak labels are assigned by
// magnitude, so R <= 1 always; an axis flip (theta -> 180 - theta) only swaps
// the labels.
Branching branching_ratio(const Vec3& axis_g, const Vec3& axis_e);

LambdaParams lambda_for(const LevelPair& pair, const Vec3& B_local);

struct SweepPoint {
    double theta_deg;
    std::optional<LambdaParams> value;  // empty = gap (a splitting vanished there)
};

// R(theta) etc. for one site under the bisector field.  Grid must be ordered.
std::vector<SweepPoint> sweep_R(const LevelPair& pair, const SiteFrame& site,
                                const std::vector<double>& theta_grid_deg,
                                double magnitude_T);

// Tensor config file with sections [tensors.ground] / [tensors.excited],
// keys gamma_x, gamma_y, gamma_z (MHz/T).
LevelPair load_tensors(const std::string& path);

}  // namespace tmsim
