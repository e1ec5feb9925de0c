#include "hexakin/kinematics.hpp"

#include <algorithm>
#include <cmath>

#include "hexakin/angles.hpp"

namespace hexakin {

RotationMatrix axis_rotation(Axis axis, double angle_deg) {
    const double c = std::cos(deg_to_rad(angle_deg));
    const double s = std::sin(deg_to_rad(angle_deg));
    RotationMatrix r;
    switch (axis) {
        case Axis::X:
            r << 1, 0, 0,
                 0, c, -s,
                 0, s, c;
            break;
        case Axis::Y:
            r << c, 0, s,
                 0, 1, 0,
                -s, 0, c;
            break;
        case Axis::Z:
        default:
            r << c, -s, 0,
                 s, c, 0,
                 0, 0, 1;
            break;
    }
    return r;
}

RotationMatrix combined_rotation(const Pose& pose) {
    const double ca = std::cos(deg_to_rad(pose.alpha));
    const double sa = std::sin(deg_to_rad(pose.alpha));
    const double cb = std::cos(deg_to_rad(pose.beta));
    const double sb = std::sin(deg_to_rad(pose.beta));
    const double cg = std::cos(deg_to_rad(pose.gamma));
    const double sg = std::sin(deg_to_rad(pose.gamma));
    RotationMatrix r;
    r << cb * cg, sa * sb * cg - ca * sg, ca * sb * cg + sa * sg,
         cb * sg, sa * sb * sg + ca * cg, ca * sb * sg - sa * cg,
         -sb,     sa * cb,                ca * cb;
    return r;
}

HomogeneousTransform homogeneous(const Pose& pose) {
    HomogeneousTransform h = HomogeneousTransform::Identity();
    h.block<3, 3>(0, 0) = combined_rotation(pose);
    h.block<3, 1>(0, 3) = Vec3(pose.dx, pose.dy, pose.dz);
    return h;
}

Vec3 apply(const HomogeneousTransform& transform, const Vec3& point) {
    return transform.block<3, 3>(0, 0) * point + transform.block<3, 1>(0, 3);
}

HomogeneousTransform compose(const HomogeneousTransform& a, const HomogeneousTransform& b) {
    return a * b;
}

double pose_error(const Pose& target, const Vec3& reached_position) {
    return (Vec3(target.dx, target.dy, target.dz) - reached_position).norm();
}

double rotation_angle_between_deg(const RotationMatrix& a, const RotationMatrix& b) {
    const double tr = (a.transpose() * b).trace();
    const double c = std::clamp((tr - 1.0) / 2.0, -1.0, 1.0);
    return rad_to_deg(std::acos(c));
}

bool is_rotation(const RotationMatrix& r, double tol) {
    const double ortho = (r.transpose() * r - RotationMatrix::Identity()).cwiseAbs().maxCoeff();
    return ortho <= tol && std::abs(r.determinant() - 1.0) <= tol;
}

bool is_rigid_transform(const HomogeneousTransform& h, double tol) {
    if (h(3, 0) != 0.0 || h(3, 1) != 0.0 || h(3, 2) != 0.0 || h(3, 3) != 1.0) return false;
    return is_rotation(h.block<3, 3>(0, 0), tol);
}

} // namespace hexakin
