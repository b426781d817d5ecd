#pragma once

#include <Eigen/Dense>
#include <functional>
#include <memory>

#include "surfdg/errors.hpp"

namespace surfdg {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;
/// 3x2 Jacobian of a reference-to-physical map.
using Mat32 = Eigen::Matrix<double, 3, 2>;
/// 2x3 left pseudo-inverse of a Mat32.
using Mat23 = Eigen::Matrix<double, 2, 3>;

/// A general level-set description phi = 0 with first and second derivatives.
struct LevelSet {
    std::function<double(const Vec3&)> value;
    std::function<Vec3(const Vec3&)> gradient;
    std::function<Mat3(const Vec3&)> hessian;
};

/// Exact geometry oracle for a closed smooth surface given implicitly.
///
/// Provides the signed distance d, unit normal nu = grad d, distance Hessian
/// H = grad^2 d, tangential projector P = I - nu (x) nu, the closest-point
/// projection pi, and its Jacobian grad pi = P - d H. Spheres and tori use
/// closed forms; generic level sets go through a projected Newton iteration.
///
/// All queries require the point to be inside the tube |d| < tube_halfwidth;
/// outside, OutOfTubeError is thrown. Instances are immutable and safe to
/// share across threads.
class ImplicitSurface {
  public:
    enum class Kind { Sphere, Torus, LevelSet };

    /// `tube_halfwidth` <= 0 selects the default 0.5 * radius.
    static ImplicitSurface sphere(double radius, double tube_halfwidth = 0.0);
    /// Torus around the z-axis with center-circle radius `major` and tube
    /// radius `minor` (requires minor < major). `tube_halfwidth` <= 0 selects
    /// the default 0.5 * minor.
    static ImplicitSurface torus(double major, double minor, double tube_halfwidth = 0.0);
    static ImplicitSurface level_set(LevelSet ls, double tube_halfwidth,
                                     double length_scale = 1.0);

    Kind kind() const { return kind_; }
    double tube_halfwidth() const { return tube_halfwidth_; }
    /// Characteristic length used to scale absolute tolerances.
    double length_scale() const { return scale_; }

    /// Signed distance to the surface; negative inside, positive outside.
    double signed_distance(const Vec3& x) const;

    /// Closest point xi = pi(x) = x - d(x) nu(x) on the surface.
    Vec3 closest_point(const Vec3& x) const;

    /// Unit normal at a tube point (constant along the normal line: nu(x) = nu(pi(x))).
    Vec3 normal(const Vec3& x) const;

    /// Normal and tangential projector P = I - nu (x) nu at a surface point.
    std::pair<Vec3, Mat3> normal_and_projector(const Vec3& xi) const;

    /// Distance Hessian H = grad^2 d at a tube point. Symmetric with H nu = 0;
    /// at surface points this is the shape operator (Weingarten map).
    Mat3 hessian_distance(const Vec3& x) const;

    /// Shape operator at a surface point xi (|d(xi)| must be < on_surface_tol).
    Mat3 shape_operator(const Vec3& xi) const;

    /// Jacobian of the closest-point map, grad pi(x) = P(x) - d(x) H(x).
    Mat3 grad_projection(const Vec3& x) const;

    /// Tolerance below which a point counts as lying on the surface.
    double on_surface_tol() const { return 1e-9 * scale_; }

    // Parameters of the closed-form kinds (throws std::logic_error otherwise).
    double sphere_radius() const;
    double torus_major() const;
    double torus_minor() const;

  private:
    ImplicitSurface() = default;

    void check_in_tube(double d) const;
    Vec3 level_set_project(const Vec3& x) const;

    Kind kind_ = Kind::Sphere;
    double radius_ = 1.0;       // sphere
    double major_ = 2.0;        // torus
    double minor_ = 0.5;        // torus
    LevelSet ls_;               // generic level set
    double tube_halfwidth_ = 0.5;
    double scale_ = 1.0;
};

} // namespace surfdg
