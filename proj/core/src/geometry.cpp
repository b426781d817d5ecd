#include "surfdg/geometry.hpp"

#include <cmath>

namespace surfdg {

namespace {

// Cylindrical frame around the z-axis at a point with radial distance rho > 0.
struct CylFrame {
    double rho;
    Vec3 u_hat; // radial
    Vec3 t_hat; // azimuthal
};

CylFrame cyl_frame(const Vec3& x) {
    const double rho = std::hypot(x.x(), x.y());
    CylFrame f;
    f.rho = rho;
    if (rho > 0.0) {
        f.u_hat = Vec3(x.x() / rho, x.y() / rho, 0.0);
        f.t_hat = Vec3(-x.y() / rho, x.x() / rho, 0.0);
    } else {
        f.u_hat = Vec3(1, 0, 0);
        f.t_hat = Vec3(0, 1, 0);
    }
    return f;
}

} // namespace

ImplicitSurface ImplicitSurface::sphere(double radius, double tube_halfwidth) {
    if (!(radius > 0.0)) throw ValidationError("radius", "must be positive");
    if (tube_halfwidth <= 0.0) tube_halfwidth = 0.5 * radius;
    if (!(tube_halfwidth < radius))
        throw ValidationError("tube_halfwidth", "must be below the curvature radius");
    ImplicitSurface s;
    s.kind_ = Kind::Sphere;
    s.radius_ = radius;
    s.tube_halfwidth_ = tube_halfwidth;
    s.scale_ = radius;
    return s;
}

ImplicitSurface ImplicitSurface::torus(double major, double minor, double tube_halfwidth) {
    if (!(major > 0.0) || !(minor > 0.0) || !(minor < major))
        throw ValidationError("torus", "requires 0 < minor < major");
    if (tube_halfwidth <= 0.0) tube_halfwidth = 0.5 * minor;
    if (!(tube_halfwidth < minor))
        throw ValidationError("tube_halfwidth", "must be below the minor radius");
    ImplicitSurface s;
    s.kind_ = Kind::Torus;
    s.major_ = major;
    s.minor_ = minor;
    s.tube_halfwidth_ = tube_halfwidth;
    s.scale_ = major;
    return s;
}

ImplicitSurface ImplicitSurface::level_set(LevelSet ls, double tube_halfwidth,
                                           double length_scale) {
    if (!ls.value || !ls.gradient || !ls.hessian)
        throw ValidationError("level_set", "value, gradient, hessian must all be set");
    if (!(tube_halfwidth > 0.0))
        throw ValidationError("tube_halfwidth", "must be positive");
    ImplicitSurface s;
    s.kind_ = Kind::LevelSet;
    s.ls_ = std::move(ls);
    s.tube_halfwidth_ = tube_halfwidth;
    s.scale_ = length_scale;
    return s;
}

double ImplicitSurface::sphere_radius() const {
    if (kind_ != Kind::Sphere) throw std::logic_error("not a sphere");
    return radius_;
}
double ImplicitSurface::torus_major() const {
    if (kind_ != Kind::Torus) throw std::logic_error("not a torus");
    return major_;
}
double ImplicitSurface::torus_minor() const {
    if (kind_ != Kind::Torus) throw std::logic_error("not a torus");
    return minor_;
}

void ImplicitSurface::check_in_tube(double d) const {
    if (!(std::abs(d) < tube_halfwidth_))
        throw OutOfTubeError("point outside the signed-distance tube: |d| = " +
                             std::to_string(std::abs(d)));
}

double ImplicitSurface::signed_distance(const Vec3& x) const {
    double d = 0.0;
    switch (kind_) {
    case Kind::Sphere:
        d = x.norm() - radius_;
        break;
    case Kind::Torus: {
        const double rho = std::hypot(x.x(), x.y());
        d = std::hypot(rho - major_, x.z()) - minor_;
        break;
    }
    case Kind::LevelSet: {
        const Vec3 xi = level_set_project(x);
        const Vec3 g = ls_.gradient(xi);
        d = (x - xi).dot(g.normalized());
        break;
    }
    }
    check_in_tube(d);
    return d;
}

Vec3 ImplicitSurface::closest_point(const Vec3& x) const {
    switch (kind_) {
    case Kind::Sphere: {
        check_in_tube(x.norm() - radius_);
        return radius_ * x.normalized();
    }
    case Kind::Torus: {
        const CylFrame f = cyl_frame(x);
        const double s = f.rho - major_;
        const double q = std::hypot(s, x.z());
        check_in_tube(q - minor_);
        const Vec3 c = major_ * f.u_hat;
        return c + (minor_ / q) * (x - c);
    }
    case Kind::LevelSet: {
        const Vec3 xi = level_set_project(x);
        check_in_tube((x - xi).dot(ls_.gradient(xi).normalized()));
        return xi;
    }
    }
    throw std::logic_error("unreachable");
}

Vec3 ImplicitSurface::normal(const Vec3& x) const {
    switch (kind_) {
    case Kind::Sphere:
        check_in_tube(x.norm() - radius_);
        return x.normalized();
    case Kind::Torus: {
        const CylFrame f = cyl_frame(x);
        const double s = f.rho - major_;
        const double q = std::hypot(s, x.z());
        check_in_tube(q - minor_);
        return (s / q) * f.u_hat + (x.z() / q) * Vec3::UnitZ();
    }
    case Kind::LevelSet: {
        const Vec3 xi = closest_point(x);
        return ls_.gradient(xi).normalized();
    }
    }
    throw std::logic_error("unreachable");
}

std::pair<Vec3, Mat3> ImplicitSurface::normal_and_projector(const Vec3& xi) const {
    const double d = signed_distance(xi);
    if (std::abs(d) > on_surface_tol())
        throw OutOfTubeError("normal_and_projector: point is not on the surface, |d| = " +
                             std::to_string(std::abs(d)));
    const Vec3 nu = normal(xi);
    const Mat3 P = Mat3::Identity() - nu * nu.transpose();
    return {nu, P};
}

Mat3 ImplicitSurface::hessian_distance(const Vec3& x) const {
    switch (kind_) {
    case Kind::Sphere: {
        const double r = x.norm();
        check_in_tube(r - radius_);
        const Vec3 n = x / r;
        return (Mat3::Identity() - n * n.transpose()) / r;
    }
    case Kind::Torus: {
        const CylFrame f = cyl_frame(x);
        const double s = f.rho - major_;
        const double q = std::hypot(s, x.z());
        check_in_tube(q - minor_);
        const double z = x.z();
        const double q3 = q * q * q;
        const Vec3 zh = Vec3::UnitZ();
        Mat3 H = (z * z / q3) * (f.u_hat * f.u_hat.transpose()) +
                 (s / (q * f.rho)) * (f.t_hat * f.t_hat.transpose()) -
                 (s * z / q3) * (f.u_hat * zh.transpose() + zh * f.u_hat.transpose()) +
                 (s * s / q3) * (zh * zh.transpose());
        return H;
    }
    case Kind::LevelSet: {
        const Vec3 xi = level_set_project(x);
        const Vec3 g = ls_.gradient(xi);
        const double gn = g.norm();
        const Vec3 nu = g / gn;
        const double d = (x - xi).dot(nu);
        check_in_tube(d);
        const Mat3 P = Mat3::Identity() - nu * nu.transpose();
        // Shape operator on the surface, then the tube formula H = S (I + d S)^-1.
        const Mat3 S = P * ls_.hessian(xi) * P / gn;
        const Mat3 A = Mat3::Identity() + d * S;
        Mat3 H = A.ldlt().solve(S);
        return 0.5 * (H + H.transpose());
    }
    }
    throw std::logic_error("unreachable");
}

Mat3 ImplicitSurface::shape_operator(const Vec3& xi) const {
    const double d = signed_distance(xi);
    if (std::abs(d) > on_surface_tol())
        throw OutOfTubeError("shape_operator: point is not on the surface, |d| = " +
                             std::to_string(std::abs(d)));
    return hessian_distance(xi);
}

Mat3 ImplicitSurface::grad_projection(const Vec3& x) const {
    const double d = signed_distance(x);
    const Vec3 nu = normal(x);
    const Mat3 P = Mat3::Identity() - nu * nu.transpose();
    return P - d * hessian_distance(x);
}

Vec3 ImplicitSurface::level_set_project(const Vec3& x) const {
    // Closest point as the stationarity system  y - x + lambda grad(phi)(y) = 0,
    // phi(y) = 0, solved by a full Newton iteration on (y, lambda).
    const double tol = 1e-12 * scale_;
    Vec3 y = x;
    double g2 = ls_.gradient(x).squaredNorm();
    if (g2 == 0.0) throw NoConvergenceError("level-set gradient vanishes at seed", 0.0);
    double lambda = ls_.value(x) / g2;

    for (int it = 0; it < 50; ++it) {
        const Vec3 g = ls_.gradient(y);
        const Mat3 Hphi = ls_.hessian(y);
        Eigen::Matrix4d J = Eigen::Matrix4d::Zero();
        J.topLeftCorner<3, 3>() = Mat3::Identity() + lambda * Hphi;
        J.topRightCorner<3, 1>() = g;
        J.bottomLeftCorner<1, 3>() = g.transpose();
        Eigen::Vector4d F;
        F.head<3>() = y - x + lambda * g;
        F(3) = ls_.value(y);
        const Eigen::Vector4d step = J.fullPivLu().solve(-F);
        y += step.head<3>();
        lambda += step(3);
        if (step.head<3>().norm() <= tol && std::abs(ls_.value(y)) <= tol * std::max(1.0, g.norm()))
            return y;
    }
    throw NoConvergenceError("closest-point Newton did not converge in 50 iterations",
                             std::abs(ls_.value(y)));
}

} // namespace surfdg
