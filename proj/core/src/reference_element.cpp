#include "surfdg/reference_element.hpp"

#include <stdexcept>

namespace surfdg {

ReferenceElement::ReferenceElement(int degree) : degree_(degree) {
    if (degree < 1 || degree > 8)
        throw ValidationError("degree", "must be in [1,8]");

    const int n = lagrange_node_count(degree);
    nodes_.reserve(n);
    // Lattice ordered by rows j = 0..k, then i = 0..k-j.
    for (int j = 0; j <= degree; ++j)
        for (int i = 0; i + j <= degree; ++i)
            nodes_.emplace_back(double(i) / degree, double(j) / degree);

    exponents_.reserve(n);
    for (int total = 0; total <= degree; ++total)
        for (int a = total; a >= 0; --a)
            exponents_.push_back({a, total - a});

    Eigen::MatrixXd V(n, n);
    for (int l = 0; l < n; ++l)
        V.row(l) = monomials(nodes_[l]).transpose();
    coeffs_ = V.transpose().fullPivLu().solve(Eigen::MatrixXd::Identity(n, n));
}

Eigen::VectorXd ReferenceElement::monomials(const Vec2& p) const {
    const int n = static_cast<int>(exponents_.size());
    Eigen::VectorXd m(n);
    for (int j = 0; j < n; ++j)
        m(j) = std::pow(p.x(), exponents_[j][0]) * std::pow(p.y(), exponents_[j][1]);
    return m;
}

Eigen::MatrixXd ReferenceElement::monomial_gradients(const Vec2& p) const {
    const int n = static_cast<int>(exponents_.size());
    Eigen::MatrixXd g(n, 2);
    for (int j = 0; j < n; ++j) {
        const int a = exponents_[j][0], b = exponents_[j][1];
        g(j, 0) = a == 0 ? 0.0 : a * std::pow(p.x(), a - 1) * std::pow(p.y(), b);
        g(j, 1) = b == 0 ? 0.0 : b * std::pow(p.x(), a) * std::pow(p.y(), b - 1);
    }
    return g;
}

Eigen::VectorXd ReferenceElement::basis(const Vec2& p) const {
    return coeffs_ * monomials(p);
}

Eigen::MatrixXd ReferenceElement::basis_gradient(const Vec2& p) const {
    return coeffs_ * monomial_gradients(p);
}

std::array<Vec2, 3> ReferenceElement::vertices() {
    return {Vec2(0, 0), Vec2(1, 0), Vec2(0, 1)};
}

std::array<int, 2> ReferenceElement::edge_vertices(int e) {
    switch (e) {
    case 0: return {1, 2};
    case 1: return {2, 0};
    case 2: return {0, 1};
    default: throw std::out_of_range("edge index");
    }
}

Vec2 ReferenceElement::edge_point(int e, double s) {
    const auto ev = edge_vertices(e);
    const auto v = vertices();
    return (1.0 - s) * v[ev[0]] + s * v[ev[1]];
}

std::vector<int> ReferenceElement::edge_nodes(int e) const {
    std::vector<int> idx;
    idx.reserve(degree_ + 1);
    for (int m = 0; m <= degree_; ++m) {
        const Vec2 p = edge_point(e, double(m) / degree_);
        // The lattice contains p exactly; find it.
        int found = -1;
        for (int l = 0; l < node_count(); ++l)
            if ((nodes_[l] - p).lpNorm<Eigen::Infinity>() < 1e-12) {
                found = l;
                break;
            }
        if (found < 0) throw std::logic_error("edge node not on lattice");
        idx.push_back(found);
    }
    return idx;
}

} // namespace surfdg
