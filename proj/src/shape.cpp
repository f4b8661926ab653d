#include "mortex/shape.hpp"

#include <array>
#include <cmath>

namespace mortex {

VecX shape_values(ElemKind kind, const Vec2& parent) {
    if (kind == ElemKind::T3) {
        VecX N(3);
        N << 1.0 - parent.x() - parent.y(), parent.x(), parent.y();
        return N;
    }
    if (kind == ElemKind::Q4) {
        const double mu = parent.x(), eta = parent.y();
        VecX N(4);
        N << 0.25 * (1 - mu) * (1 - eta), 0.25 * (1 + mu) * (1 - eta),
            0.25 * (1 + mu) * (1 + eta), 0.25 * (1 - mu) * (1 + eta);
        return N;
    }
    throw std::invalid_argument("unknown element kind");
}

MatX shape_gradients(ElemKind kind, const Vec2& parent) {
    if (kind == ElemKind::T3) {
        MatX G(3, 2);
        G << -1, -1, 1, 0, 0, 1;
        return G;
    }
    if (kind == ElemKind::Q4) {
        const double mu = parent.x(), eta = parent.y();
        MatX G(4, 2);
        G << -0.25 * (1 - eta), -0.25 * (1 - mu),  //
            0.25 * (1 - eta), -0.25 * (1 + mu),    //
            0.25 * (1 + eta), 0.25 * (1 + mu),     //
            -0.25 * (1 + eta), 0.25 * (1 - mu);
        return G;
    }
    throw std::invalid_argument("unknown element kind");
}

Eigen::Vector2d edge_shape_values(double xi) {
    return {0.5 * (1.0 - xi), 0.5 * (1.0 + xi)};
}

bool parent_contains(ElemKind kind, const Vec2& parent, double tol) {
    if (kind == ElemKind::T3)
        return parent.x() >= -tol && parent.y() >= -tol &&
               parent.x() + parent.y() <= 1.0 + tol;
    return std::abs(parent.x()) <= 1.0 + tol && std::abs(parent.y()) <= 1.0 + tol;
}

Vec2 parent_center(ElemKind kind) {
    return kind == ElemKind::T3 ? Vec2(1.0 / 3.0, 1.0 / 3.0) : Vec2(0.0, 0.0);
}

Vec2 parent_node(ElemKind kind, int a) {
    if (kind == ElemKind::T3) {
        static const Vec2 p[3] = {{0, 0}, {1, 0}, {0, 1}};
        return p[a];
    }
    static const Vec2 q[4] = {{-1, -1}, {1, -1}, {1, 1}, {-1, 1}};
    return q[a];
}

Vec2 forward_map(const Element& e, const Mesh& mesh, const Vec2& parent) {
    const VecX N = shape_values(e.kind, parent);
    Vec2 X = Vec2::Zero();
    for (int a = 0; a < e.nnodes(); ++a) X += N(a) * mesh.coord(e.nodes[a]);
    return X;
}

Mat2 jacobian(const Element& e, const Mesh& mesh, const Vec2& parent) {
    const MatX G = shape_gradients(e.kind, parent);
    Mat2 J = Mat2::Zero();
    for (int a = 0; a < e.nnodes(); ++a)
        J += mesh.coord(e.nodes[a]) * G.row(a);  // dX/dparent
    return J;
}

MatX physical_gradients(const Element& e, const Mesh& mesh, const Vec2& parent) {
    const MatX G = shape_gradients(e.kind, parent);
    const Mat2 J = jacobian(e, mesh, parent);
    // grad_X N = grad_parent N * J^{-1}
    return G * J.inverse();
}

InverseMapResult inverse_map_try(const Element& e, const Mesh& mesh, const Vec2& X,
                                 double inside_tol) {
    InverseMapResult res;
    if (e.kind == ElemKind::T3) {
        const Vec2& X0 = mesh.coord(e.nodes[0]);
        Mat2 A;
        A.col(0) = mesh.coord(e.nodes[1]) - X0;
        A.col(1) = mesh.coord(e.nodes[2]) - X0;
        res.parent = A.inverse() * (X - X0);
        res.converged = true;
    } else {
        // iterate on coordinates shifted by X: the residual is then built
        // from element-size differences, so its rounding noise stays at
        // eps * h instead of eps * |X| (small elements far from the origin
        // would otherwise stall just above the step tolerance)
        std::array<Vec2, 4> d;
        for (int a = 0; a < e.nnodes(); ++a)
            d[a] = mesh.coord(e.nodes[a]) - X;
        Vec2 xi = parent_center(e.kind);
        for (int it = 0; it < 30; ++it) {
            const VecX N = shape_values(e.kind, xi);
            const MatX G = shape_gradients(e.kind, xi);
            Vec2 r = Vec2::Zero();
            Mat2 J = Mat2::Zero();
            for (int a = 0; a < e.nnodes(); ++a) {
                r += N(a) * d[a];
                J += d[a] * G.row(a);
            }
            const Vec2 dxi = J.inverse() * r;
            xi -= dxi;
            if (dxi.norm() < 1e-13) {
                res.converged = true;
                break;
            }
        }
        res.parent = xi;
    }
    res.inside = res.converged && parent_contains(e.kind, res.parent, inside_tol);
    return res;
}

Vec2 inverse_map(const Element& e, const Mesh& mesh, const Vec2& X,
                 double inside_tol) {
    const InverseMapResult r = inverse_map_try(e, mesh, X, inside_tol);
    if (!r.converged)
        throw GeometryError("inverse map did not converge in element " +
                            std::to_string(e.id));
    if (!r.inside)
        throw GeometryError("point outside element " + std::to_string(e.id));
    return r.parent;
}

}  // namespace mortex
