#include "mortex/meshgen.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

namespace mortex {

namespace {

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> v(n + 1);
    for (int i = 0; i <= n; ++i) v[i] = a + (b - a) * i / n;
    return v;
}

void apply_jitter(Mesh& mesh, const std::vector<bool>& interior, double amplitude,
                  unsigned seed) {
    if (amplitude <= 0.0) return;
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (auto& n : mesh.nodes) {
        // draw for every node so the pattern is placement independent
        const double dx = u(rng), dy = u(rng);
        if (interior[n.id]) n.X += amplitude * Vec2(dx, dy);
    }
}

}  // namespace

Mesh generate_tensor_mesh(const std::vector<double>& xs,
                          const std::vector<double>& ys, ElemKind kind,
                          double distortion_amplitude, unsigned distortion_seed) {
    const int nx = static_cast<int>(xs.size()) - 1;
    const int ny = static_cast<int>(ys.size()) - 1;
    if (nx < 1 || ny < 1) throw GeometryError("degenerate grid extents");

    Mesh mesh;
    auto nid = [&](int i, int j) { return j * (nx + 1) + i; };
    std::vector<bool> interior((nx + 1) * (ny + 1), false);
    for (int j = 0; j <= ny; ++j)
        for (int i = 0; i <= nx; ++i) {
            mesh.nodes.push_back({nid(i, j), Vec2(xs[i], ys[j])});
            interior[nid(i, j)] = i > 0 && i < nx && j > 0 && j < ny;
        }

    int eid = 0;
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            const int n0 = nid(i, j), n1 = nid(i + 1, j), n2 = nid(i + 1, j + 1),
                      n3 = nid(i, j + 1);
            if (kind == ElemKind::Q4) {
                mesh.elements.push_back({eid++, ElemKind::Q4, {n0, n1, n2, n3}});
            } else {
                mesh.elements.push_back({eid++, ElemKind::T3, {n0, n1, n2, -1}});
                mesh.elements.push_back({eid++, ElemKind::T3, {n0, n2, n3, -1}});
            }
        }

    apply_jitter(mesh, interior, distortion_amplitude, distortion_seed);

    std::vector<int> bottom, right, top, left;
    for (int i = 0; i <= nx; ++i) bottom.push_back(nid(i, 0));
    for (int j = 0; j <= ny; ++j) right.push_back(nid(nx, j));
    for (int i = nx; i >= 0; --i) top.push_back(nid(i, ny));
    for (int j = ny; j >= 0; --j) left.push_back(nid(0, j));
    mesh.polylines = {{"bottom", bottom}, {"right", right}, {"top", top}, {"left", left}};
    mesh.node_sets = mesh.polylines;
    mesh.validate();
    return mesh;
}

Mesh generate_structured_mesh(const RectSpec& spec) {
    if (spec.x1 <= spec.x0 || spec.y1 <= spec.y0)
        throw GeometryError("degenerate rectangle extents");
    if (spec.nx < 1 || spec.ny < 1) throw GeometryError("nx, ny must be >= 1");
    const double hmin = std::min((spec.x1 - spec.x0) / spec.nx,
                                 (spec.y1 - spec.y0) / spec.ny);
    if (spec.distortion_amplitude >= 0.5 * hmin)
        throw GeometryError("distortion amplitude too large");
    return generate_tensor_mesh(linspace(spec.x0, spec.x1, spec.nx),
                                linspace(spec.y0, spec.y1, spec.ny), spec.kind,
                                spec.distortion_amplitude, spec.distortion_seed);
}

std::vector<double> graded_coords(double lo, double hi, double band_lo,
                                  double band_hi, double h_fine, double growth) {
    if (!(lo < band_lo && band_lo < band_hi && band_hi < hi))
        throw GeometryError("grading band must lie strictly inside the interval");
    std::vector<double> pts;
    // fine band
    const int nb = std::max(1, static_cast<int>(std::round((band_hi - band_lo) / h_fine)));
    for (int i = 0; i <= nb; ++i)
        pts.push_back(band_lo + (band_hi - band_lo) * i / nb);
    // grow right
    {
        double x = band_hi, h = h_fine;
        while (true) {
            h *= growth;
            if (x + 1.3 * h >= hi) {
                pts.push_back(hi);
                break;
            }
            x += h;
            pts.push_back(x);
        }
    }
    // grow left
    {
        double x = band_lo, h = h_fine;
        std::vector<double> leftpts;
        while (true) {
            h *= growth;
            if (x - 1.3 * h <= lo) {
                leftpts.push_back(lo);
                break;
            }
            x -= h;
            leftpts.push_back(x);
        }
        pts.insert(pts.begin(), leftpts.rbegin(), leftpts.rend());
    }
    return pts;
}

Mesh generate_disk_mesh(double R, int n_boundary, const Vec2& center,
                        double growth) {
    if (n_boundary < 8) throw GeometryError("n_boundary must be >= 8");

    // rings from the boundary inward, radial step growing geometrically
    struct Ring {
        double r;
        int n;
        int first_id;  // node ids are consecutive around the ring
    };
    std::vector<Ring> rings;
    const double h0 = 2.0 * M_PI * R / n_boundary;
    double r = R, dr = h0;
    int n = n_boundary;
    Mesh mesh;
    auto add_ring = [&](double radius, int count) {
        const int first = static_cast<int>(mesh.nodes.size());
        for (int i = 0; i < count; ++i) {
            const double th = 2.0 * M_PI * i / count;
            mesh.nodes.push_back({first + i,
                                  center + radius * Vec2(std::cos(th), std::sin(th))});
        }
        rings.push_back({radius, count, first});
    };
    add_ring(r, n);
    while (true) {
        const double next_dr = dr * growth;
        const double next_r = r - next_dr;
        if (next_r <= 1.5 * next_dr) break;
        const int next_n =
            std::max(8, static_cast<int>(std::round(2.0 * M_PI * next_r / next_dr)));
        add_ring(next_r, std::min(next_n, n));
        r = next_r;
        dr = next_dr;
        n = rings.back().n;
    }
    const int center_id = static_cast<int>(mesh.nodes.size());
    mesh.nodes.push_back({center_id, center});

    int eid = 0;
    auto add_tri = [&](int a, int b, int c) {
        Element e{eid++, ElemKind::T3, {a, b, c, -1}};
        if (mesh.element_area(e) < 0.0) std::swap(e.nodes[1], e.nodes[2]);
        mesh.elements.push_back(e);
    };
    // bands between consecutive rings, marching by angle
    for (std::size_t k = 0; k + 1 < rings.size(); ++k) {
        const Ring& A = rings[k];      // outer
        const Ring& B = rings[k + 1];  // inner
        int ci = 0, cj = 0;
        auto aid = [&](int c) { return A.first_id + (c % A.n); };
        auto bid = [&](int c) { return B.first_id + (c % B.n); };
        while (ci < A.n || cj < B.n) {
            const double next_a = static_cast<double>(ci + 1) / A.n;
            const double next_b = static_cast<double>(cj + 1) / B.n;
            if (cj >= B.n || (ci < A.n && next_a <= next_b)) {
                add_tri(aid(ci), aid(ci + 1), bid(cj));
                ++ci;
            } else {
                add_tri(bid(cj + 1), bid(cj), aid(ci % A.n));
                ++cj;
            }
        }
    }
    // fan to the center
    const Ring& last = rings.back();
    for (int i = 0; i < last.n; ++i)
        add_tri(center_id, last.first_id + i, last.first_id + (i + 1) % last.n);

    std::vector<int> boundary(n_boundary);
    for (int i = 0; i < n_boundary; ++i) boundary[i] = i;
    mesh.polylines["boundary"] = boundary;
    mesh.node_sets["boundary"] = boundary;
    mesh.validate();
    return mesh;
}

Curve circle_curve(double R, const Vec2& center) {
    return [=](double s) -> Vec2 {
        const double th = 2.0 * M_PI * s;
        return center + R * Vec2(std::cos(th), std::sin(th));
    };
}

Curve square_curve(double a, const Vec2& center) {
    return [=](double s) -> Vec2 {
        const double th = 2.0 * M_PI * s;
        const double c = std::cos(th), sn = std::sin(th);
        const double scale = a / std::max(std::abs(c), std::abs(sn));
        return center + scale * Vec2(c, sn);
    };
}

Mesh generate_ring_mesh(const Curve& inner, const Curve& outer, int n_theta,
                        int n_r) {
    if (n_theta < 8 || n_r < 1) throw GeometryError("ring mesh too coarse");
    Mesh mesh;
    auto nid = [&](int k, int i) { return k * n_theta + i; };
    for (int k = 0; k <= n_r; ++k) {
        const double t = static_cast<double>(k) / n_r;
        for (int i = 0; i < n_theta; ++i) {
            const double s = static_cast<double>(i) / n_theta;
            const Vec2 X = (1.0 - t) * inner(s) + t * outer(s);
            mesh.nodes.push_back({nid(k, i), X});
        }
    }
    int eid = 0;
    for (int k = 0; k < n_r; ++k)
        for (int i = 0; i < n_theta; ++i) {
            const int ip = (i + 1) % n_theta;
            Element e{eid++, ElemKind::Q4,
                      {nid(k, i), nid(k, ip), nid(k + 1, ip), nid(k + 1, i)}};
            if (mesh.element_area(e) < 0.0) {
                std::swap(e.nodes[1], e.nodes[3]);
            }
            mesh.elements.push_back(e);
        }
    std::vector<int> in(n_theta), out(n_theta);
    for (int i = 0; i < n_theta; ++i) {
        in[i] = nid(0, i);
        out[i] = nid(n_r, i);
    }
    mesh.polylines = {{"inner", in}, {"outer", out}};
    mesh.node_sets = mesh.polylines;
    mesh.validate();
    return mesh;
}

Mesh merge_meshes(const Mesh& a, const Mesh& b, double tol) {
    Mesh out = a;
    // map b-node id -> out id, welding coincident nodes
    std::vector<int> remap(b.nodes.size(), -1);
    // coarse spatial hash
    std::multimap<long long, int> hash;
    auto key = [&](const Vec2& X) {
        return static_cast<long long>(std::floor(X.x() / (4 * tol))) * 1000003LL +
               static_cast<long long>(std::floor(X.y() / (4 * tol)));
    };
    for (const auto& n : out.nodes) hash.insert({key(n.X), n.id});
    for (const auto& n : b.nodes) {
        int found = -1;
        for (long long dx = -1; dx <= 1 && found < 0; ++dx)
            for (long long dy = -1; dy <= 1 && found < 0; ++dy) {
                auto range = hash.equal_range(key(n.X) + dx * 1000003LL + dy);
                for (auto it = range.first; it != range.second; ++it)
                    if ((out.nodes[it->second].X - n.X).norm() <= tol) {
                        found = it->second;
                        break;
                    }
            }
        if (found >= 0) {
            remap[n.id] = found;
        } else {
            const int nid = static_cast<int>(out.nodes.size());
            out.nodes.push_back({nid, n.X});
            hash.insert({key(n.X), nid});
            remap[n.id] = nid;
        }
    }
    for (const auto& e : b.elements) {
        Element ne = e;
        ne.id = static_cast<int>(out.elements.size());
        for (int i = 0; i < ne.nnodes(); ++i) ne.nodes[i] = remap[e.nodes[i]];
        out.elements.push_back(ne);
    }
    auto carry = [&](const std::map<std::string, std::vector<int>>& src,
                     std::map<std::string, std::vector<int>>& dst) {
        for (const auto& [name, ids] : src) {
            std::vector<int> mapped;
            mapped.reserve(ids.size());
            for (int id : ids) mapped.push_back(remap[id]);
            std::string use = dst.count(name) ? name + "_b" : name;
            dst[use] = mapped;
        }
    };
    carry(b.polylines, out.polylines);
    carry(b.node_sets, out.node_sets);
    out.validate();
    return out;
}

}  // namespace mortex
