#include "mortex/eshelby.hpp"

#include <cmath>

namespace mortex {

namespace {

struct Kolosov {
    double mu1, mu2, k1, k2;
};

Kolosov kolosov(const EshelbyParams& p) {
    auto mu = [](const Material& m) { return m.E / (2.0 * (1.0 + m.nu)); };
    auto k = [](const Material& m) { return 3.0 - 4.0 * m.nu; };  // plane strain
    return {mu(p.incl), mu(p.matrix), k(p.incl), k(p.matrix)};
}

}  // namespace

PolarStress eshelby_stress(const EshelbyParams& p, double r, double theta) {
    const auto [mu1, mu2, k1, k2] = kolosov(p);
    const double s0 = p.sigma0;
    const double c2t = std::cos(2.0 * theta), s2t = std::sin(2.0 * theta);
    PolarStress s;
    if (r < p.a) {
        const double b1 = mu1 * (k2 + 1.0) / (2.0 * mu1 + mu2 * (k1 - 1.0));
        const double d1 = mu1 * (k2 + 1.0) / (mu2 + mu1 * k2);
        s.srr = 0.5 * s0 * (b1 + d1 * c2t);
        s.stt = 0.5 * s0 * (b1 - d1 * c2t);
        s.srt = -0.5 * s0 * d1 * s2t;
    } else {
        const double b2 = -2.0 * (mu1 - mu2) / (mu2 + mu1 * k2);
        const double d2 = (mu1 - mu2) / (mu2 + mu1 * k2);
        const double g2 = (mu2 * (k1 - 1.0) - mu1 * (k2 - 1.0)) /
                          (2.0 * mu1 + mu2 * (k1 - 1.0));
        const double q2 = p.a * p.a / (r * r);
        const double q4 = q2 * q2;
        s.srr = 0.5 * s0 *
                (1.0 - g2 * q2 + (1.0 - 2.0 * b2 * q2 - 3.0 * d2 * q4) * c2t);
        // the cos2theta term enters with a minus sign: the rigid-hole limit
        // (mu1 = 0: b2 = 2, d2 = -1, g2 = 1) must reproduce the classical
        // stress concentration around a hole, and the homogeneous limit the
        // plain uniaxial field
        s.stt = 0.5 * s0 * (1.0 + g2 * q2 - (1.0 - 3.0 * d2 * q4) * c2t);
        s.srt = -0.5 * s0 * (1.0 + b2 * q2 + 3.0 * d2 * q4) * s2t;
    }
    return s;
}

Voigt eshelby_stress_cartesian(const EshelbyParams& p, const Vec2& x) {
    const double r = x.norm();
    const double theta = std::atan2(x.y(), x.x());
    const PolarStress s = eshelby_stress(p, r, theta);
    const double c = std::cos(theta), sn = std::sin(theta);
    // rotate the polar tensor back to Cartesian axes
    Eigen::Matrix2d S;
    S << s.srr, s.srt, s.srt, s.stt;
    Eigen::Matrix2d Q;
    Q << c, -sn, sn, c;
    const Eigen::Matrix2d C = Q * S * Q.transpose();
    return Voigt{C(0, 0), C(1, 1), C(0, 1)};
}

}  // namespace mortex
