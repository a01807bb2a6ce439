#include "skelhedge/hobson.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace skelhedge {

HobsonParams HobsonParams::make(double kappa, double theta, double sigma, double rho, double b) {
    HobsonParams p{kappa, theta, sigma, rho, b};
    const double q = 1.0 - 2.0 * rho * rho;
    if (q == 0.0) throw std::domain_error("hobson: 1 - 2 rho^2 must be nonzero");
    if (!(sigma > 0.0)) throw std::domain_error("hobson: sigma must be positive");
    const double kb = kappa + 2.0 * rho * sigma * b;
    p.A = std::sqrt(std::abs(q) * sigma * sigma);
    p.B = kb / (sigma * sigma * std::abs(q));
    p.D = 2.0 * b * b + kb * kb / (sigma * sigma * q);
    p.C = std::sqrt(std::abs(p.D));
    if (!(p.C > 0.0)) throw std::domain_error("hobson: outside case-2 parameter regime");
    const double r = p.A * p.B / p.C;
    if (!(std::abs(r) < 1.0)) throw std::domain_error("hobson: outside case-2 parameter regime");
    p.offset = std::atanh(r);
    // C^2 - A^2 B^2 without cancellation.
    const double kb2 = kb * kb / (sigma * sigma * std::abs(q));
    if (q > 0.0)
        p.gap = 2.0 * b * b;
    else if (p.D > 0.0)
        p.gap = 2.0 * b * b - 2.0 * kb2;
    else
        p.gap = -2.0 * b * b;
    return p;
}

// (C/A) tanh(ACt + atanh(AB/C)) - B rewritten with the tanh addition formula.
double hobson_F(double t, const HobsonParams& p) {
    const double th = std::tanh(p.A * p.C * t);
    const double r = std::tanh(p.offset);
    return p.gap * th / (p.A * p.C * (1.0 + r * th));
}

double hobson_F_derivative(double t, const HobsonParams& p) {
    const double th = std::tanh(p.A * p.C * t + p.offset);
    return p.C * p.C * (1.0 - th * th);
}

namespace {

double simpson(double a, double fa, double fm, double b, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive(const HobsonParams& p, double a, double fa, double b, double fb, double m,
                double fm, double whole, double tol, int depth) {
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = hobson_F(lm, p), frm = hobson_F(rm, p);
    const double left = simpson(a, fa, flm, m, fm);
    const double right = simpson(m, fm, frm, b, fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return adaptive(p, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
           adaptive(p, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace

double integrate_F(const HobsonParams& p, double T, double abs_tol) {
    if (T < 0.0) throw std::domain_error("integrate_F: T must be >= 0");
    if (T == 0.0) return 0.0;
    const double fa = hobson_F(0.0, p), fb = hobson_F(T, p), m = 0.5 * T;
    const double fm = hobson_F(m, p);
    const double whole = simpson(0.0, fa, fm, T, fb);
    // F can be tiny; keep twelve significant digits when abs_tol alone would not.
    const double tol = std::min(abs_tol, std::max(1e-12 * std::abs(whole), 1e-300));
    return adaptive(p, 0.0, fa, T, fb, m, fm, whole, tol, 50);
}

double z_tilde_0(const HobsonParams& p, double y0, double T, double abs_tol) {
    return 0.5 * y0 * y0 * hobson_F(T, p) + p.kappa * p.theta * integrate_F(p, T, abs_tol);
}

double zeta_tilde(double t, const HobsonParams& p, double z0, double T) {
    if (t < 0.0 || t > T) throw std::domain_error("zeta_tilde: t outside [0, T]");
    return z0 * p.rho * p.sigma * hobson_F(T - t, p) - z0 * p.b;
}

}  // namespace skelhedge
