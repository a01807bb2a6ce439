#pragma once

namespace skelhedge {

// Case 2 of Hobson's variance-optimal solution for Heston.
struct HobsonParams {
    double kappa = 0.0;
    double theta = 0.0;
    double sigma = 0.0;
    double rho = 0.0;
    double b = 0.0;

    double A = 0.0;
    double B = 0.0;
    double C = 0.0;
    double D = 0.0;
    double offset = 0.0;  // atanh(AB/C)
    double gap = 0.0;     // C^2 - A^2 B^2 = F'(0)

    // Throws std::domain_error outside the case-2 regime.
    static HobsonParams make(double kappa, double theta, double sigma, double rho, double b);
};

double hobson_F(double t, const HobsonParams& p);
double hobson_F_derivative(double t, const HobsonParams& p);

// Integral of F over [0, T] by adaptive Simpson.
double integrate_F(const HobsonParams& p, double T, double abs_tol = 1e-10);

double z_tilde_0(const HobsonParams& p, double y0, double T, double abs_tol = 1e-10);

double zeta_tilde(double t, const HobsonParams& p, double z0, double T);

}  // namespace skelhedge
