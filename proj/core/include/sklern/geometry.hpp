#pragma once

#include <vector>

#include "sklern/radial.hpp"

namespace sklern {

enum class Nearest { Boundary, Inner, Outer, Tie };

struct DistResult {
    double d;
    Nearest nearest;
};

/// Distance to the boundary and the nearest component (the radial stand-in for the projection).
DistResult dist(const Domain& dom, double r);

/// Area of the unit sphere S^{n-1} in R^n, 2 pi^{n/2} / Gamma(n/2).
double unit_sphere_area(int n);

/// u^{-2/(n-2)} (-(2(n-1)/(n-2)) d_nu ln u + H0). For coordinate spheres nu points to the centre and H0 = (n-1)/r.
double mean_curvature_conformal(double u, double dnu_lnu, double H0, int n);

/// omega_{n-1} r^{n-1} u^{2(n-1)/(n-2)}.
double sphere_area_g(double r, double u_r, int n);

struct SphereReport {
    double r = 0.0;
    double H0 = 0.0;
    double Hu = 0.0;
    double area_g = 0.0;
    double obstruction = 0.0;
};

/// Coordinate sphere of radius r; w and w' are interpolated monotonically between nodes.
SphereReport sphere_report(const RadialSolution& sol, double r);

struct MinimalSphere {
    double r_min = 0.0;
    double area = 0.0;
    int index = -1;
    /// Minimum sits on the first or last node: the radial analogue of touching the boundary.
    bool detached = false;
    bool tie = false;
    /// False when the interpolated area is not unimodal near the grid minimum; r_min is then the grid argmin.
    bool unimodal = true;
};

/// Least conformal area over centred spheres.
MinimalSphere minimal_sphere(const RadialSolution& sol);

/// H_u^2 u^{4/(n-2)} - ((n-1)/r)^2, rejected within 2 cells of a detected corner.
double obstruction_residual(const RadialSolution& sol, double r);

struct BarrierSpec {
    double beta = 1.0;
    /// 0 selects n + 1/2.
    double theta = 0.0;
    double delta = 0.05;
    int samples = 256;
    /// Samples run geometrically over [delta * lower_ratio, delta].
    double lower_ratio = 0.1;
    /// Upper end of the scan for the empirical delta_1; 0 selects 0.9 / max|kappa| (or 1 for flat data).
    double scan_max = 0.0;
};

struct BarrierReport {
    double theta = 0.0;
    double beta = 0.0;
    double delta = 0.0;
    int samples = 0;
    double max_G_plus = 0.0;
    double min_G_minus = 0.0;
    double empirical_delta1 = 0.0;
    /// log-log slope of |G(W)| over the sample window.
    double residual_slope = 0.0;
    bool plus_negative = false;
    bool minus_positive = false;
};

/// G(W + s (d^n - d^theta)) at distance d, W the order-n expansion of the table.
double barrier_G(const BoundaryData& bd, const ExpansionTable& table, double s, double theta, double d);

BarrierReport barrier_check(const BoundaryData& bd, const ExpansionTable& table, const BarrierSpec& spec);

} // namespace sklern
