#include "sklern/geometry.hpp"

#include "sklern/symfun.hpp"

#include <math.h> // pchip in Boost 1.74 calls isnan unqualified
#include <boost/math/interpolators/pchip.hpp>
#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>

namespace sklern {

namespace {

using boost::math::interpolators::pchip;

// pchip of w on the nodes around r (at least 4 nodes).
pchip<std::vector<double>> local_w(const RadialSolution& sol, double r, int half = 3)
{
    const auto it = std::lower_bound(sol.r.begin(), sol.r.end(), r);
    const int j = static_cast<int>(it - sol.r.begin());
    const int m = sol.size();
    int lo = std::max(0, j - half);
    int hi = std::min(m - 1, j + half);
    while (hi - lo + 1 < 4) {
        lo = std::max(0, lo - 1);
        hi = std::min(m - 1, hi + 1);
    }
    std::vector<double> x(sol.r.begin() + lo, sol.r.begin() + hi + 1);
    std::vector<double> y(sol.w.begin() + lo, sol.w.begin() + hi + 1);
    return pchip(std::move(x), std::move(y));
}

double cell_near(const RadialSolution& sol, int j)
{
    const auto i = static_cast<size_t>(j);
    return j > 0 ? sol.r[i] - sol.r[i - 1] : sol.r[i + 1] - sol.r[i];
}

double sigma_split(int n, int k, double T, double R)
{
    return binom(n - 1, k) * std::pow(T, k) + binom(n - 1, k - 1) * std::pow(T, k - 1) * R;
}

} // namespace

DistResult dist(const Domain& dom, double r)
{
    if (const auto* ball = std::get_if<Ball>(&dom)) {
        if (!(r >= 0.0 && r < ball->R)) {
            throw ArgumentError("radius outside the ball");
        }
        return {ball->R - r, Nearest::Boundary};
    }
    const auto& ann = std::get<Annulus>(dom);
    if (!(r > ann.a && r < ann.b)) {
        throw ArgumentError("radius outside the annulus");
    }
    const double di = r - ann.a;
    const double dout = ann.b - r;
    if (di == dout) {
        return {di, Nearest::Tie};
    }
    return di < dout ? DistResult{di, Nearest::Inner} : DistResult{dout, Nearest::Outer};
}

double unit_sphere_area(int n)
{
    return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n);
}

double mean_curvature_conformal(double u, double dnu_lnu, double H0, int n)
{
    if (!(u > 0.0)) {
        throw ArgumentError("conformal factor must be positive");
    }
    if (n < 3) {
        throw ArgumentError("dimension n must be at least 3");
    }
    return std::pow(u, -2.0 / (n - 2)) * (-(2.0 * (n - 1) / (n - 2)) * dnu_lnu + H0);
}

double sphere_area_g(double r, double u_r, int n)
{
    if (!(r > 0.0) || !(u_r > 0.0)) {
        throw ArgumentError("sphere_area_g needs r > 0 and u > 0");
    }
    return unit_sphere_area(n) * std::pow(r, n - 1) * std::pow(u_r, 2.0 * (n - 1) / (n - 2));
}

SphereReport sphere_report(const RadialSolution& sol, double r)
{
    if (sol.size() < 4 || r < sol.r.front() || r > sol.r.back()) {
        throw ArgumentError("sphere radius outside the tabulated range");
    }
    const int n = sol.n;
    const auto f = local_w(sol, r);
    const double w = f(r);
    const double w1 = f.prime(r);
    const double u = std::exp(0.5 * (n - 2) * w);
    SphereReport rep;
    rep.r = r;
    rep.H0 = (n - 1) / r;
    rep.Hu = mean_curvature_conformal(u, -0.5 * (n - 2) * w1, rep.H0, n);
    rep.area_g = sphere_area_g(r, u, n);
    rep.obstruction = rep.Hu * rep.Hu * std::exp(2.0 * w) - rep.H0 * rep.H0;
    return rep;
}

MinimalSphere minimal_sphere(const RadialSolution& sol)
{
    const int m = sol.size();
    if (m < 4) {
        throw ArgumentError("minimal_sphere needs at least 4 nodes");
    }
    const int n = sol.n;
    auto log_area = [&](double r, double w) { return (n - 1) * (std::log(r) + w); };
    int jmin = 0;
    double best = log_area(sol.r[0], sol.w[0]);
    MinimalSphere res;
    for (int j = 1; j < m; ++j) {
        const double v = log_area(sol.r[static_cast<size_t>(j)], sol.w[static_cast<size_t>(j)]);
        if (v < best) {
            best = v;
            jmin = j;
            res.tie = false;
        } else if (v == best) {
            res.tie = true;
        }
    }
    res.index = jmin;
    res.r_min = sol.r[static_cast<size_t>(jmin)];
    res.area = unit_sphere_area(n) * std::exp(best);
    if (jmin == 0 || jmin == m - 1) {
        res.detached = true;
        return res;
    }
    const double lo = sol.r[static_cast<size_t>(jmin - 1)];
    const double hi = sol.r[static_cast<size_t>(jmin + 1)];
    const auto f = local_w(sol, res.r_min);
    auto g = [&](double r) { return log_area(r, f(r)); };

    int minima = 0;
    constexpr int probes = 40;
    double prev2 = g(lo);
    double prev1 = g(lo + (hi - lo) / probes);
    for (int i = 2; i <= probes; ++i) {
        const double cur = g(lo + (hi - lo) * i / probes);
        if (prev1 < prev2 && prev1 <= cur) {
            ++minima;
        }
        prev2 = prev1;
        prev1 = cur;
    }
    if (minima > 1) {
        res.unimodal = false;
        return res;
    }
    const auto found = boost::math::tools::brent_find_minima(g, lo, hi, 52);
    if (found.second < best) {
        res.r_min = found.first;
        res.area = unit_sphere_area(n) * std::exp(found.second);
    }
    return res;
}

double obstruction_residual(const RadialSolution& sol, double r)
{
    if (sol.corner && sol.corner->present) {
        const int j = sol.corner->index;
        const double cell = cell_near(sol, j);
        if (std::abs(r - sol.corner->r_star) < 2.0 * cell) {
            throw ArgumentError("radius lies in the corner exclusion zone");
        }
    }
    return sphere_report(sol, r).obstruction;
}

double barrier_G(const BoundaryData& bd, const ExpansionTable& table, double s, double theta, double d)
{
    const int n = bd.n;
    const int k = bd.k;
    const auto jet = table.V.truncated(n).jet(d);
    const double V = jet.value + s * (std::pow(d, n) - std::pow(d, theta));
    const double V1 = jet.d1 + s * (n * std::pow(d, n - 1) - theta * std::pow(d, theta - 1));
    const double V2 = jet.d2 + s * (n * (n - 1.0) * std::pow(d, n - 2) - theta * (theta - 1) * std::pow(d, theta - 2));
    const double rhs = n_k(n, k) * std::exp(2.0 * k * V);

    if (bd.umbilic() && bd.kappa.front() != 0.0) {
        // Coordinate sphere of radius R = 1/|kappa|: the ball (kappa > 0) or the exterior of a ball (kappa < 0).
        const double kap = bd.kappa.front();
        const double R = 1.0 / std::abs(kap);
        const double r = kap > 0.0 ? R - d : R + d;
        const double orient = kap > 0.0 ? -1.0 : 1.0;
        const double w = -std::log(d) + V;
        const double w1 = orient * (-1.0 / d + V1);
        const double w2 = 1.0 / (d * d) + V2;
        const auto lam = lambda_radial(w, w1, w2, r);
        return sigma_split(n, k, d * d * lam.lamT, d * d * lam.lamR) - rhs;
    }
    const double tV = d * V1;
    const double ttV = d * d * V2 + d * V1;
    std::vector<double> diag;
    for (double kap : bd.kappa) {
        const double gi = kap * d / (1.0 - kap * d);
        diag.push_back(0.5 * (1.0 - tV) * (1.0 - tV) + (1.0 - tV) * gi);
    }
    diag.push_back(0.5 + ttV - 0.5 * tV * tV);
    return elementary_symmetric(std::span<const double>(diag), k)[static_cast<size_t>(k)] - rhs;
}

BarrierReport barrier_check(const BoundaryData& bd, const ExpansionTable& table, const BarrierSpec& spec)
{
    bd.validate();
    const int n = bd.n;
    if (table.order < n) {
        throw ArgumentError("barrier check needs a table of order at least n");
    }
    if (table.mu != 0.0) {
        throw ArgumentError("barrier check needs a table computed with mu = 0");
    }
    const double theta = spec.theta > 0.0 ? spec.theta : n + 0.5;
    if (!(theta > n && theta < n + 1)) {
        throw ArgumentError("theta must lie in (n, n+1)");
    }
    if (!(spec.beta >= 0.0) || !(spec.delta > 0.0) || spec.beta * std::pow(spec.delta, n) > 1.0) {
        throw ArgumentError("barrier needs beta >= 0, delta > 0 and beta delta^n <= 1");
    }
    if (spec.samples < 2 || !(spec.lower_ratio > 0.0 && spec.lower_ratio < 1.0)) {
        throw ArgumentError("barrier sampling needs at least 2 samples and 0 < lower_ratio < 1");
    }
    double kmax = 0.0;
    for (double kap : bd.kappa) {
        kmax = std::max(kmax, std::abs(kap));
    }
    const double scan_max = spec.scan_max > 0.0 ? spec.scan_max : (kmax > 0.0 ? 0.9 / kmax : 1.0);

    BarrierReport rep;
    rep.theta = theta;
    rep.beta = spec.beta;
    rep.delta = spec.delta;
    rep.samples = spec.samples;
    rep.max_G_plus = -HUGE_VAL;
    rep.min_G_minus = HUGE_VAL;
    const double d0 = spec.delta * spec.lower_ratio;
    std::vector<double> lx;
    double sx = 0.0;
    double sy = 0.0;
    double sxx = 0.0;
    double sxy = 0.0;
    for (int i = 0; i < spec.samples; ++i) {
        const double d = d0 * std::pow(spec.delta / d0, static_cast<double>(i) / (spec.samples - 1));
        rep.max_G_plus = std::max(rep.max_G_plus, barrier_G(bd, table, spec.beta, theta, d));
        rep.min_G_minus = std::min(rep.min_G_minus, barrier_G(bd, table, -spec.beta, theta, d));
        const double g0 = std::abs(barrier_G(bd, table, 0.0, theta, d));
        if (g0 > 0.0) {
            const double x = std::log(d);
            const double y = std::log(g0);
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
            lx.push_back(x);
        }
    }
    const double m = static_cast<double>(lx.size());
    rep.residual_slope = m >= 2 ? (m * sxy - sx * sy) / (m * sxx - sx * sx) : 0.0;
    rep.plus_negative = rep.max_G_plus < 0.0;
    rep.minus_positive = rep.min_G_minus > 0.0;

    constexpr int scan = 400;
    rep.empirical_delta1 = 0.0;
    for (int i = 0; i < scan; ++i) {
        const double d = d0 * std::pow(scan_max / d0, static_cast<double>(i) / (scan - 1));
        const bool ok = barrier_G(bd, table, spec.beta, theta, d) < 0.0 && barrier_G(bd, table, -spec.beta, theta, d) > 0.0;
        if (!ok) {
            break;
        }
        rep.empirical_delta1 = d;
    }
    return rep;
}

} // namespace sklern
