#include "sklern/radial.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace sklern {

namespace {

// Local floor: mismatches between kFloorGap and kFloorReach cells from the candidate.
constexpr int kFloorGap = 4;
constexpr int kFloorReach = 12;

double fit_slope(const std::vector<double>& x, const std::vector<double>& y)
{
    const double m = static_cast<double>(x.size());
    double sx = 0.0;
    double sy = 0.0;
    double sxx = 0.0;
    double sxy = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

double central_du(const RadialSolution& sol, int j)
{
    const auto i = static_cast<size_t>(j);
    return (sol.u[i + 1] - sol.u[i - 1]) / (sol.r[i + 1] - sol.r[i - 1]);
}

// u' on the Gamma_k edge lambda_T = 0, i.e. w' in {0, -2/r}; the root nearest the one-sided difference.
double edge_limit(const RadialSolution& sol, int j, double one_sided)
{
    const auto i = static_cast<size_t>(j);
    const double scale = 0.5 * (sol.n - 2) * sol.u[i];
    const double flat = 0.0;
    const double steep = -2.0 / sol.r[i] * scale;
    return std::abs(one_sided - flat) <= std::abs(one_sided - steep) ? flat : steep;
}

} // namespace

CornerRecord corner_metrics(const RadialSolution& sol, const CornerOptions& opt)
{
    const int m = sol.size();
    if (m < 16) {
        throw ArgumentError("corner_metrics needs at least 16 nodes");
    }
    double lo = 0.0;
    double hi = 0.0;
    if (const auto* ball = std::get_if<Ball>(&sol.domain)) {
        lo = -1.0;
        hi = ball->R * (1.0 - opt.boundary_exclusion);
    } else {
        const auto& ann = std::get<Annulus>(sol.domain);
        const double pad = opt.boundary_exclusion * (ann.b - ann.a);
        lo = ann.a + pad;
        hi = ann.b - pad;
    }
    std::vector<double> mismatch(static_cast<size_t>(m), -1.0);
    std::vector<int> window;
    for (int j = 1; j + 1 < m; ++j) {
        const auto i = static_cast<size_t>(j);
        if (sol.r[i] > lo && sol.r[i] < hi) {
            mismatch[i] = std::abs(sol.du_right[i] - sol.du_left[i]);
            window.push_back(j);
        }
    }
    if (static_cast<int>(window.size()) < 2 * kFloorReach + 1) {
        throw ArgumentError("corner_metrics: too few interior nodes outside the boundary layers");
    }
    // Smooth profiles give mismatches ~ |u''| h that vary slowly; score the excess over the trend.
    const int first = window.front() + kFloorReach;
    const int last = window.back() - kFloorReach;
    int jstar = first;
    double best = -HUGE_VAL;
    for (int j = first; j <= last; ++j) {
        const auto i = static_cast<size_t>(j);
        const double score = mismatch[i] - 0.5 * (mismatch[i - static_cast<size_t>(kFloorGap)] + mismatch[i + static_cast<size_t>(kFloorGap)]);
        if (score > best) {
            best = score;
            jstar = j;
        }
    }
    CornerRecord rec;
    const auto s = static_cast<size_t>(jstar);
    rec.index = jstar;
    rec.r_star = sol.r[s];
    rec.jump = mismatch[s];
    rec.du_left = sol.du_left[s];
    rec.du_right = sol.du_right[s];
    for (int off = kFloorGap; off <= kFloorReach; ++off) {
        rec.floor = std::max({rec.floor, mismatch[s - static_cast<size_t>(off)], mismatch[s + static_cast<size_t>(off)]});
    }
    rec.present = rec.jump > opt.significance * rec.floor;
    if (!rec.present) {
        return rec;
    }
    rec.anchor_left = edge_limit(sol, jstar, rec.du_left);
    rec.anchor_right = edge_limit(sol, jstar, rec.du_right);

    auto fit = [&](int dir, double anchor, int& count) {
        const double h = std::abs(sol.r[s] - sol.r[static_cast<size_t>(jstar + dir)]);
        const double x0 = opt.start_cells * h;
        const double x1 = opt.decade * x0;
        std::vector<double> lx;
        std::vector<double> ly;
        for (int j = jstar + dir; j >= 1 && j + 1 < m; j += dir) {
            const double x = std::abs(sol.r[static_cast<size_t>(j)] - rec.r_star);
            if (x > x1 * (1.0 + 1e-9)) {
                break;
            }
            if (x < x0 * (1.0 - 1e-9)) {
                continue;
            }
            const double y = std::abs(central_du(sol, j) - anchor);
            if (y > 0.0) {
                lx.push_back(std::log(x));
                ly.push_back(std::log(y));
            }
        }
        count = static_cast<int>(lx.size());
        if (count < opt.min_points) {
            throw NumericalFailure("Hoelder fit window underresolved: " + std::to_string(count) + " points");
        }
        return fit_slope(lx, ly);
    };
    rec.holder_left = fit(-1, rec.anchor_left, rec.fit_points_left);
    rec.holder_right = fit(+1, rec.anchor_right, rec.fit_points_right);
    return rec;
}

XiReport xi_ode_residual(const RadialSolution& sol, const ExpansionTable& table, const XiOptions& opt)
{
    const auto* ball = std::get_if<Ball>(&sol.domain);
    if (ball == nullptr) {
        throw DomainError("xi diagnostic is defined near the ball boundary");
    }
    const double R = ball->R;
    const int n = table.n;
    const double dmin = opt.dmin > 0.0 ? opt.dmin : 0.01 * R;
    const double dmax = opt.dmax > 0.0 ? opt.dmax : 0.1 * R;
    if (!(dmax > dmin)) {
        throw ArgumentError("xi window is empty");
    }
    if (dmin < 10.0 * sol.eps) {
        throw NumericalFailure("xi window starts within 10 epsilon of the seed offset");
    }
    if (table.order < n - 1) {
        throw ArgumentError("expansion table too short for the xi diagnostic");
    }
    XiReport rep;
    for (int j = sol.size() - 1; j >= 0; --j) {
        const auto i = static_cast<size_t>(j);
        const double d = R - sol.r[i];
        if (d < dmin || d > dmax) {
            continue;
        }
        const double L = std::log(d);
        double W = -L;
        double dp = 1.0;
        for (int p = 1; p < n; ++p) {
            dp *= d;
            double inner = 0.0;
            for (int q = table.V.log_degree(p); q >= 0; --q) {
                inner = inner * L + table.coeff(p, q);
            }
            W += inner * dp;
        }
        rep.d.push_back(d);
        rep.xi.push_back((sol.w[i] - W) / std::pow(d, n));
    }
    const int m = static_cast<int>(rep.d.size());
    if (m < 5) {
        throw NumericalFailure("xi window holds fewer than 5 nodes");
    }
    std::vector<double> F(static_cast<size_t>(m), 0.0);
    for (int i = 1; i + 1 < m; ++i) {
        const auto c = static_cast<size_t>(i);
        const double dxi = (rep.xi[c + 1] - rep.xi[c - 1]) / (rep.d[c + 1] - rep.d[c - 1]);
        F[c] = std::pow(rep.d[c], n + 2) * dxi;
    }
    for (int i = 2; i + 2 < m; ++i) {
        const auto c = static_cast<size_t>(i);
        const double dF = (F[c + 1] - F[c - 1]) / (rep.d[c + 1] - rep.d[c - 1]);
        rep.measure = std::max(rep.measure, std::abs(dF) / std::pow(rep.d[c], n + 0.5));
    }
    // Straight-line fit xi = xi_0 + s d; xi_0 estimates the limit d -> 0.
    double sx = 0.0;
    double sy = 0.0;
    double sxx = 0.0;
    double sxy = 0.0;
    for (int i = 0; i < m; ++i) {
        const auto c = static_cast<size_t>(i);
        sx += rep.d[c];
        sy += rep.xi[c];
        sxx += rep.d[c] * rep.d[c];
        sxy += rep.d[c] * rep.xi[c];
    }
    const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    rep.xi_limit = (sy - slope * sx) / m;
    return rep;
}

} // namespace sklern
