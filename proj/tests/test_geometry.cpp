#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include "sklern/geometry.hpp"

using namespace sklern;

namespace {

/// Tabulates a synthetic radial profile w(r) on a uniform grid.
RadialSolution synthetic(int n, const Domain& dom, double lo, double hi, int J, const std::function<double(double)>& w)
{
    RadialSolution sol;
    sol.n = n;
    sol.k = 2;
    sol.domain = dom;
    for (int j = 0; j <= J; ++j) {
        const double r = lo + (hi - lo) * j / J;
        sol.r.push_back(r);
        sol.w.push_back(w(r));
    }
    sol.lamT.assign(sol.r.size(), 0.0);
    sol.lamR.assign(sol.r.size(), 0.0);
    sol.residual.assign(sol.r.size(), 0.0);
    finalize_fields(sol);
    return sol;
}

double cell_at(const RadialSolution& sol, int j)
{
    return sol.r[static_cast<size_t>(j + 1)] - sol.r[static_cast<size_t>(j)];
}

} // namespace

TEST(Dist, Cases)
{
    const DistResult b = dist(Ball{1.0}, 0.25);
    EXPECT_DOUBLE_EQ(b.d, 0.75);
    EXPECT_EQ(b.nearest, Nearest::Boundary);
    const DistResult a = dist(Annulus{1.0, 4.0}, 2.0);
    EXPECT_DOUBLE_EQ(a.d, 1.0);
    EXPECT_EQ(a.nearest, Nearest::Inner);
    EXPECT_EQ(dist(Annulus{1.0, 4.0}, 3.5).nearest, Nearest::Outer);
    const DistResult t = dist(Annulus{1.0, 4.0}, 2.5);
    EXPECT_DOUBLE_EQ(t.d, 1.5);
    EXPECT_EQ(t.nearest, Nearest::Tie);
    EXPECT_THROW(dist(Ball{1.0}, 1.5), ArgumentError);
    EXPECT_THROW(dist(Annulus{1.0, 4.0}, 0.5), ArgumentError);
}

TEST(MeanCurvature, FlatFactor)
{
    EXPECT_DOUBLE_EQ(mean_curvature_conformal(1.0, 0.0, 2.0 / 0.7, 3), 2.0 / 0.7);
    EXPECT_THROW(mean_curvature_conformal(0.0, 0.0, 1.0, 3), ArgumentError);
}

TEST(MeanCurvature, HyperbolicSpheresApproachHorospheres)
{
    for (int n = 3; n <= 5; ++n) {
        const double R = 1.0;
        double prev = HUGE_VAL;
        for (double d : {1e-2, 1e-3, 1e-4}) {
            const double r = R - d;
            const double q = (R - r) * (R + r);
            const double u = std::pow(2.0 * R / q, 0.5 * (n - 2));
            const double dr_lnu = 0.5 * (n - 2) * 2.0 * r / q;
            const double Hu = mean_curvature_conformal(u, -dr_lnu, (n - 1) / r, n);
            EXPECT_NEAR(Hu, (n - 1) * (R * R + r * r) / (2.0 * R * r), 1e-12);
            const double gap = std::abs(Hu - (n - 1));
            EXPECT_LT(gap, prev);
            prev = gap;
        }
        EXPECT_LT(prev, 1e-6);
    }
}

TEST(MeanCurvature, FirstVariationOfArea)
{
    const double R = 1.0;
    for (int n = 3; n <= 5; ++n) {
        auto w = [&](double r) { return std::log(2.0 * R / ((R - r) * (R + r))) + 0.2 * std::sin(3.0 * r); };
        auto w1 = [&](double r) { return 2.0 * r / ((R - r) * (R + r)) + 0.6 * std::cos(3.0 * r); };
        for (double r : {0.2, 0.5, 0.8}) {
            auto area = [&](double s) { return sphere_area_g(s, std::exp(0.5 * (n - 2) * w(s)), n); };
            const double u = std::exp(0.5 * (n - 2) * w(r));
            const double Hu = mean_curvature_conformal(u, -0.5 * (n - 2) * w1(r), (n - 1) / r, n);
            const double h = 1e-4;
            const double fd = (-area(r + 2 * h) + 8 * area(r + h) - 8 * area(r - h) + area(r - 2 * h)) / (12 * h);
            const double fv = Hu * std::exp(w(r)) * area(r);
            EXPECT_NEAR(fd, fv, 1e-8 * std::abs(fv));
        }
    }
}

TEST(Area, UnitSphere)
{
    EXPECT_NEAR(sphere_area_g(1.0, 1.0, 3), 4.0 * std::numbers::pi, 1e-14);
    EXPECT_NEAR(unit_sphere_area(4), 2.0 * std::numbers::pi * std::numbers::pi, 1e-13);
    EXPECT_THROW(sphere_area_g(0.0, 1.0, 3), ArgumentError);
    EXPECT_THROW(sphere_area_g(1.0, -1.0, 3), ArgumentError);
}

TEST(Area, Homogeneity)
{
    for (int n = 3; n <= 6; ++n) {
        const double c = 1.7;
        const double base = sphere_area_g(0.6, 0.9, n);
        EXPECT_NEAR(sphere_area_g(0.6, c * 0.9, n), std::pow(c, 2.0 * (n - 1) / (n - 2)) * base, 1e-13 * base);
    }
}

TEST(Area, HyperbolicBallIsMonotone)
{
    const RadialSolution sol = exact_ball(RadialProblem{3, 2, Ball{1.0}, 2000});
    double prev = 0.0;
    for (int j = 0; j < sol.size(); ++j) {
        const double a = sphere_area_g(sol.r[static_cast<size_t>(j)], sol.u[static_cast<size_t>(j)], 3);
        ASSERT_GT(a, prev);
        prev = a;
    }
    EXPECT_GT(prev, 1e3);
}

TEST(MinimalSphere, BallDetaches)
{
    const MinimalSphere ms = minimal_sphere(exact_ball(RadialProblem{3, 2, Ball{1.0}, 2000}));
    EXPECT_TRUE(ms.detached);
    EXPECT_EQ(ms.index, 0);
}

TEST(MinimalSphere, EuclideanSpheresShrinkInward)
{
    const RadialSolution flat = synthetic(3, Annulus{1.0, 4.0}, 1.001, 3.999, 1000, [](double) { return 0.0; });
    const MinimalSphere ms = minimal_sphere(flat);
    EXPECT_TRUE(ms.detached);
    EXPECT_DOUBLE_EQ(ms.r_min, flat.r.front());
}

TEST(MinimalSphere, RefinesBetweenNodes)
{
    // (n-1)(ln r + w) with w = (ln r - ln 2)^2 - ln r is minimal at r = 2.
    const RadialSolution s = synthetic(3, Annulus{1.0, 4.0}, 1.01, 3.99, 301,
                                       [](double r) { return std::pow(std::log(r / 2.0), 2) - std::log(r); });
    const MinimalSphere ms = minimal_sphere(s);
    EXPECT_FALSE(ms.detached);
    EXPECT_TRUE(ms.unimodal);
    EXPECT_NEAR(ms.r_min, 2.0, 0.1 * cell_at(s, ms.index));
}

TEST(MinimalSphere, CoincidesWithCorner)
{
    for (int n : {3, 4}) {
        for (int k : {2, 3}) {
            for (double b : {2.0, 4.0, 9.0}) {
                const RadialSolution sol = solve_annulus(RadialProblem{n, k, Annulus{1.0, b}, 4000});
                const MinimalSphere ms = minimal_sphere(sol);
                EXPECT_FALSE(ms.detached);
                EXPECT_LE(std::abs(ms.r_min - std::sqrt(b)), 2.0 * cell_at(sol, ms.index))
                    << n << "," << k << "," << b;
            }
        }
    }
}

TEST(Obstruction, HyperbolicBall)
{
    for (int n = 3; n <= 5; ++n) {
        const RadialSolution sol = exact_ball(RadialProblem{n, 2, Ball{1.0}, 4000});
        for (double r : {0.01, 0.2, 0.5, 0.9, 0.99}) {
            EXPECT_GE(obstruction_residual(sol, r), -1e-10) << n << " r=" << r;
        }
    }
}

TEST(Obstruction, AnnulusBothSides)
{
    const RadialSolution sol = solve_annulus(RadialProblem{3, 2, Annulus{1.0, 4.0}, 4000});
    ASSERT_TRUE(sol.corner && sol.corner->present);
    const double rs = sol.corner->r_star;
    const double gap = 3.0 * cell_at(sol, sol.corner->index);
    double worst = HUGE_VAL;
    for (int i = 0; i < 20; ++i) {
        const double s = static_cast<double>(i) / 19.0;
        worst = std::min(worst, obstruction_residual(sol, sol.r.front() + s * (rs - gap - sol.r.front())));
        worst = std::min(worst, obstruction_residual(sol, rs + gap + s * (sol.r.back() - rs - gap)));
    }
    EXPECT_GE(worst, -1e-6);
    EXPECT_THROW(obstruction_residual(sol, rs), ArgumentError);
}

TEST(Obstruction, FlatAndCylindricalProfiles)
{
    const RadialSolution flat = synthetic(3, Annulus{1.0, 4.0}, 1.01, 3.99, 2000, [](double) { return 0.0; });
    EXPECT_NEAR(obstruction_residual(flat, 2.0), 0.0, 1e-12);
    // u^{2/(n-2)} = 1/r: coordinate spheres are minimal in the cylinder metric.
    for (int n = 3; n <= 5; ++n) {
        const RadialSolution cyl = synthetic(n, Annulus{1.0, 4.0}, 1.01, 3.99, 2000, [](double r) { return -std::log(r); });
        for (double r : {1.5, 2.0, 3.0}) {
            EXPECT_NEAR(obstruction_residual(cyl, r), -std::pow((n - 1) / r, 2), 1e-8);
        }
    }
}

TEST(Barrier, BallSigns)
{
    const BoundaryData bd{3, 2, {1.0, 1.0}};
    const ExpansionTable table = expand(bd, 3, 0.0);
    const BarrierReport rep = barrier_check(bd, table, BarrierSpec{1.0, 3.5, 0.05, 256});
    EXPECT_TRUE(rep.plus_negative);
    EXPECT_TRUE(rep.minus_positive);
    EXPECT_LT(rep.max_G_plus, 0.0);
    EXPECT_GT(rep.min_G_minus, 0.0);
    EXPECT_GE(rep.empirical_delta1, 0.05);
}

TEST(Barrier, ResidualRate)
{
    for (int n = 3; n <= 5; ++n) {
        const BoundaryData bd{n, 2, std::vector<double>(static_cast<size_t>(n - 1), 1.0)};
        const ExpansionTable table = expand(bd, n, 0.0);
        const BarrierReport rep = barrier_check(bd, table, BarrierSpec{0.0, 0.0, 0.05, 200});
        EXPECT_GE(rep.residual_slope, n + 0.3) << n;
    }
}

TEST(Barrier, SignsFailForWideCollar)
{
    const BoundaryData bd{3, 2, {1.0, 1.0}};
    const ExpansionTable table = expand(bd, 3, 0.0);
    const BarrierReport rep = barrier_check(bd, table, BarrierSpec{1.0, 3.5, 0.95, 256});
    EXPECT_FALSE(rep.plus_negative && rep.minus_positive);
    EXPECT_LT(rep.empirical_delta1, 0.95);
}

TEST(Barrier, Preconditions)
{
    const BoundaryData bd{3, 2, {1.0, 1.0}};
    EXPECT_THROW(barrier_check(bd, expand(bd, 2, 0.0), BarrierSpec{}), ArgumentError);
    EXPECT_THROW(barrier_check(bd, expand(bd, 3, 0.5), BarrierSpec{}), ArgumentError);
    EXPECT_THROW(barrier_check(bd, expand(bd, 3, 0.0), BarrierSpec{1.0, 4.0}), ArgumentError);
    EXPECT_THROW(barrier_check(bd, expand(bd, 3, 0.0), BarrierSpec{2.0, 0.0, 0.9}), ArgumentError);
}
