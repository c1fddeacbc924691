#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "sklern/expansion.hpp"
#include "sklern/geometry.hpp"
#include "sklern/radial.hpp"
#include "sklern/series.hpp"
#include "sklern/symfun.hpp"

using namespace sklern;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

class Report {
public:
    void run(int id, const std::string& title, double budget_s, const std::function<Outcome()>& body)
    {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = body();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool ok = o.pass && secs < budget_s;
        all_ = all_ && ok;
        std::printf("criterion %2d %-28s %s  %s; %.2f s (budget %.0f s)\n", id, title.c_str(), ok ? "PASS" : "FAIL",
                    o.detail.c_str(), secs, budget_s);
        std::fflush(stdout);
    }
    [[nodiscard]] bool all() const { return all_; }

private:
    bool all_ = true;
};

std::string fmt(const char* f, double a)
{
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

double cell_at(const RadialSolution& sol, int j)
{
    return sol.r[static_cast<size_t>(j + 1)] - sol.r[static_cast<size_t>(j)];
}

BoundaryData equal_kappa(int n, int k, double kappa)
{
    return {n, k, std::vector<double>(static_cast<size_t>(n - 1), kappa)};
}

/// Converged annulus (1,4) runs shared by criteria 6 to 9.
struct AnnulusRuns {
    static constexpr int J = 16000;
    std::vector<std::pair<int, int>> pairs{{3, 2}, {4, 2}, {4, 3}};
    std::vector<RadialSolution> sols;
    RadialSolution fine32;
    RadialSolution control;

    void ensure()
    {
        if (!sols.empty()) {
            return;
        }
        for (const auto& [n, k] : pairs) {
            sols.push_back(solve_annulus(RadialProblem{n, k, Annulus{1.0, 4.0}, J}));
        }
        fine32 = solve_annulus(RadialProblem{3, 2, Annulus{1.0, 4.0}, 2 * J});
        control = solve_annulus(RadialProblem{3, 1, Annulus{1.0, 4.0}, J});
    }
};

double max_diff(const GradedSeries& a, const GradedSeries& b)
{
    double m = 0.0;
    for (int p = 0; p <= std::min(a.order(), b.order()); ++p) {
        for (int q = 0; q <= std::max(a.log_degree(p), b.log_degree(p)); ++q) {
            m = std::max(m, std::abs(a.coeff(p, q) - b.coeff(p, q)));
        }
    }
    return m;
}

GradedSeries random_series(std::mt19937_64& rng, int order, int maxlog, int pmin)
{
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    GradedSeries s(order);
    for (int p = pmin; p <= order; ++p) {
        for (int q = 0; q <= maxlog; ++q) {
            s.set(p, q, u(rng));
        }
    }
    return s;
}

} // namespace

int main()
{
    Report rep;
    AnnulusRuns runs;

    rep.run(1, "ball exactness", 5.0, [] {
        double rel = 0.0;
        double res = 0.0;
        for (int n = 3; n <= 5; ++n) {
            for (int k = 1; k <= 3; ++k) {
                const double R = 1.0;
                const RadialSolution sol = solve_ball(RadialProblem{n, k, Ball{R}, 4000});
                for (int j = 0; j < sol.size(); ++j) {
                    const double r = sol.r[static_cast<size_t>(j)];
                    const double exact = 2.0 * R / ((R - r) * (R + r));
                    const double got = std::pow(sol.u[static_cast<size_t>(j)], 2.0 / (n - 2));
                    rel = std::max(rel, std::abs(got / exact - 1.0));
                }
                res = std::max(res, sol.max_residual);
            }
        }
        return Outcome{rel <= 1e-6 && res <= 1e-10, fmt("sup rel err %.2e", rel) + fmt(", sigma_k residual %.2e", res)};
    });

    rep.run(2, "c_{1,0} law", 5.0, [] {
        std::mt19937_64 rng(2);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        double worst = 0.0;
        int cases = 0;
        for (int draw = 0; draw < 20; ++draw) {
            for (int n = 3; n <= 6; ++n) {
                std::vector<double> kappa(static_cast<size_t>(n - 1));
                double sum = 0.0;
                for (double& v : kappa) {
                    v = u(rng);
                    sum += v;
                }
                for (int k = 1; k <= n; ++k) {
                    const ExpansionTable t = expand(BoundaryData{n, k, kappa}, n, 0.0);
                    worst = std::max(worst, std::abs(t.coeff(1, 0) - sum / (2.0 * (n - 1))));
                    ++cases;
                }
            }
        }
        return Outcome{worst <= 1e-12, fmt("max err %.2e over ", worst) + std::to_string(cases) + " tables"};
    });

    rep.run(3, "ball expansion oracle", 5.0, [] {
        // Errors on R^p c_{p,q}, which is invariant under dilation of the ball; raw errors are reported too.
        double worst = 0.0;
        double raw = 0.0;
        double cn1 = 0.0;
        for (double R : {0.7, 1.0, 2.5}) {
            for (int n = 3; n <= 6; ++n) {
                for (int k = 1; k <= n; ++k) {
                    auto note = [&](int p, double err) {
                        raw = std::max(raw, err);
                        worst = std::max(worst, err * std::pow(R, p));
                    };
                    const ExpansionTable t = expand(equal_kappa(n, k, 1.0 / R), 2 * n, 0.0);
                    for (int p = 1; p < n; ++p) {
                        note(p, std::abs(t.coeff(p, 0) - 1.0 / (p * std::pow(2.0 * R, p))));
                    }
                    // c_{n,0} is free; with the oracle value the table must close.
                    const double mu = 1.0 / (n * std::pow(2.0 * R, n));
                    const ExpansionTable full = expand(equal_kappa(n, k, 1.0 / R), 2 * n, mu);
                    for (int p = 1; p <= 2 * n; ++p) {
                        note(p, std::abs(full.coeff(p, 0) - 1.0 / (p * std::pow(2.0 * R, p))));
                        for (int q = 1; q <= std::max(t.V.log_degree(p), full.V.log_degree(p)); ++q) {
                            note(p, std::max(std::abs(t.coeff(p, q)), std::abs(full.coeff(p, q))));
                        }
                    }
                    cn1 = std::max(cn1, std::abs(t.c_n1));
                }
            }
        }
        return Outcome{worst <= 1e-10 && cn1 <= 1e-10, fmt("max scaled coefficient err %.2e", worst) +
                                                           fmt(" (raw %.2e)", raw) + fmt(", max |c_n1| %.2e", cn1)};
    });

    rep.run(4, "mu freedom", 5.0, [] {
        std::mt19937_64 rng(4);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        int mismatches = 0;
        int compared = 0;
        for (int n = 3; n <= 5; ++n) {
            for (int k = 1; k <= n; ++k) {
                std::vector<double> kappa(static_cast<size_t>(n - 1));
                for (double& v : kappa) {
                    v = u(rng);
                }
                const BoundaryData bd{n, k, kappa};
                const ExpansionTable base = expand(bd, 2 * n, 0.0);
                for (double mu : {-1.0, 1.0}) {
                    const ExpansionTable t = expand(bd, 2 * n, mu);
                    for (int p = 0; p < n; ++p) {
                        for (int q = 0; q <= std::max(t.V.log_degree(p), base.V.log_degree(p)); ++q) {
                            mismatches += t.coeff(p, q) != base.coeff(p, q);
                            ++compared;
                        }
                    }
                    mismatches += t.c_n1 != base.c_n1;
                    ++compared;
                }
            }
        }
        return Outcome{mismatches == 0, std::to_string(mismatches) + " of " + std::to_string(compared) + " coefficients differ"};
    });

    rep.run(5, "barrier signs", 5.0, [] {
        bool ok = true;
        double worst_plus = -HUGE_VAL;
        double worst_minus = HUGE_VAL;
        int checked = 0;
        for (double R : {1.0, 2.0}) {
            for (int n = 3; n <= 5; ++n) {
                for (int k = 1; k <= n; ++k) {
                    const BoundaryData bd = equal_kappa(n, k, 1.0 / R);
                    const ExpansionTable t = expand(bd, n, 0.0);
                    BarrierSpec spec;
                    spec.beta = 1.0;
                    spec.theta = n + 0.5;
                    spec.delta = 0.05 * R;
                    spec.samples = 256;
                    const BarrierReport b = barrier_check(bd, t, spec);
                    ok = ok && b.plus_negative && b.minus_positive && spec.delta <= b.empirical_delta1 &&
                         spec.beta * std::pow(spec.delta, n) <= 1.0 && b.samples >= 200;
                    worst_plus = std::max(worst_plus, b.max_G_plus);
                    worst_minus = std::min(worst_minus, b.min_G_minus);
                    ++checked;
                }
            }
        }
        return Outcome{ok, std::to_string(checked) + " tables, 256 radii each; max G+ " + fmt("%.2e", worst_plus) +
                               fmt(", min G- %.2e", worst_minus)};
    });

    rep.run(6, "corner reproduction", 60.0, [&] {
        runs.ensure();
        const RadialSolution& s = runs.sols.front();
        if (!s.corner || !s.corner->present || !runs.fine32.corner || !runs.fine32.corner->present) {
            return Outcome{false, "corner not detected"};
        }
        const double h = cell_at(s, s.corner->index);
        const double loc = std::abs(s.corner->r_star - 2.0);
        const double rich = std::abs(s.corner->jump - runs.fine32.corner->jump);
        const oracle::AnnulusFirstIntegral exact(3, 2, 1.0, 4.0);
        const bool control_smooth = runs.control.corner && !runs.control.corner->present;
        const bool ok = s.converged && loc <= 2.0 * h && s.corner->jump >= 10.0 * rich && control_smooth;
        return Outcome{ok, fmt("|r*-2| %.2e", loc) + fmt(" (2h %.2e)", 2.0 * h) + fmt(", jump %.6f", s.corner->jump) +
                               fmt(" (first integral %.6f)", exact.jump()) + fmt(", Richardson %.2e", rich) +
                               (control_smooth ? ", k=1 smooth" : ", k=1 shows a jump")};
    });

    rep.run(7, "Hoelder exponent", 90.0, [&] {
        runs.ensure();
        bool ok = true;
        std::string detail;
        for (size_t i = 0; i < runs.pairs.size(); ++i) {
            const auto& c = runs.sols[i].corner;
            const double target = 1.0 / runs.pairs[i].second;
            if (!c || !c->present) {
                ok = false;
                continue;
            }
            ok = ok && std::abs(c->holder_left - target) <= 0.15 && std::abs(c->holder_right - target) <= 0.15;
            char buf[96];
            std::snprintf(buf, sizeof buf, "%s(%d,%d) %.3f/%.3f", detail.empty() ? "" : ", ", runs.pairs[i].first,
                          runs.pairs[i].second, c->holder_left, c->holder_right);
            detail += buf;
        }
        return Outcome{ok, detail};
    });

    rep.run(8, "minimal sphere", 5.0, [&] {
        runs.ensure();
        bool ok = true;
        double worst = 0.0;
        for (const RadialSolution& s : runs.sols) {
            const MinimalSphere ms = minimal_sphere(s);
            const double err = std::abs(ms.r_min - 2.0);
            worst = std::max(worst, err / cell_at(s, ms.index));
            ok = ok && !ms.detached && err <= 2.0 * cell_at(s, ms.index);
        }
        const MinimalSphere ball = minimal_sphere(solve_ball(RadialProblem{3, 2, Ball{1.0}, 4000}));
        ok = ok && ball.detached;
        return Outcome{ok, fmt("max |r_min - sqrt(ab)| %.2f cells", worst) +
                               (ball.detached ? ", ball detached" : ", ball not detached")};
    });

    rep.run(9, "obstruction inequality", 5.0, [&] {
        runs.ensure();
        double lowest = HUGE_VAL;
        int sampled = 0;
        for (const RadialSolution& s : runs.sols) {
            const int js = s.corner->index;
            for (int j = 1; j + 1 < s.size(); j += 7) {
                if (std::abs(j - js) <= 2) {
                    continue;
                }
                lowest = std::min(lowest, obstruction_residual(s, s.r[static_cast<size_t>(j)]));
                ++sampled;
            }
        }
        return Outcome{lowest >= -1e-6, fmt("min %.3e over ", lowest) + std::to_string(sampled) + " spheres"};
    });

    rep.run(10, "property suites", 20.0, [] {
        std::mt19937_64 rng(10);
        std::normal_distribution<double> g;
        std::uniform_int_distribution<int> dim(3, 8);
        double sym = 0.0;
        for (int s = 0; s < 1000; ++s) {
            const int n = dim(rng);
            std::vector<double> x(static_cast<size_t>(n));
            double scale = 1.0;
            for (double& v : x) {
                v = g(rng);
                scale = std::max(scale, std::abs(v));
            }
            for (int k = 1; k <= n; ++k) {
                const double ref = oracle::brute_sigma(k, x);
                sym = std::max(sym, std::abs(sigma(k, EigenVector(x)) - ref) / (std::pow(scale, k) * binom(n, k)));
            }
        }

        std::uniform_int_distribution<int> dim7(3, 7);
        double trace = 0.0;
        for (int s = 0; s < 10000; ++s) {
            const int n = dim7(rng);
            const Eigen::MatrixXd M = oracle::gamma2_matrix(rng, n);
            std::vector<double> entries(M.data(), M.data() + n * n);
            Eigen::VectorXd m(n);
            for (int i = 0; i < n; ++i) {
                m(i) = g(rng);
            }
            m.normalize();
            trace = std::min(trace, tangential_trace(SymMatrix(n, entries), std::span<const double>(m.data(), static_cast<size_t>(n))));
        }

        double ring = 0.0;
        double hom = 0.0;
        for (int s = 0; s < 20; ++s) {
            const int order = 4 + s % 9;
            const GradedSeries a = random_series(rng, order, 2, 0);
            const GradedSeries b = random_series(rng, order, 1, 0);
            const GradedSeries c = random_series(rng, order, 2, 0);
            ring = std::max({ring, max_diff(a + b, b + a), max_diff((a + b) + c, a + (b + c)), max_diff(a * b, b * a),
                             max_diff(a * (b + c), a * b + a * c), max_diff((a * b) * c, a * (b * c))});
            const GradedSeries x = random_series(rng, order, 2, 1);
            const GradedSeries y = random_series(rng, order, 1, 1);
            hom = std::max(hom, max_diff(exp_series(x + y), exp_series(x) * exp_series(y)));
        }

        std::uniform_real_distribution<double> shift(0.0, 0.5);
        AnnulusOptions plain;
        plain.compute_corner = false;
        int violations = 0;
        for (int s = 0; s < 10; ++s) {
            AnnulusOptions lo = plain;
            lo.shift_inner = shift(rng) - 0.25;
            lo.shift_outer = shift(rng) - 0.25;
            AnnulusOptions hi = lo;
            hi.shift_inner += shift(rng);
            hi.shift_outer += shift(rng);
            const RadialProblem prob{3, 2, Annulus{1.0, 4.0}, 1000};
            const RadialSolution a = solve_annulus(prob, lo);
            const RadialSolution b = solve_annulus(prob, hi);
            for (int j = 0; j < a.size(); ++j) {
                violations += b.w[static_cast<size_t>(j)] < a.w[static_cast<size_t>(j)] - 1e-12;
            }
        }
        const bool ok = sym <= 1e-12 && trace >= -1e-10 && ring <= 1e-12 && hom <= 1e-12 && violations == 0;
        return Outcome{ok, fmt("symfun %.1e", sym) + fmt(", trace min %.1e", trace) + fmt(", ring %.1e", ring) +
                               fmt(", exp %.1e", hom) + ", monotonicity violations " + std::to_string(violations)};
    });

    std::printf("%s\n", rep.all() ? "ALL PASS" : "SOME CRITERIA FAILED");
    return rep.all() ? 0 : 1;
}
