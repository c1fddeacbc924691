#include "sklern/expansion.hpp"

#include "sklern/symfun.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace sklern {

void BoundaryData::validate() const
{
    if (n < 3) {
        throw ArgumentError("dimension n must be at least 3");
    }
    if (k < 1 || k > n) {
        throw ArgumentError("k must lie in 1..n");
    }
    if (static_cast<int>(kappa.size()) != n - 1) {
        throw ArgumentError("expected " + std::to_string(n - 1) + " principal curvatures, got " +
                            std::to_string(kappa.size()));
    }
    for (double v : kappa) {
        if (!std::isfinite(v)) {
            throw ArgumentError("principal curvatures must be finite");
        }
    }
}

bool BoundaryData::umbilic() const
{
    return std::all_of(kappa.begin(), kappa.end(), [&](double v) { return v == kappa.front(); });
}

double BoundaryData::linear_factor() const
{
    return std::ldexp(binom(n - 1, k - 1), -(k - 1));
}

std::vector<GradedSeries> neg_d2_S(const GradedSeries& V, const BoundaryData& bd)
{
    bd.validate();
    const int M = V.order();
    const GradedSeries tV = V.theta();
    const GradedSeries ttV = tV.theta();
    const GradedSeries one_minus = GradedSeries::constant(1.0, M) - tV;
    const GradedSeries base = 0.5 * (one_minus * one_minus);

    std::vector<GradedSeries> diag;
    diag.reserve(static_cast<size_t>(bd.n));
    for (double kap : bd.kappa) {
        diag.push_back(base + one_minus * geometric_expand(kap, M));
    }
    diag.push_back(GradedSeries::constant(0.5, M) + ttV - 0.5 * (tV * tV));
    return diag;
}

GradedSeries G_series(const GradedSeries& V, const BoundaryData& bd)
{
    const auto diag = neg_d2_S(V, bd);
    const int M = V.order();
    const auto e = elementary_symmetric<GradedSeries>(std::span<const GradedSeries>(diag), bd.k,
                                                      GradedSeries::constant(1.0, M));
    return e[static_cast<size_t>(bd.k)] - n_k(bd.n, bd.k) * exp_series(2.0 * bd.k * V);
}

std::vector<double> solve_order(int m, std::span<const double> a, const BoundaryData& bd)
{
    if (m == bd.n) {
        throw ArgumentError("solve_order: m = n is the free order; use the order-n branch of expand");
    }
    if (m < 1) {
        throw ArgumentError("solve_order: order must be positive");
    }
    const double L = bd.linear_factor();
    const int N = static_cast<int>(a.size()) - 1;
    std::vector<double> c(static_cast<size_t>(N + 3), 0.0);
    const double pivot = static_cast<double>((m + 1) * (m - bd.n));
    for (int q = N; q >= 0; --q) {
        const double rhs = -a[static_cast<size_t>(q)] / L - (2.0 * m - bd.n + 1) * (q + 1) * c[static_cast<size_t>(q + 1)] -
                           static_cast<double>((q + 1) * (q + 2)) * c[static_cast<size_t>(q + 2)];
        c[static_cast<size_t>(q)] = rhs / pivot;
    }
    c.resize(static_cast<size_t>(std::max(N + 1, 0)));
    return c;
}

namespace {

int discover_log_degree(const GradedSeries& G, int m, double threshold)
{
    int N = -1;
    for (int q = 0; q <= G.log_degree(m); ++q) {
        if (std::abs(G.coeff(m, q)) > threshold) {
            N = q;
        }
    }
    return N;
}

void check_leading_cone(const GradedSeries& V, const BoundaryData& bd)
{
    const auto diag = neg_d2_S(V, bd);
    std::vector<double> lead;
    for (const auto& s : diag) {
        if (s.log_degree(0) > 0) {
            throw DegeneracyError("leading diagonal carries a logarithm");
        }
        lead.push_back(s.coeff(0, 0));
    }
    if (!in_gamma(bd.k, EigenVector(lead), 0.0)) {
        throw DegeneracyError("leading diagonal of -d^2 S(W) left Gamma_k");
    }
}

} // namespace

ExpansionTable expand(const BoundaryData& bd, int order, double mu, const ExpansionOptions& opt)
{
    bd.validate();
    if (order < 1) {
        throw ArgumentError("expansion order must be at least 1");
    }
    if (!std::isfinite(mu)) {
        throw ArgumentError("mu must be finite");
    }
    ExpansionTable t;
    t.n = bd.n;
    t.k = bd.k;
    t.kappa = bd.kappa;
    t.mu = mu;
    t.order = order;
    t.umbilic = bd.umbilic();
    t.V = GradedSeries(order);
    t.log_degree.assign(static_cast<size_t>(order) + 1, 0);

    check_leading_cone(t.V, bd);
    const double L = bd.linear_factor();

    for (int m = 1; m <= order; ++m) {
        const GradedSeries G = G_series(t.V, bd);
        const int N = discover_log_degree(G, m, opt.log_threshold);
        std::vector<double> a(static_cast<size_t>(std::max(N + 1, 0)));
        for (int q = 0; q <= N; ++q) {
            a[static_cast<size_t>(q)] = G.coeff(m, q);
        }
        std::vector<double> c;
        if (m != bd.n) {
            c = solve_order(m, a, bd);
        } else {
            // (n+1)(q+1) c_{n,q+1} + (q+1)(q+2) c_{n,q+2} = -a_{n,q} / L, solved downward; c_{n,0} = mu.
            c.assign(static_cast<size_t>(N + 4), 0.0);
            for (int q = N; q >= 0; --q) {
                const double rhs = -a[static_cast<size_t>(q)] / L -
                                   static_cast<double>((q + 1) * (q + 2)) * c[static_cast<size_t>(q + 2)];
                c[static_cast<size_t>(q + 1)] = rhs / ((bd.n + 1.0) * (q + 1));
            }
            c[0] = mu;
            t.c_n1 = c[1];
        }
        int deg = 0;
        for (size_t q = 0; q < c.size(); ++q) {
            t.V.set(m, static_cast<int>(q), c[q]);
            if (std::abs(c[q]) > opt.log_threshold) {
                deg = static_cast<int>(q);
            }
        }
        t.log_degree[static_cast<size_t>(m)] = deg;
    }

    const GradedSeries G = G_series(t.V, bd);
    t.residual_max = G.max_abs_through(order);
    t.residual_order = -1;
    for (int l = 0; l <= order; ++l) {
        if (G.max_abs_through(l) > opt.residual_tol) {
            break;
        }
        t.residual_order = l;
    }
    return t;
}

ExpansionTable ball_oracle(double R, int n, int order, int k)
{
    if (!(R > 0.0)) {
        throw ArgumentError("ball radius must be positive");
    }
    BoundaryData bd{n, k, std::vector<double>(static_cast<size_t>(std::max(n - 1, 0)), 1.0 / R)};
    bd.validate();
    ExpansionTable t;
    t.n = n;
    t.k = k;
    t.kappa = bd.kappa;
    t.order = order;
    t.V = GradedSeries(order);
    t.log_degree.assign(static_cast<size_t>(order) + 1, 0);
    for (int p = 1; p <= order; ++p) {
        t.V.set(p, 0, 1.0 / (p * std::pow(2.0 * R, p)));
    }
    t.mu = order >= n ? t.V.coeff(n, 0) : 0.0;
    t.residual_order = order;
    return t;
}

} // namespace sklern
