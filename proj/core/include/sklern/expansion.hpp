#pragma once

#include <span>
#include <string>
#include <vector>

#include "sklern/series.hpp"

namespace sklern {

/// Boundary data with covariantly constant principal curvatures kappa_1..kappa_{n-1}.
/// Sign convention: Hess d = diag(-kappa_i / (1 - kappa_i d), ..., 0); a ball of radius R has kappa_i = 1/R.
struct BoundaryData {
    int n = 3;
    int k = 1;
    std::vector<double> kappa;

    void validate() const;
    [[nodiscard]] bool umbilic() const;
    /// 2^{-(k-1)} binom(n-1, k-1): the factor in front of the linearized operator.
    [[nodiscard]] double linear_factor() const;
};

struct ExpansionOptions {
    /// N_m = highest q with |a_{m,q}| above this threshold.
    double log_threshold = 1e-11;
    /// Bound on |coefficients of G(W_M)| used to certify residual_order.
    double residual_tol = 1e-9;
};

/// Coefficients of V = W + ln d = ln(d u^{2/(n-2)}) = sum c[p][q] d^p (ln d)^q.
struct ExpansionTable {
    int n = 0;
    int k = 0;
    std::vector<double> kappa;
    double mu = 0.0;
    int order = 0;
    GradedSeries V{0};
    std::vector<int> log_degree;
    double c_n1 = 0.0;
    int residual_order = 0;
    double residual_max = 0.0;
    bool umbilic = true;

    [[nodiscard]] double coeff(int p, int q) const { return V.coeff(p, q); }
    [[nodiscard]] BoundaryData boundary() const { return {n, k, kappa}; }
};

/// Diagonal entries of -d^2 S(W) for W = -ln d + V: n-1 tangential entries then the normal entry.
std::vector<GradedSeries> neg_d2_S(const GradedSeries& V, const BoundaryData& bd);

/// sigma_k(lambda(-d^2 S(W))) - N_k d^{2k} e^{2kW}, with d^{2k} e^{2kW} = exp(2k V).
GradedSeries G_series(const GradedSeries& V, const BoundaryData& bd);

/// Solves the order-m coefficient system downward in q for m != n. a[q] = a_{m-1,m,q}.
std::vector<double> solve_order(int m, std::span<const double> a, const BoundaryData& bd);

ExpansionTable expand(const BoundaryData& bd, int order, double mu, const ExpansionOptions& opt = {});

/// Closed-form table of the ball of radius R: c_{p,0} = 1/(p (2R)^p). The table does not depend on k.
ExpansionTable ball_oracle(double R, int n, int order, int k = 1);

} // namespace sklern
