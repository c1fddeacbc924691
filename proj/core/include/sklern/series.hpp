#pragma once

#include <vector>

#include "sklern/errors.hpp"

namespace sklern {

/// Truncated element of R[[d]][ln d]: sum_{p<=M} sum_q c[p][q] d^p (ln d)^q.
/// Log degree per order is unbounded; trailing zero log slots are not stored.
class GradedSeries {
public:
    explicit GradedSeries(int order);

    static GradedSeries constant(double c, int order);
    static GradedSeries monomial(int p, int q, double c, int order);

    [[nodiscard]] int order() const { return static_cast<int>(c_.size()) - 1; }
    /// Highest stored q at order p (0 when only the plain power or nothing is present).
    [[nodiscard]] int log_degree(int p) const;
    [[nodiscard]] double coeff(int p, int q) const;
    void set(int p, int q, double v);

    [[nodiscard]] GradedSeries truncated(int order) const;
    /// theta = d * d/dd, acting termwise: p d^p L^q + q d^p L^{q-1}.
    [[nodiscard]] GradedSeries theta() const;
    /// True when every stored coefficient with p <= l has magnitude <= tol.
    [[nodiscard]] bool vanishes_through(int l, double tol) const;
    [[nodiscard]] double max_abs_through(int l) const;

    struct Jet {
        double value;
        double d1;
        double d2;
    };
    /// Value and first two d-derivatives of the truncated sum at d > 0.
    [[nodiscard]] Jet jet(double d) const;
    [[nodiscard]] double operator()(double d) const;

    GradedSeries& operator+=(const GradedSeries& o);
    GradedSeries& operator-=(const GradedSeries& o);
    GradedSeries& operator*=(double s);

private:
    void trim(int p);
    std::vector<std::vector<double>> c_;
};

GradedSeries add(const GradedSeries& a, const GradedSeries& b);
GradedSeries sub(const GradedSeries& a, const GradedSeries& b);
GradedSeries mul(const GradedSeries& a, const GradedSeries& b);
GradedSeries scale(const GradedSeries& a, double s);
GradedSeries exp_series(const GradedSeries& v);
/// Series of kappa d / (1 - kappa d) = sum_{p>=1} kappa^p d^p through order M.
GradedSeries geometric_expand(double kappa, int order);
double extract_coeff(const GradedSeries& a, int p, int q);

GradedSeries operator+(const GradedSeries& a, const GradedSeries& b);
GradedSeries operator-(const GradedSeries& a, const GradedSeries& b);
GradedSeries operator*(const GradedSeries& a, const GradedSeries& b);
GradedSeries operator*(const GradedSeries& a, double s);
GradedSeries operator*(double s, const GradedSeries& a);

} // namespace sklern
