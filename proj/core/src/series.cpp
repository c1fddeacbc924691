#include "sklern/series.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace sklern {

GradedSeries::GradedSeries(int order)
{
    if (order < 0) {
        throw ArgumentError("series order must be nonnegative");
    }
    c_.assign(static_cast<size_t>(order) + 1, {});
}

GradedSeries GradedSeries::constant(double c, int order)
{
    GradedSeries s(order);
    s.set(0, 0, c);
    return s;
}

GradedSeries GradedSeries::monomial(int p, int q, double c, int order)
{
    GradedSeries s(order);
    if (p <= order) {
        s.set(p, q, c);
    }
    return s;
}

int GradedSeries::log_degree(int p) const
{
    if (p < 0 || p > order()) {
        return 0;
    }
    const auto& row = c_[static_cast<size_t>(p)];
    return row.empty() ? 0 : static_cast<int>(row.size()) - 1;
}

double GradedSeries::coeff(int p, int q) const
{
    if (p > order()) {
        throw ArgumentError("coefficient at p = " + std::to_string(p) + " lies beyond the truncation order " +
                            std::to_string(order()));
    }
    if (p < 0 || q < 0) {
        throw ArgumentError("negative coefficient index");
    }
    const auto& row = c_[static_cast<size_t>(p)];
    return static_cast<size_t>(q) < row.size() ? row[static_cast<size_t>(q)] : 0.0;
}

void GradedSeries::set(int p, int q, double v)
{
    if (p < 0 || q < 0 || p > order()) {
        throw ArgumentError("set: index outside the series");
    }
    auto& row = c_[static_cast<size_t>(p)];
    if (static_cast<size_t>(q) >= row.size()) {
        if (v == 0.0) {
            return;
        }
        row.resize(static_cast<size_t>(q) + 1, 0.0);
    }
    row[static_cast<size_t>(q)] = v;
    trim(p);
}

void GradedSeries::trim(int p)
{
    auto& row = c_[static_cast<size_t>(p)];
    while (!row.empty() && row.back() == 0.0) {
        row.pop_back();
    }
}

GradedSeries GradedSeries::truncated(int order) const
{
    GradedSeries s(std::min(order, this->order()));
    for (int p = 0; p <= s.order(); ++p) {
        s.c_[static_cast<size_t>(p)] = c_[static_cast<size_t>(p)];
    }
    return s;
}

GradedSeries GradedSeries::theta() const
{
    GradedSeries s(order());
    for (int p = 0; p <= order(); ++p) {
        const auto& row = c_[static_cast<size_t>(p)];
        auto& out = s.c_[static_cast<size_t>(p)];
        out.assign(row.size(), 0.0);
        for (size_t q = 0; q < row.size(); ++q) {
            out[q] += p * row[q];
            if (q > 0) {
                out[q - 1] += static_cast<double>(q) * row[q];
            }
        }
        s.trim(p);
    }
    return s;
}

bool GradedSeries::vanishes_through(int l, double tol) const
{
    return max_abs_through(l) <= tol;
}

double GradedSeries::max_abs_through(int l) const
{
    double m = 0.0;
    for (int p = 0; p <= std::min(l, order()); ++p) {
        for (double v : c_[static_cast<size_t>(p)]) {
            m = std::max(m, std::abs(v));
        }
    }
    return m;
}

double GradedSeries::operator()(double d) const
{
    if (!(d > 0.0)) {
        throw ArgumentError("series evaluation needs d > 0");
    }
    const double L = std::log(d);
    double total = 0.0;
    double dp = 1.0;
    for (int p = 0; p <= order(); ++p) {
        const auto& row = c_[static_cast<size_t>(p)];
        double inner = 0.0;
        for (size_t q = row.size(); q-- > 0;) {
            inner = inner * L + row[q];
        }
        total += inner * dp;
        dp *= d;
    }
    return total;
}

GradedSeries::Jet GradedSeries::jet(double d) const
{
    const GradedSeries t1 = theta();
    const GradedSeries t2 = t1.theta();
    const double v = (*this)(d);
    const double a1 = t1(d);
    const double a2 = t2(d);
    return {v, a1 / d, (a2 - a1) / (d * d)};
}

GradedSeries& GradedSeries::operator+=(const GradedSeries& o)
{
    if (o.order() < order()) {
        c_.resize(static_cast<size_t>(o.order()) + 1);
    }
    for (int p = 0; p <= order(); ++p) {
        auto& row = c_[static_cast<size_t>(p)];
        const auto& orow = o.c_[static_cast<size_t>(p)];
        if (orow.size() > row.size()) {
            row.resize(orow.size(), 0.0);
        }
        for (size_t q = 0; q < orow.size(); ++q) {
            row[q] += orow[q];
        }
        trim(p);
    }
    return *this;
}

GradedSeries& GradedSeries::operator-=(const GradedSeries& o)
{
    return *this += scale(o, -1.0);
}

GradedSeries& GradedSeries::operator*=(double s)
{
    for (int p = 0; p <= order(); ++p) {
        for (double& v : c_[static_cast<size_t>(p)]) {
            v *= s;
        }
        trim(p);
    }
    return *this;
}

GradedSeries add(const GradedSeries& a, const GradedSeries& b)
{
    GradedSeries s = a;
    s += b;
    return s;
}

GradedSeries sub(const GradedSeries& a, const GradedSeries& b)
{
    GradedSeries s = a;
    s -= b;
    return s;
}

GradedSeries scale(const GradedSeries& a, double s)
{
    GradedSeries r = a;
    r *= s;
    return r;
}

GradedSeries mul(const GradedSeries& a, const GradedSeries& b)
{
    const int M = std::min(a.order(), b.order());
    GradedSeries s(M);
    for (int p1 = 0; p1 <= M; ++p1) {
        const int n1 = a.log_degree(p1);
        for (int p2 = 0; p1 + p2 <= M; ++p2) {
            const int n2 = b.log_degree(p2);
            for (int q1 = 0; q1 <= n1; ++q1) {
                const double x = a.coeff(p1, q1);
                if (x == 0.0) {
                    continue;
                }
                for (int q2 = 0; q2 <= n2; ++q2) {
                    const double y = b.coeff(p2, q2);
                    if (y != 0.0) {
                        s.set(p1 + p2, q1 + q2, s.coeff(p1 + p2, q1 + q2) + x * y);
                    }
                }
            }
        }
    }
    return s;
}

GradedSeries exp_series(const GradedSeries& v)
{
    if (v.log_degree(0) > 0 || v.coeff(0, 0) != 0.0) {
        throw ArgumentError("exp_series: argument must have zero constant term");
    }
    const int M = v.order();
    GradedSeries result = GradedSeries::constant(1.0, M);
    GradedSeries term = GradedSeries::constant(1.0, M);
    for (int j = 1; j <= M; ++j) {
        term = scale(mul(term, v), 1.0 / j);
        result += term;
    }
    return result;
}

GradedSeries geometric_expand(double kappa, int order)
{
    GradedSeries s(order);
    double kp = 1.0;
    for (int p = 1; p <= order; ++p) {
        kp *= kappa;
        s.set(p, 0, kp);
    }
    return s;
}

double extract_coeff(const GradedSeries& a, int p, int q)
{
    return a.coeff(p, q);
}

GradedSeries operator+(const GradedSeries& a, const GradedSeries& b) { return add(a, b); }
GradedSeries operator-(const GradedSeries& a, const GradedSeries& b) { return sub(a, b); }
GradedSeries operator*(const GradedSeries& a, const GradedSeries& b) { return mul(a, b); }
GradedSeries operator*(const GradedSeries& a, double s) { return scale(a, s); }
GradedSeries operator*(double s, const GradedSeries& a) { return scale(a, s); }

} // namespace sklern
