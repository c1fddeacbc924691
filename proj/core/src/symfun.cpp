#include "sklern/symfun.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <string>

namespace sklern {

namespace {

void check_k(int k, int n)
{
    if (k < 1 || k > n) {
        throw ArgumentError("k = " + std::to_string(k) + " outside 1.." + std::to_string(n));
    }
}

} // namespace

EigenVector::EigenVector(std::vector<double> values) : values_(std::move(values))
{
    if (values_.size() < 3) {
        throw ArgumentError("eigenvalue tuple needs n >= 3 entries");
    }
    for (double v : values_) {
        if (!std::isfinite(v)) {
            throw ArgumentError("eigenvalue tuple has a non-finite entry");
        }
    }
}

SymMatrix::SymMatrix(int n, std::vector<double> row_major) : n_(n), a_(std::move(row_major))
{
    if (n < 1 || a_.size() != static_cast<size_t>(n) * static_cast<size_t>(n)) {
        throw ArgumentError("SymMatrix: entry count does not match n*n");
    }
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if ((*this)(i, j) != (*this)(j, i)) {
                throw ArgumentError("SymMatrix: entries are not symmetric");
            }
        }
    }
}

SymMatrix SymMatrix::identity(int n)
{
    std::vector<double> d(static_cast<size_t>(n), 1.0);
    return diagonal(d);
}

SymMatrix SymMatrix::diagonal(const std::vector<double>& d)
{
    const int n = static_cast<int>(d.size());
    std::vector<double> a(static_cast<size_t>(n * n), 0.0);
    for (int i = 0; i < n; ++i) {
        a[static_cast<size_t>(i * n + i)] = d[static_cast<size_t>(i)];
    }
    return SymMatrix(n, std::move(a));
}

std::vector<double> SymMatrix::eigenvalues() const
{
    Eigen::MatrixXd m(n_, n_);
    for (int i = 0; i < n_; ++i) {
        for (int j = 0; j < n_; ++j) {
            m(i, j) = (*this)(i, j);
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
    const Eigen::VectorXd& ev = es.eigenvalues();
    return {ev.data(), ev.data() + ev.size()};
}

std::vector<double> elementary_symmetric(std::span<const double> x, int kmax)
{
    return elementary_symmetric<double>(x, kmax, 1.0);
}

double sigma(int k, const EigenVector& lam)
{
    check_k(k, lam.size());
    return elementary_symmetric(std::span<const double>(lam.values()), k)[static_cast<size_t>(k)];
}

double binom(int n, int k)
{
    if (k < 0 || k > n) {
        return 0.0;
    }
    double c = 1.0;
    for (int i = 1; i <= k; ++i) {
        c = c * (n - k + i) / i;
    }
    return std::round(c);
}

double n_k(int n, int k)
{
    check_k(k, n);
    return std::ldexp(binom(n, k), -k);
}

EigenVector sigma_grad(int k, const EigenVector& lam)
{
    const int n = lam.size();
    check_k(k, n);
    std::vector<double> out(static_cast<size_t>(n));
    std::vector<double> rest(static_cast<size_t>(n - 1));
    for (int i = 0; i < n; ++i) {
        int c = 0;
        for (int j = 0; j < n; ++j) {
            if (j != i) {
                rest[static_cast<size_t>(c++)] = lam[j];
            }
        }
        out[static_cast<size_t>(i)] = elementary_symmetric(std::span<const double>(rest), k - 1)[static_cast<size_t>(k - 1)];
    }
    return EigenVector(std::move(out));
}

bool in_gamma(int k, const EigenVector& lam, double tol)
{
    check_k(k, lam.size());
    if (!(tol >= 0.0)) {
        throw ArgumentError("in_gamma: tolerance must be nonnegative");
    }
    const auto e = elementary_symmetric(std::span<const double>(lam.values()), k);
    for (int j = 1; j <= k; ++j) {
        if (!(e[static_cast<size_t>(j)] > -tol)) {
            return false;
        }
    }
    return true;
}

double tangential_trace(const SymMatrix& M, std::span<const double> m)
{
    const int n = M.dim();
    if (static_cast<int>(m.size()) != n) {
        throw ArgumentError("tangential_trace: direction has wrong length");
    }
    double norm2 = 0.0;
    for (double v : m) {
        norm2 += v * v;
    }
    if (std::abs(std::sqrt(norm2) - 1.0) > 1e-12) {
        throw ArgumentError("tangential_trace: direction is not a unit vector");
    }
    double tr = 0.0;
    double mMm = 0.0;
    for (int i = 0; i < n; ++i) {
        tr += M(i, i);
        for (int j = 0; j < n; ++j) {
            mMm += m[static_cast<size_t>(i)] * M(i, j) * m[static_cast<size_t>(j)];
        }
    }
    return tr - mMm;
}

} // namespace sklern
