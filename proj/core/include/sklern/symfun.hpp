#pragma once

#include <span>
#include <vector>

#include "sklern/errors.hpp"

namespace sklern {

inline constexpr double kGammaTol = 1e-10;

/// Eigenvalue tuple (length >= 3, finite entries).
class EigenVector {
public:
    explicit EigenVector(std::vector<double> values);

    [[nodiscard]] int size() const { return static_cast<int>(values_.size()); }
    [[nodiscard]] double operator[](int i) const { return values_[static_cast<size_t>(i)]; }
    [[nodiscard]] const std::vector<double>& values() const { return values_; }

private:
    std::vector<double> values_;
};

/// Dense symmetric matrix; symmetry is checked exactly on construction.
class SymMatrix {
public:
    SymMatrix(int n, std::vector<double> row_major);
    static SymMatrix identity(int n);
    static SymMatrix diagonal(const std::vector<double>& d);

    [[nodiscard]] int dim() const { return n_; }
    [[nodiscard]] double operator()(int i, int j) const { return a_[static_cast<size_t>(i * n_ + j)]; }
    [[nodiscard]] std::vector<double> eigenvalues() const;

private:
    int n_;
    std::vector<double> a_;
};

/// e_0..e_kmax of x via the product recurrence e_j += x_i e_{j-1}
/// (coefficients of prod (1 + x_i t)). T needs +, * and construction from double.
template <class T>
std::vector<T> elementary_symmetric(std::span<const T> x, int kmax, const T& one)
{
    std::vector<T> e(static_cast<size_t>(kmax) + 1, one * 0.0);
    e[0] = one;
    int filled = 0;
    for (const T& xi : x) {
        filled = filled < kmax ? filled + 1 : kmax;
        for (int j = filled; j >= 1; --j) {
            e[static_cast<size_t>(j)] = e[static_cast<size_t>(j)] + xi * e[static_cast<size_t>(j - 1)];
        }
    }
    return e;
}

std::vector<double> elementary_symmetric(std::span<const double> x, int kmax);

double sigma(int k, const EigenVector& lam);
double n_k(int n, int k);
double binom(int n, int k);
EigenVector sigma_grad(int k, const EigenVector& lam);
bool in_gamma(int k, const EigenVector& lam, double tol = kGammaTol);

/// sum_ij M_ij (delta_ij - m_i m_j) = trace(M) - m^T M m. m must be a unit vector.
double tangential_trace(const SymMatrix& M, std::span<const double> m);

} // namespace sklern
