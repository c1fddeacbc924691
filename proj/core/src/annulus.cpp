#include "sklern/radial.hpp"

#include "sklern/symfun.hpp"

#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cstdint>
#include <cmath>
#include <limits>
#include <string>

namespace sklern {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kMaxBracket = 1e3;

// Cylinder form: zeta = w + ln r, p = zeta_t, Lambda = (p^2 - 1)/2 and
// zeta'' = Phi(zeta, p) = alpha Lambda + A Lambda^{1-k}, A = B e^{2k zeta}.
class Scheme {
public:
    Scheme(const RadialProblem& prob, const AnnulusOptions& opt)
        : n_(prob.n), k_(prob.k), J_(prob.J), opt_(opt)
    {
        const auto& ann = std::get<Annulus>(prob.domain);
        a_ = ann.a;
        b_ = ann.b;
        alpha_ = (2.0 * k_ - n_) / k_;
        B_ = n_k(n_, k_) / binom(n_ - 1, k_ - 1);

        const double eps = prob.epsilon();
        const double tau = std::log1p(eps / a_);
        const double t0 = std::log(a_) + tau;
        const double tJ = std::log(b_) - tau;
        h_ = (tJ - t0) / J_;
        const auto m = static_cast<size_t>(J_ + 1);
        t_.resize(m);
        phi_.resize(m);
        dphi_.resize(m);
        ddphi_.resize(m);
        eta_.resize(m);
        for (size_t j = 0; j < m; ++j) {
            t_[j] = j + 1 == m ? tJ : t0 + h_ * static_cast<double>(j);
            const double r = std::exp(t_[j]);
            const double ra = r - a_;
            const double rb = b_ - r;
            phi_[j] = -std::log(ra) - std::log(rb) + std::log(b_ - a_) + t_[j];
            dphi_[j] = -r / ra + r / rb + 1.0;
            ddphi_[j] = a_ * r / (ra * ra) + b_ * r / (rb * rb);
        }

        const double d_in = std::exp(t_.front()) - a_;
        const double d_out = b_ - std::exp(t_.back());
        const double z_in = boundary_seed(prob, Side::Inner, prob.mu, d_in).first + t_.front() + opt.shift_inner;
        const double z_out = boundary_seed(prob, Side::Outer, prob.mu, d_out).first + t_.back() + opt.shift_outer;

        for (size_t j = 0; j < m; ++j) {
            const double r = std::exp(t_[j]);
            const double inner = std::log(2.0 * a_ / ((r - a_) * (r + a_)));
            const double outer = std::log(2.0 * b_ / ((b_ - r) * (b_ + r)));
            eta_[j] = std::max(inner, outer) + t_[j] - phi_[j];
        }
        eta_.front() = z_in - phi_.front();
        eta_.back() = z_out - phi_.back();
    }

    // Where the selected Lambda comes from: a one-sided difference, the interior minimiser, or nowhere.
    enum class Src { None, Minus, Plus, Star };

    struct Hat {
        double value;
        double Lc;
        Src src;
    };

    [[nodiscard]] double g(double L, double A) const
    {
        if (k_ == 1) {
            return alpha_ * L + A;
        }
        if (!(L > 0.0)) {
            return kInf;
        }
        return alpha_ * L + A * std::pow(L, 1 - k_);
    }

    // Godunov Hamiltonian: min of Phi over [dm, dp] when dm <= dp, max over [dp, dm] otherwise.
    // Phi depends on p through |p| only, so the p-interval is folded onto a |p| range first.
    [[nodiscard]] Hat hat(double z, double dm, double dp) const
    {
        const double A = B_ * std::exp(2.0 * k_ * z);
        const bool want_min = dm <= dp;
        const double plo = want_min ? dm : dp;
        const double phi = want_min ? dp : dm;
        const Src slo_p = want_min ? Src::Minus : Src::Plus;
        const Src shi_p = want_min ? Src::Plus : Src::Minus;
        double lo = 0.0;
        double hi = 0.0;
        Src slo = Src::None;
        Src shi = Src::None;
        if (plo >= 0.0) {
            lo = plo;
            hi = phi;
            slo = slo_p;
            shi = shi_p;
        } else if (phi <= 0.0) {
            lo = -phi;
            hi = -plo;
            slo = shi_p;
            shi = slo_p;
        } else {
            hi = std::max(-plo, phi);
            shi = -plo >= phi ? slo_p : shi_p;
        }
        const double Llo = 0.5 * (lo * lo - 1.0);
        const double Lhi = 0.5 * (hi * hi - 1.0);
        if (k_ == 1) {
            return want_min ? Hat{g(Lhi, A), Lhi, shi} : Hat{g(Llo, A), Llo, slo};
        }
        if (want_min) {
            if (hi <= 1.0) {
                return {kInf, Lhi, shi};
            }
            if (alpha_ > 0.0) {
                const double Ls = std::pow((k_ - 1) * A / alpha_, 1.0 / k_);
                if (Ls >= Lhi) {
                    return {g(Lhi, A), Lhi, shi};
                }
                if (Ls <= Llo) {
                    return {g(Llo, A), Llo, slo};
                }
                return {g(Ls, A), Ls, Src::Star};
            }
            return {g(Lhi, A), Lhi, shi};
        }
        if (lo <= 1.0) {
            return {kInf, Llo, slo};
        }
        const double glo = g(Llo, A);
        const double ghi = g(Lhi, A);
        return glo >= ghi ? Hat{glo, Llo, slo} : Hat{ghi, Lhi, shi};
    }

    struct NodeEval {
        double R;
        double scaled;
        double Lc;
        double d2;
        double A;
        double dm;
        double dp;
        Src src;
        bool finite;
    };

    [[nodiscard]] NodeEval node(const std::vector<double>& e, int j, double x) const
    {
        const auto i = static_cast<size_t>(j);
        const double dm = (x - e[i - 1]) / h_ + dphi_[i];
        const double dp = (e[i + 1] - x) / h_ + dphi_[i];
        const double d2 = (e[i + 1] - 2.0 * x + e[i - 1]) / (h_ * h_) + ddphi_[i];
        const double z = x + phi_[i];
        const Hat H = hat(z, dm, dp);
        const double A = B_ * std::exp(2.0 * k_ * z);
        const double R = -d2 + H.value;
        // Relative sigma_k residual Lambda^{k-1} R / A, finite where Phi-hat is not.
        double scaled = R / A;
        if (k_ >= 2) {
            scaled = H.Lc > 0.0 && std::isfinite(H.value)
                         ? (std::pow(H.Lc, k_ - 1) * (-d2) + alpha_ * std::pow(H.Lc, k_)) / A + 1.0
                         : 1.0;
        }
        return {R, scaled, H.Lc, d2, A, dm, dp, H.src, std::isfinite(H.value) && (k_ == 1 || H.Lc > 0.0)};
    }

    // Root of the increasing map x -> R_j(x): bracket, then TOMS 748.
    [[nodiscard]] double node_solve(int j) const
    {
        const auto i = static_cast<size_t>(j);
        const double x0 = eta_[i];
        auto f = [&](double x) { return std::min(node(eta_, j, x).R, std::numeric_limits<double>::max()); };
        const double f0 = f(x0);
        if (f0 == 0.0) {
            return x0;
        }
        if (!std::isfinite(x0) || std::isnan(f0)) {
            throw NumericalFailure("node " + std::to_string(j) + " has no finite residual");
        }
        // f is clamped to the largest double off the admissible cone.
        const bool scaled = std::abs(f0) < std::numeric_limits<double>::max();
        double step = scaled ? std::clamp(std::abs(f0) * h_ * h_, 1e-3, 1.0) : 1e-3;
        double lo = x0;
        double hi = x0;
        auto give_up = [&] {
            throw NumericalFailure("node " + std::to_string(j) + " residual has no sign change within " +
                                   std::to_string(step) + " of " + std::to_string(x0));
        };
        if (f0 > 0.0) {
            lo = x0 - step;
            while (f(lo) > 0.0) {
                step *= 2.0;
                if (step > kMaxBracket) {
                    give_up();
                }
                lo = x0 - step;
            }
        } else {
            hi = x0 + step;
            while (!(f(hi) > 0.0)) {
                step *= 2.0;
                if (step > kMaxBracket) {
                    give_up();
                }
                hi = x0 + step;
            }
        }
        if (f(lo) == 0.0) {
            return lo;
        }
        if (f(hi) == 0.0) {
            return hi;
        }
        const double tol = opt_.node_tol;
        auto close = [tol](double l, double u) { return u - l <= tol; };
        std::uintmax_t iters = 200;
        const auto root = boost::math::tools::toms748_solve(f, lo, hi, close, iters);
        return 0.5 * (root.first + root.second);
    }

    double gauss_seidel()
    {
        double moved = 0.0;
        for (int pass = 0; pass < 2; ++pass) {
            for (int s = 1; s < J_; ++s) {
                const int j = pass == 0 ? s : J_ - s;
                const double x = node_solve(j);
                moved = std::max(moved, std::abs(x - eta_[static_cast<size_t>(j)]));
                eta_[static_cast<size_t>(j)] = x;
            }
        }
        return moved;
    }

    // Sum of squared scaled residuals.
    [[nodiscard]] double scaled_norm(const std::vector<double>& e, std::vector<double>* out) const
    {
        double nr = 0.0;
        for (int j = 1; j < J_; ++j) {
            const double v = node(e, j, e[static_cast<size_t>(j)]).scaled;
            if (out != nullptr) {
                (*out)[static_cast<size_t>(j)] = v;
            }
            nr += v * v;
        }
        return nr;
    }

    // Damped Newton step on the scaled residual; the tridiagonal Jacobian follows the active upwind branch.
    // Returns the largest accepted update, or infinity when no step reduced the residual.
    double newton()
    {
        const auto m = static_cast<size_t>(J_ + 1);
        std::vector<double> R(m, 0.0);
        const double nr = scaled_norm(eta_, &R);
        if (!std::isfinite(nr)) {
            return kInf;
        }
        std::vector<double> lower(m, 0.0);
        std::vector<double> diag(m, 0.0);
        std::vector<double> upper(m, 0.0);
        std::vector<double> e = eta_;
        for (int j = 1; j < J_; ++j) {
            const auto i = static_cast<size_t>(j);
            const NodeEval ev = node(eta_, j, eta_[i]);
            if (!ev.finite) {
                diag[i] = 1e8;
                continue;
            }
            // S = (Lambda^{k-1}(-d2) + alpha Lambda^k) / A + 1 (k = 1: (-d2 + alpha Lambda) / A + 1).
            const double L = ev.Lc;
            const double Lk1 = k_ >= 2 ? std::pow(L, k_ - 1) : 1.0;
            const double dS_dd2 = -Lk1 / ev.A;
            const double dS_dL = k_ >= 2 ? ((k_ - 1) * std::pow(L, k_ - 2) * (-ev.d2) + k_ * alpha_ * Lk1) / ev.A
                                         : alpha_ / ev.A;
            const double dS_dz = -2.0 * k_ * (R[i] - 1.0);
            const double inv_h2 = 1.0 / (h_ * h_);
            lower[i] = dS_dd2 * inv_h2;
            upper[i] = dS_dd2 * inv_h2;
            diag[i] = -2.0 * dS_dd2 * inv_h2 + dS_dz;
            switch (ev.src) {
            case Src::Minus:
                diag[i] += dS_dL * ev.dm / h_;
                lower[i] -= dS_dL * ev.dm / h_;
                break;
            case Src::Plus:
                diag[i] -= dS_dL * ev.dp / h_;
                upper[i] += dS_dL * ev.dp / h_;
                break;
            case Src::Star:
                diag[i] += dS_dL * 2.0 * L;
                break;
            case Src::None:
                break;
            }
        }
        // Thomas algorithm on rows 1..J-1.
        std::vector<double> cp(m, 0.0);
        std::vector<double> dp(m, 0.0);
        for (int j = 1; j < J_; ++j) {
            const auto i = static_cast<size_t>(j);
            const double den = diag[i] - (j > 1 ? lower[i] * cp[i - 1] : 0.0);
            if (den == 0.0 || !std::isfinite(den)) {
                return kInf;
            }
            cp[i] = upper[i] / den;
            dp[i] = (-R[i] - (j > 1 ? lower[i] * dp[i - 1] : 0.0)) / den;
        }
        std::vector<double> dx(m, 0.0);
        for (int j = J_ - 1; j >= 1; --j) {
            const auto i = static_cast<size_t>(j);
            dx[i] = dp[i] - (j < J_ - 1 ? cp[i] * dx[i + 1] : 0.0);
        }
        for (double lam = 1.0; lam > 1e-4; lam *= 0.5) {
            for (int j = 1; j < J_; ++j) {
                e[static_cast<size_t>(j)] = eta_[static_cast<size_t>(j)] + lam * dx[static_cast<size_t>(j)];
            }
            const double trial = scaled_norm(e, nullptr);
            if (std::isfinite(trial) && trial < nr) {
                double step = 0.0;
                for (int j = 1; j < J_; ++j) {
                    step = std::max(step, lam * std::abs(dx[static_cast<size_t>(j)]));
                }
                eta_ = e;
                return step;
            }
        }
        return kInf;
    }

    void fill(RadialSolution& sol) const
    {
        const auto m = static_cast<size_t>(J_ + 1);
        sol.r.resize(m);
        sol.w.resize(m);
        sol.lamT.assign(m, 0.0);
        sol.lamR.assign(m, 0.0);
        sol.residual.assign(m, 0.0);
        sol.flagged_nodes = 0;
        for (size_t j = 0; j < m; ++j) {
            sol.r[j] = std::exp(t_[j]);
            sol.w[j] = eta_[j] + phi_[j] - t_[j];
        }
        for (int j = 1; j < J_; ++j) {
            const auto i = static_cast<size_t>(j);
            const NodeEval ev = node(eta_, j, eta_[i]);
            const double r2 = sol.r[i] * sol.r[i];
            sol.lamT[i] = ev.Lc / r2;
            sol.lamR[i] = (ev.d2 - ev.Lc) / r2;
            const double weight = k_ >= 2 ? std::pow(std::max(ev.Lc, 0.0), k_ - 1) : 1.0;
            sol.residual[i] = std::isfinite(ev.R) ? weight * std::abs(ev.R) / ev.A : kInf;
            if (k_ >= 2 && ev.Lc <= 1e-10) {
                ++sol.flagged_nodes;
            }
        }
    }

private:
    int n_;
    int k_;
    int J_;
    AnnulusOptions opt_;
    double a_ = 0.0;
    double b_ = 0.0;
    double alpha_ = 0.0;
    double B_ = 0.0;
    double h_ = 0.0;
    std::vector<double> t_;
    std::vector<double> phi_;
    std::vector<double> dphi_;
    std::vector<double> ddphi_;
    std::vector<double> eta_;
};

} // namespace

RadialSolution solve_annulus(const RadialProblem& prob, const AnnulusOptions& opt)
{
    prob.validate();
    if (!std::holds_alternative<Annulus>(prob.domain)) {
        throw DomainError("solve_annulus needs an annulus domain");
    }
    Scheme scheme(prob, opt);
    RadialSolution sol;
    sol.n = prob.n;
    sol.k = prob.k;
    sol.domain = prob.domain;
    sol.eps = prob.epsilon();
    sol.converged = false;
    double moved = kInf;
    int it = 0;
    for (; it < opt.max_iters; ++it) {
        moved = scheme.gauss_seidel();
        if (moved < opt.update_tol) {
            sol.converged = true;
            break;
        }
        for (int inner = 0; inner < 50; ++inner) {
            const double step = scheme.newton();
            if (!std::isfinite(step) || step <= opt.update_tol) {
                break;
            }
        }
    }
    sol.iterations = it + 1;
    scheme.fill(sol);
    finalize_fields(sol);
    if (!sol.converged) {
        throw SolveFailure("annulus iteration did not converge after " + std::to_string(opt.max_iters) +
                               " iterations (last update " + std::to_string(moved) + ", max residual " +
                               std::to_string(sol.max_residual) + ")",
                           std::move(sol));
    }
    if (sol.flagged_nodes > 0) {
        throw SolveFailure("annulus solution has " + std::to_string(sol.flagged_nodes) +
                               " nodes on the Gamma_k boundary",
                           std::move(sol));
    }
    if (opt.compute_corner) {
        sol.corner = corner_metrics(sol);
    }
    return sol;
}

} // namespace sklern
