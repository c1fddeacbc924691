#include "sklern/radial.hpp"

#include "sklern/symfun.hpp"

#include <math.h> // pchip in Boost 1.74 calls isnan unqualified
#include <boost/math/interpolators/pchip.hpp>
#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace sklern {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double width(const Domain& dom)
{
    if (const auto* ball = std::get_if<Ball>(&dom)) {
        return ball->R;
    }
    const auto& ann = std::get<Annulus>(dom);
    return ann.b - ann.a;
}

double sigma_radial(int n, int k, double lamT, double lamR)
{
    return binom(n - 1, k) * std::pow(lamT, k) + binom(n - 1, k - 1) * std::pow(lamT, k - 1) * lamR;
}

struct Overflow {};

} // namespace

void RadialProblem::validate() const
{
    if (n < 3) {
        throw ArgumentError("dimension n must be at least 3");
    }
    if (k < 1 || k > n) {
        throw ArgumentError("k must lie in 1..n");
    }
    if (const auto* ball = std::get_if<Ball>(&domain)) {
        if (!(ball->R > 0.0) || !std::isfinite(ball->R)) {
            throw ArgumentError("ball radius must be positive");
        }
    } else {
        const auto& ann = std::get<Annulus>(domain);
        if (!(ann.a > 0.0) || !(ann.b > ann.a) || !std::isfinite(ann.b)) {
            throw ArgumentError("annulus needs 0 < a < b");
        }
    }
    if (J < 16) {
        throw ArgumentError("grid needs at least 16 intervals");
    }
    if (eps < 0.0 || !std::isfinite(eps)) {
        throw ArgumentError("epsilon must be positive");
    }
    if (epsilon() >= 0.25 * width(domain)) {
        throw ArgumentError("epsilon too large for the domain");
    }
    if (seed_order < 0) {
        throw ArgumentError("seed order must be nonnegative");
    }
    if (!std::isfinite(mu)) {
        throw ArgumentError("mu must be finite");
    }
}

double RadialProblem::epsilon() const
{
    return eps > 0.0 ? eps : 1e-3 * width(domain);
}

RadialEigen lambda_radial(double w, double w1, double w2, double r)
{
    (void)w;
    if (!(r > 0.0)) {
        throw ArgumentError("lambda_radial needs r > 0");
    }
    return {w1 / r + 0.5 * w1 * w1, w2 - 0.5 * w1 * w1};
}

double ode_rhs(double w, double w1, double r, int n, int k, double tol)
{
    if (!(r > 0.0)) {
        throw ArgumentError("ode_rhs needs r > 0");
    }
    const double lamT = w1 / r + 0.5 * w1 * w1;
    if (!(lamT > tol)) {
        throw DegeneracyError("tangential eigenvalue reached the Gamma_k boundary");
    }
    const double rhs = n_k(n, k) * std::exp(2.0 * k * w) - binom(n - 1, k) * std::pow(lamT, k);
    return 0.5 * w1 * w1 + rhs / (binom(n - 1, k - 1) * std::pow(lamT, k - 1));
}

void finalize_fields(RadialSolution& sol)
{
    const int m = sol.size();
    const double ex = 0.5 * (sol.n - 2);
    sol.u.resize(static_cast<size_t>(m));
    sol.du_left.assign(static_cast<size_t>(m), kNaN);
    sol.du_right.assign(static_cast<size_t>(m), kNaN);
    for (int j = 0; j < m; ++j) {
        sol.u[static_cast<size_t>(j)] = std::exp(ex * sol.w[static_cast<size_t>(j)]);
    }
    for (int j = 0; j + 1 < m; ++j) {
        const double s = (sol.u[static_cast<size_t>(j + 1)] - sol.u[static_cast<size_t>(j)]) /
                         (sol.r[static_cast<size_t>(j + 1)] - sol.r[static_cast<size_t>(j)]);
        sol.du_right[static_cast<size_t>(j)] = s;
        sol.du_left[static_cast<size_t>(j + 1)] = s;
    }
    sol.max_residual = 0.0;
    for (int j = 1; j + 1 < m; ++j) {
        sol.max_residual = std::max(sol.max_residual, sol.residual[static_cast<size_t>(j)]);
    }
}

RadialSolution exact_ball(const RadialProblem& prob)
{
    prob.validate();
    const auto* ball = std::get_if<Ball>(&prob.domain);
    if (ball == nullptr) {
        throw DomainError("exact_ball needs a ball domain");
    }
    const double R = ball->R;
    const double eps = prob.epsilon();
    RadialSolution sol;
    sol.n = prob.n;
    sol.k = prob.k;
    sol.domain = prob.domain;
    sol.eps = eps;
    const int m = prob.J + 1;
    const double Nk = n_k(prob.n, prob.k);
    for (int j = 0; j < m; ++j) {
        const double r = eps + (R - 2.0 * eps) * j / prob.J;
        const double q = (R - r) * (R + r);
        const double w = std::log(2.0 * R / q);
        const double w1 = 2.0 * r / q;
        const double w2 = 2.0 * (R * R + r * r) / (q * q);
        const auto lam = lambda_radial(w, w1, w2, r);
        const double rhs = Nk * std::exp(2.0 * prob.k * w);
        sol.r.push_back(r);
        sol.w.push_back(w);
        sol.lamT.push_back(lam.lamT);
        sol.lamR.push_back(lam.lamR);
        sol.residual.push_back(std::abs(sigma_radial(prob.n, prob.k, lam.lamT, lam.lamR) - rhs) / rhs);
    }
    finalize_fields(sol);
    return sol;
}

RadialSolution solve_ball(const RadialProblem& prob)
{
    namespace odeint = boost::numeric::odeint;
    prob.validate();
    const auto* ball = std::get_if<Ball>(&prob.domain);
    if (ball == nullptr) {
        throw DomainError("solve_ball needs a ball domain");
    }
    const int n = prob.n;
    const int k = prob.k;
    using State = std::array<double, 2>;
    auto rhs = [&](const State& x, State& dx, double s) {
        dx[0] = x[1];
        dx[1] = ode_rhs(x[0], x[1], s, n, k);
    };
    // w(0) = 0 forces w = s^2/4 + O(s^4) at the regular centre.
    constexpr double s0 = 1e-5;
    const State x0{0.25 * s0 * s0, 0.5 * s0};
    auto make = [] { return odeint::make_dense_output(1e-13, 1e-13, odeint::runge_kutta_dopri5<State>()); };

    // Blow-up radius R0 of the unit-centre profile: run to w = w_stop, then close the gap d with the expansion.
    constexpr double w_stop = 11.5;
    auto stepper = make();
    stepper.initialize(x0, s0, 1e-3);
    while (stepper.current_state()[0] < w_stop) {
        stepper.do_step(rhs);
        if (!std::isfinite(stepper.current_state()[0]) || stepper.current_time() > 1e6) {
            throw NumericalFailure("centre shot did not blow up");
        }
    }
    double lo = stepper.previous_time();
    double hi = stepper.current_time();
    State xs{};
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        stepper.calc_state(mid, xs);
        (xs[0] < w_stop ? lo : hi) = mid;
    }
    const double s_stop = 0.5 * (lo + hi);
    double R0 = s_stop;
    for (int it = 0; it < 8; ++it) {
        const BoundaryData bd{n, k, std::vector<double>(static_cast<size_t>(n - 1), 1.0 / R0)};
        const ExpansionTable table = expand(bd, n + 2, 0.0);
        // w = -ln d + V(d) at d = R0 - s_stop.
        double d = std::exp(-w_stop);
        for (int j = 0; j < 20; ++j) {
            const auto jet = table.V.jet(d);
            const double f = -std::log(d) + jet.value - w_stop;
            const double fp = -1.0 / d + jet.d1;
            d -= f / fp;
        }
        R0 = s_stop + d;
    }

    const double R = ball->R;
    const double lambda = R0 / R;
    const double eps = prob.epsilon();
    RadialSolution sol;
    sol.n = n;
    sol.k = k;
    sol.domain = prob.domain;
    sol.eps = eps;
    const int m = prob.J + 1;
    std::vector<double> times;
    for (int j = 0; j < m; ++j) {
        sol.r.push_back(eps + (R - 2.0 * eps) * j / prob.J);
        const double s = lambda * sol.r.back();
        if (s > s0) {
            times.push_back(s);
        }
    }
    std::vector<State> states;
    if (!times.empty()) {
        times.insert(times.begin(), s0);
        State x = x0;
        auto dense = make();
        odeint::integrate_times(dense, rhs, x, times.begin(), times.end(), 1e-3,
                                [&](const State& st, double) { states.push_back(st); });
        states.erase(states.begin());
    }
    const double Nk = n_k(n, k);
    const size_t below = static_cast<size_t>(m) - states.size();
    for (size_t j = 0; j < static_cast<size_t>(m); ++j) {
        const double r = sol.r[j];
        const double s = lambda * r;
        const State st = j < below ? State{0.25 * s * s, 0.5 * s} : states[j - below];
        const double w = st[0] + std::log(lambda);
        const double w1 = lambda * st[1];
        const double w2 = ode_rhs(w, w1, r, n, k);
        const auto lam = lambda_radial(w, w1, w2, r);
        const double target = Nk * std::exp(2.0 * k * w);
        sol.w.push_back(w);
        sol.lamT.push_back(lam.lamT);
        sol.lamR.push_back(lam.lamR);
        sol.residual.push_back(std::abs(sigma_radial(n, k, lam.lamT, lam.lamR) - target) / target);
    }
    finalize_fields(sol);
    return sol;
}

std::pair<double, double> boundary_seed(const RadialProblem& prob, Side from, double mu, double eps)
{
    double kappa = 0.0;
    double orient = 1.0;
    if (const auto* ball = std::get_if<Ball>(&prob.domain)) {
        if (from != Side::Outer) {
            throw ArgumentError("a ball has only an outer boundary");
        }
        kappa = 1.0 / ball->R;
        orient = -1.0;
    } else {
        const auto& ann = std::get<Annulus>(prob.domain);
        kappa = from == Side::Inner ? -1.0 / ann.a : 1.0 / ann.b;
        orient = from == Side::Inner ? 1.0 : -1.0;
    }
    const BoundaryData bd{prob.n, prob.k, std::vector<double>(static_cast<size_t>(prob.n - 1), kappa)};
    const ExpansionTable table = expand(bd, prob.seeds(), mu);
    const auto jet = table.V.jet(eps);
    const double W = -std::log(eps) + jet.value;
    const double Wd = -1.0 / eps + jet.d1;
    return {W, orient * Wd};
}

ShotResult shoot(const RadialProblem& prob, Side from, double mu)
{
    namespace odeint = boost::numeric::odeint;
    prob.validate();
    if (prob.seeds() < prob.n) {
        throw ArgumentError("shooting needs seed_order >= n so that mu enters the seed");
    }
    const double eps = prob.epsilon();
    double r_start = 0.0;
    double r_stop = 0.0;
    if (const auto* ball = std::get_if<Ball>(&prob.domain)) {
        if (from != Side::Outer) {
            throw ArgumentError("a ball is shot from its boundary");
        }
        r_start = ball->R - eps;
        r_stop = eps;
    } else {
        const auto& ann = std::get<Annulus>(prob.domain);
        r_start = from == Side::Inner ? ann.a + eps : ann.b - eps;
        r_stop = from == Side::Inner ? ann.b - eps : ann.a + eps;
    }
    const double dir = r_stop > r_start ? 1.0 : -1.0;
    const auto seed = boundary_seed(prob, from, mu, eps);

    using State = std::array<double, 2>;
    const int n = prob.n;
    const int k = prob.k;
    auto rhs = [&](const State& x, State& dx, double s) {
        if (!std::isfinite(x[0]) || !std::isfinite(x[1]) || std::abs(x[0]) > 700.0) {
            throw Overflow{};
        }
        const double r = r_start + dir * s;
        dx[0] = x[1];
        dx[1] = ode_rhs(x[0], dir * x[1], r, n, k);
    };

    const double length = std::abs(r_stop - r_start);
    std::vector<double> times(static_cast<size_t>(prob.J) + 1);
    for (int j = 0; j <= prob.J; ++j) {
        times[static_cast<size_t>(j)] = length * j / prob.J;
    }
    ShotResult res;
    State x{seed.first, dir * seed.second};
    auto observer = [&](const State& s, double tt) {
        res.r.push_back(r_start + dir * tt);
        res.w.push_back(s[0]);
        res.w1.push_back(dir * s[1]);
    };
    auto stepper = odeint::make_dense_output(1e-12, 1e-12, odeint::runge_kutta_dopri5<State>());
    try {
        odeint::integrate_times(stepper, rhs, x, times.begin(), times.end(), 1e-3 * eps, observer);
        res.outcome = ShotOutcome::Completed;
    } catch (const DegeneracyError& e) {
        res.outcome = ShotOutcome::Degenerate;
        res.message = e.what();
    } catch (const Overflow&) {
        res.outcome = ShotOutcome::Overflow;
        res.message = "solution overflowed";
    } catch (const odeint::step_adjustment_error& e) {
        res.outcome = ShotOutcome::Overflow;
        res.message = e.what();
    }
    res.r_end = res.r.empty() ? r_start : res.r.back();
    return res;
}

RadialSolution shot_solution(const ShotResult& shot, const RadialProblem& prob)
{
    RadialSolution sol;
    sol.n = prob.n;
    sol.k = prob.k;
    sol.domain = prob.domain;
    sol.eps = prob.epsilon();
    sol.converged = shot.outcome == ShotOutcome::Completed;
    const int m = static_cast<int>(shot.r.size());
    const double Nk = n_k(prob.n, prob.k);
    for (int s = 0; s < m; ++s) {
        const auto i = static_cast<size_t>(shot.r.front() <= shot.r.back() ? s : m - 1 - s);
        const double r = shot.r[i];
        const double w = shot.w[i];
        const double w1 = shot.w1[i];
        const double w2 = ode_rhs(w, w1, r, prob.n, prob.k);
        const auto lam = lambda_radial(w, w1, w2, r);
        const double rhs = Nk * std::exp(2.0 * prob.k * w);
        sol.r.push_back(r);
        sol.w.push_back(w);
        sol.lamT.push_back(lam.lamT);
        sol.lamR.push_back(lam.lamR);
        sol.residual.push_back(std::abs(sigma_radial(prob.n, prob.k, lam.lamT, lam.lamR) - rhs) / rhs);
    }
    finalize_fields(sol);
    return sol;
}

RadialSolution kelvin_reflect(const RadialSolution& sol)
{
    const auto* ann = std::get_if<Annulus>(&sol.domain);
    if (ann == nullptr) {
        throw DomainError("Kelvin reflection preserves only annuli centred at the origin");
    }
    const int m = sol.size();
    if (m < 4) {
        throw ArgumentError("too few nodes to resample");
    }
    const double T = std::log(ann->a * ann->b);
    std::vector<double> t(static_cast<size_t>(m));
    std::vector<double> zeta(static_cast<size_t>(m));
    std::vector<double> sT(static_cast<size_t>(m));
    std::vector<double> sR(static_cast<size_t>(m));
    for (int j = 0; j < m; ++j) {
        const auto i = static_cast<size_t>(j);
        t[i] = std::log(sol.r[i]);
        zeta[i] = sol.w[i] + t[i];
        const double scale = std::exp(-2.0 * sol.w[i]);
        sT[i] = sol.lamT[i] * scale;
        sR[i] = sol.lamR[i] * scale;
    }
    const double lo = t.front();
    const double hi = t.back();
    using boost::math::interpolators::pchip;
    auto fz = pchip(std::vector<double>(t), std::move(zeta));
    auto fT = pchip(std::vector<double>(t), std::move(sT));
    auto fR = pchip(std::vector<double>(t), std::move(sR));
    auto fres = pchip(std::vector<double>(t), std::vector<double>(sol.residual));

    RadialSolution out = sol;
    const double slack = 1e-12 * std::max(1.0, std::abs(T));
    for (int j = 0; j < m; ++j) {
        const auto i = static_cast<size_t>(j);
        double tp = T - t[i];
        if (tp < lo - slack || tp > hi + slack) {
            throw DomainError("grid is not symmetric under the reflection");
        }
        tp = std::clamp(tp, lo, hi);
        out.w[i] = fz(tp) - t[i];
        const double scale = std::exp(2.0 * out.w[i]);
        out.lamT[i] = fT(tp) * scale;
        out.lamR[i] = fR(tp) * scale;
        out.residual[i] = fres(tp);
    }
    finalize_fields(out);
    if (sol.corner) {
        out.corner = corner_metrics(out);
    }
    return out;
}

} // namespace sklern
