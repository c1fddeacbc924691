#pragma once

#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "sklern/expansion.hpp"

namespace sklern {

struct Ball {
    double R = 1.0;
};

struct Annulus {
    double a = 1.0;
    double b = 4.0;
};

using Domain = std::variant<Ball, Annulus>;

struct RadialProblem {
    int n = 3;
    int k = 2;
    Domain domain = Annulus{};
    /// Number of grid intervals.
    int J = 4000;
    /// Offset from each blow-up boundary; 0 selects 1e-3 times the domain width.
    double eps = 0.0;
    /// Expansion order of the boundary seeds; 0 selects n + 1.
    int seed_order = 0;
    /// Value of the free coefficient c_{n,0} used in the seeds.
    double mu = 0.0;

    void validate() const;
    [[nodiscard]] double epsilon() const;
    [[nodiscard]] int seeds() const { return seed_order > 0 ? seed_order : n + 1; }
};

struct CornerRecord {
    bool present = false;
    double r_star = 0.0;
    int index = -1;
    /// |u'(r*+) - u'(r*-)| from the one-sided differences at r*.
    double jump = 0.0;
    /// Largest mismatch 4..12 cells away from r*; the local smooth-profile floor.
    double floor = 0.0;
    double du_left = 0.0;
    double du_right = 0.0;
    /// One-sided limits of u' at the Gamma_k edge (lambda_T = 0) on either side.
    double anchor_left = 0.0;
    double anchor_right = 0.0;
    double holder_left = 0.0;
    double holder_right = 0.0;
    int fit_points_left = 0;
    int fit_points_right = 0;
};

struct RadialSolution {
    int n = 0;
    int k = 0;
    Domain domain = Ball{};
    double eps = 0.0;
    std::vector<double> r;
    std::vector<double> w;
    std::vector<double> u;
    std::vector<double> du_left;
    std::vector<double> du_right;
    std::vector<double> lamT;
    std::vector<double> lamR;
    /// Relative residual |sigma_k(lambda) - N_k e^{2kw}| / (N_k e^{2kw}) per node.
    std::vector<double> residual;
    double max_residual = 0.0;
    bool converged = true;
    int iterations = 0;
    int flagged_nodes = 0;
    std::optional<CornerRecord> corner;

    [[nodiscard]] int size() const { return static_cast<int>(r.size()); }
    [[nodiscard]] bool is_annulus() const { return std::holds_alternative<Annulus>(domain); }
};

struct RadialEigen {
    double lamT;
    double lamR;
};

/// Eigenvalues of -S(w) for radial w: lamT (multiplicity n-1) and lamR.
RadialEigen lambda_radial(double w, double w1, double w2, double r);

/// w'' solving sigma_k(lambda(-S(w))) = N_k e^{2kw}; requires lamT > tol.
double ode_rhs(double w, double w1, double r, int n, int k, double tol = 1e-12);

/// Fills u, one-sided differences and corner-free bookkeeping from r and w.
void finalize_fields(RadialSolution& sol);

/// Closed form u^{2/(n-2)} = 2R/(R^2 - r^2) on a uniform grid over [eps, R - eps].
RadialSolution exact_ball(const RadialProblem& prob);

/// Regular ball solution: shoots outward from the centre with w(0) = 0, places the blow-up radius
/// with the boundary expansion and rescales by w(r) -> w(lambda r) + ln lambda. Residual from the ODE.
RadialSolution solve_ball(const RadialProblem& prob);

enum class Side { Inner, Outer };
enum class ShotOutcome { Completed, Degenerate, Overflow };

struct ShotResult {
    ShotOutcome outcome = ShotOutcome::Completed;
    std::vector<double> r;
    std::vector<double> w;
    std::vector<double> w1;
    /// Radius at which integration stopped.
    double r_end = 0.0;
    std::string message;
};

/// Seed (w, w') at distance eps from the chosen boundary, from the expansion with c_{n,0} = mu.
std::pair<double, double> boundary_seed(const RadialProblem& prob, Side from, double mu, double eps);

/// Integrates inward from the chosen boundary with an adaptive Runge-Kutta method.
ShotResult shoot(const RadialProblem& prob, Side from, double mu);

/// Shot trajectory as a solution on ascending radii (residual from the ODE, hence round-off).
RadialSolution shot_solution(const ShotResult& shot, const RadialProblem& prob);

struct AnnulusOptions {
    int max_iters = 200;
    /// Converged when a Gauss-Seidel double sweep moves no node by more than this.
    double update_tol = 1e-11;
    double node_tol = 1e-12;
    /// Added to the inner and outer Dirichlet seeds of w.
    double shift_inner = 0.0;
    double shift_outer = 0.0;
    bool compute_corner = true;
};

/// Non-convergence report; carries the last iterate and its residual profile.
class SolveFailure : public NumericalFailure {
public:
    SolveFailure(const std::string& what, RadialSolution partial)
        : NumericalFailure(what), partial_(std::move(partial))
    {
    }
    [[nodiscard]] const RadialSolution& partial() const { return partial_; }

private:
    RadialSolution partial_;
};

/// Viscosity solution on the annulus: monotone upwind scheme in t = ln r,
/// nonlinear Gauss-Seidel sweeps accelerated by damped Newton steps.
RadialSolution solve_annulus(const RadialProblem& prob, const AnnulusOptions& opt = {});

/// Pullback under x -> ab x/|x|^2, resampled to the grid.
RadialSolution kelvin_reflect(const RadialSolution& sol);

struct CornerOptions {
    /// Nodes closer than this fraction of the width to either boundary are ignored.
    double boundary_exclusion = 0.1;
    /// Corner present when the peak mismatch exceeds this multiple of the floor.
    double significance = 10.0;
    /// Fit window [start_cells * h, decade * start_cells * h] in |r - r*|.
    int start_cells = 2;
    double decade = 10.0;
    int min_points = 8;
};

CornerRecord corner_metrics(const RadialSolution& sol, const CornerOptions& opt = {});

struct XiOptions {
    double dmin = 0.0;
    double dmax = 0.0;
};

struct XiReport {
    /// Intercept of a straight-line fit of xi against d over the window.
    double xi_limit = 0.0;
    /// sup |(d^{n+2} xi')'| / d^{n+1/2} over the window.
    double measure = 0.0;
    std::vector<double> d;
    std::vector<double> xi;
};

/// xi = d^{-n}(w - W_{<n}) near the ball boundary and the rate measure of its ODE.
XiReport xi_ode_residual(const RadialSolution& sol, const ExpansionTable& table, const XiOptions& opt = {});

} // namespace sklern
