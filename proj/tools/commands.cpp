#include "commands.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <random>
#include <thread>

#include "sklern/errors.hpp"
#include "sklern/expansion.hpp"
#include "sklern/geometry.hpp"
#include "sklern/io.hpp"
#include "sklern/radial.hpp"

namespace sklern::cli {

namespace {

using nlohmann::ordered_json;

void emit(const std::string& path, const std::string& text, std::ostream& out)
{
    if (path.empty()) {
        out << text << '\n';
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw ConfigError("cannot write " + path);
    }
    f << text << '\n';
}

template <typename Writer>
void emit_file(const std::string& path, Writer&& write)
{
    if (path.empty()) {
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw ConfigError("cannot write " + path);
    }
    write(f);
}

ordered_json domain_obj(const Domain& dom)
{
    if (const auto* ball = std::get_if<Ball>(&dom)) {
        return {{"type", "ball"}, {"R", ball->R}};
    }
    const auto& ann = std::get<Annulus>(dom);
    return {{"type", "annulus"}, {"a", ann.a}, {"b", ann.b}};
}

BoundaryData boundary_of(const RunConfig& cfg)
{
    BoundaryData bd{cfg.n, cfg.k, cfg.kappa};
    if (bd.kappa.empty()) {
        const double R = cfg.domain && std::holds_alternative<Ball>(*cfg.domain) ? std::get<Ball>(*cfg.domain).R : 1.0;
        bd.kappa.assign(static_cast<size_t>(cfg.n - 1), 1.0 / R);
    }
    return bd;
}

RadialSolution solve(const RadialProblem& prob)
{
    if (std::holds_alternative<Ball>(prob.domain)) {
        RadialSolution sol = solve_ball(prob);
        sol.corner = corner_metrics(sol);
        return sol;
    }
    return solve_annulus(prob);
}

double cell_at(const RadialSolution& sol, int j)
{
    const int i = std::clamp(j, 0, sol.size() - 2);
    return sol.r[static_cast<size_t>(i + 1)] - sol.r[static_cast<size_t>(i)];
}

struct Bundle {
    ordered_json criteria = ordered_json::array();
    bool pass = true;

    void add(const std::string& name, bool ok, double measured, double threshold)
    {
        criteria.push_back({{"name", name}, {"pass", ok}, {"measured", measured}, {"threshold", threshold}});
        pass = pass && ok;
    }
};

void verify_barrier(const RunConfig& cfg, Bundle& b, ordered_json& extra)
{
    const BoundaryData bd = boundary_of(cfg);
    const ExpansionTable table = expand(bd, std::max(cfg.n, cfg.effective_order()), 0.0);
    BarrierSpec spec;
    spec.beta = cfg.beta;
    spec.theta = cfg.theta;
    spec.delta = cfg.delta;
    spec.samples = cfg.samples;
    const BarrierReport rep = barrier_check(bd, table, spec);
    extra["barrier"] = ordered_json::parse(barrier_json(rep));
    b.add("plus_barrier_negative", rep.plus_negative, rep.max_G_plus, 0.0);
    b.add("minus_barrier_positive", rep.minus_positive, rep.min_G_minus, 0.0);
    b.add("delta_below_delta1", cfg.delta <= rep.empirical_delta1, cfg.delta, rep.empirical_delta1);
    b.add("sample_count", rep.samples >= 200, rep.samples, 200);
}

void verify_corner(const RunConfig& cfg, Bundle& b, ordered_json& extra)
{
    RadialProblem prob = cfg.problem();
    const RadialSolution sol = solve_annulus(prob);
    const auto& ann = std::get<Annulus>(prob.domain);
    const double target = std::sqrt(ann.a * ann.b);
    extra["corner"] = ordered_json::parse(corner_json(sol.corner));
    const CornerRecord& c = *sol.corner;
    if (cfg.k == 1) {
        b.add("corner_absent", !c.present, c.jump, c.floor);
        return;
    }
    b.add("corner_present", c.present, c.jump, c.floor);
    if (!c.present) {
        return;
    }
    const double h = cell_at(sol, c.index);
    b.add("corner_location", std::abs(c.r_star - target) <= 2.0 * h, std::abs(c.r_star - target), 2.0 * h);

    prob.J = 2 * cfg.grid;
    const RadialSolution fine = solve_annulus(prob);
    const double richardson = std::abs(fine.corner->jump - c.jump);
    extra["richardson_error"] = richardson;
    b.add("jump_over_richardson", c.jump >= 10.0 * richardson, c.jump, 10.0 * richardson);

    const double expect = 1.0 / cfg.k;
    b.add("holder_left", std::abs(c.holder_left - expect) <= 0.15, c.holder_left, expect);
    b.add("holder_right", std::abs(c.holder_right - expect) <= 0.15, c.holder_right, expect);
}

void verify_sphere(const RunConfig& cfg, Bundle& b, ordered_json& extra)
{
    const RadialSolution sol = solve(cfg.problem());
    const MinimalSphere ms = minimal_sphere(sol);
    extra["minimal_sphere"] = ordered_json::parse(minimal_sphere_json(ms));
    if (const auto* ann = std::get_if<Annulus>(&sol.domain)) {
        const double target = std::sqrt(ann->a * ann->b);
        const double h = cell_at(sol, ms.index);
        b.add("attached", !ms.detached, ms.r_min, 0.0);
        b.add("minimal_sphere_location", std::abs(ms.r_min - target) <= 2.0 * h, std::abs(ms.r_min - target), 2.0 * h);
        return;
    }
    b.add("ball_detached", ms.detached, ms.r_min, 0.0);
}

void verify_obstruction(const RunConfig& cfg, Bundle& b, ordered_json& extra)
{
    const RadialSolution sol = solve(cfg.problem());
    double lowest = std::numeric_limits<double>::infinity();
    double at = 0.0;
    int sampled = 0;
    for (int j = 1; j + 1 < sol.size(); ++j) {
        const double r = sol.r[static_cast<size_t>(j)];
        double v = 0.0;
        try {
            v = obstruction_residual(sol, r);
        } catch (const ArgumentError&) {
            continue;
        }
        ++sampled;
        if (v < lowest) {
            lowest = v;
            at = r;
        }
    }
    extra["sampled_spheres"] = sampled;
    extra["argmin_radius"] = at;
    b.add("obstruction_nonnegative", sampled > 0 && lowest >= -1e-6, lowest, -1e-6);
}

void verify_xi(const RunConfig& cfg, Bundle& b, ordered_json& extra)
{
    RadialProblem prob = cfg.problem();
    if (!std::holds_alternative<Ball>(prob.domain)) {
        throw ConfigError("verify xi needs --ball R");
    }
    const double R = std::get<Ball>(prob.domain).R;
    const RadialSolution sol = solve_ball(prob);
    const ExpansionTable table = expand(boundary_of(cfg), cfg.n, 0.0);
    const XiReport rep = xi_ode_residual(sol, table);
    const double c_n0 = 1.0 / (cfg.n * std::pow(2.0 * R, cfg.n));
    extra["xi_limit"] = rep.xi_limit;
    extra["c_n0"] = c_n0;
    b.add("xi_limit", std::abs(rep.xi_limit - c_n0) <= 1e-4, std::abs(rep.xi_limit - c_n0), 1e-4);
    b.add("xi_rate_measure", rep.measure <= 1e-3, rep.measure, 1e-3);
}

void verify_expansion(const RunConfig& cfg, Bundle& b, ordered_json& extra)
{
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    const int order = cfg.effective_order();
    double worst_c10 = 0.0;
    double worst_mu = 0.0;
    for (int draw = 0; draw < cfg.draws; ++draw) {
        BoundaryData bd{cfg.n, cfg.k, {}};
        for (int i = 0; i < cfg.n - 1; ++i) {
            bd.kappa.push_back(dist(rng));
        }
        double sum = 0.0;
        for (double v : bd.kappa) {
            sum += v;
        }
        const ExpansionTable base = expand(bd, order, 0.0);
        worst_c10 = std::max(worst_c10, std::abs(base.coeff(1, 0) - sum / (2.0 * (cfg.n - 1))));
        for (double mu : {-1.0, 1.0}) {
            const ExpansionTable other = expand(bd, order, mu);
            for (int p = 1; p < cfg.n; ++p) {
                for (int q = 0; q <= std::max(base.V.log_degree(p), other.V.log_degree(p)); ++q) {
                    worst_mu = std::max(worst_mu, std::abs(base.coeff(p, q) - other.coeff(p, q)));
                }
            }
            worst_mu = std::max(worst_mu, std::abs(base.c_n1 - other.c_n1));
        }
    }
    extra["draws"] = cfg.draws;
    extra["seed"] = cfg.seed;
    b.add("c10_law", worst_c10 <= 1e-12, worst_c10, 1e-12);
    b.add("mu_freedom", worst_mu == 0.0, worst_mu, 0.0);
}

} // namespace

int worker_count()
{
    const char* env = std::getenv("SKLERN_THREADS");
    if (env != nullptr) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) {
            return static_cast<int>(std::min(v, 256L));
        }
        throw ConfigError("SKLERN_THREADS must be a positive integer");
    }
    return std::max(1, static_cast<int>(std::thread::hardware_concurrency()));
}

int cmd_expand(const RunConfig& cfg, std::ostream& out)
{
    const BoundaryData bd{cfg.n, cfg.k, cfg.kappa};
    const ExpansionTable table = expand(bd, cfg.effective_order(), cfg.mu);
    emit(cfg.json_out, expansion_json(table), out);
    return kOk;
}

int cmd_solve(const RunConfig& cfg, std::ostream& out)
{
    const RadialProblem prob = cfg.problem();
    RadialSolution sol;
    int code = kOk;
    std::string failure;
    try {
        sol = solve(prob);
    } catch (const SolveFailure& e) {
        sol = e.partial();
        failure = e.what();
        code = kNumerical;
    }
    emit_file(cfg.csv_out, [&](std::ostream& f) { write_solution_csv(f, sol); });
    emit_file(cfg.spheres_out, [&](std::ostream& f) {
        std::vector<SphereReport> spheres;
        for (int j = 1; j + 1 < sol.size(); ++j) {
            spheres.push_back(sphere_report(sol, sol.r[static_cast<size_t>(j)]));
        }
        write_spheres_csv(f, spheres);
    });
    ordered_json j = ordered_json::parse(solution_json(sol));
    if (!failure.empty()) {
        j["error"] = failure;
    }
    emit(cfg.json_out, j.dump(2), out);
    return code;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out)
{
    Bundle b;
    ordered_json extra = ordered_json::object();
    int code = kOk;
    std::string failure;
    try {
        if (cfg.suite == "barrier") {
            verify_barrier(cfg, b, extra);
        } else if (cfg.suite == "corner") {
            verify_corner(cfg, b, extra);
        } else if (cfg.suite == "sphere") {
            verify_sphere(cfg, b, extra);
        } else if (cfg.suite == "obstruction") {
            verify_obstruction(cfg, b, extra);
        } else if (cfg.suite == "xi") {
            verify_xi(cfg, b, extra);
        } else if (cfg.suite == "expansion") {
            verify_expansion(cfg, b, extra);
        } else {
            throw ConfigError("unknown verify suite '" + cfg.suite + "'");
        }
    } catch (const DegeneracyError& e) {
        failure = e.what();
        code = kDegenerate;
    } catch (const NumericalFailure& e) {
        failure = e.what();
        code = kNumerical;
    }
    ordered_json j{{"suite", cfg.suite}, {"n", cfg.n}, {"k", cfg.k}};
    if (cfg.domain) {
        j["domain"] = domain_obj(*cfg.domain);
        j["grid"] = cfg.grid;
    }
    j["criteria"] = b.criteria;
    j["details"] = extra;
    j["pass"] = code == kOk && b.pass;
    if (!failure.empty()) {
        j["error"] = failure;
    }
    emit(cfg.json_out, j.dump(2), out);
    if (code != kOk) {
        return code;
    }
    return b.pass ? kOk : kVerifyFailed;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out)
{
    std::vector<std::pair<int, int>> pairs = cfg.pairs;
    if (pairs.empty()) {
        pairs = {{3, 2}, {4, 2}, {4, 3}};
    }
    struct Row {
        std::string status = "ok";
        RadialSolution sol;
        MinimalSphere sphere;
    };
    std::vector<Row> rows(pairs.size());
    std::atomic<size_t> next{0};
    auto work = [&] {
        for (size_t i = next++; i < pairs.size(); i = next++) {
            RunConfig local = cfg;
            local.n = pairs[i].first;
            local.k = pairs[i].second;
            try {
                rows[i].sol = solve(local.problem());
                rows[i].sphere = minimal_sphere(rows[i].sol);
            } catch (const SolveFailure& e) {
                rows[i].status = "numerical_failure";
                rows[i].sol = e.partial();
            } catch (const DegeneracyError&) {
                rows[i].status = "degenerate";
            } catch (const NumericalFailure&) {
                rows[i].status = "numerical_failure";
            } catch (const std::invalid_argument&) {
                rows[i].status = "invalid";
            }
        }
    };
    const int workers = std::min<int>(worker_count(), static_cast<int>(pairs.size()));
    {
        std::vector<std::jthread> pool;
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back(work);
        }
    }

    int code = kOk;
    ordered_json arr = ordered_json::array();
    std::string csv = "n,k,status,iterations,max_residual,corner_present,r_star,jump,holder_left,holder_right,r_min\r\n";
    for (size_t i = 0; i < pairs.size(); ++i) {
        const Row& row = rows[i];
        if (row.status != "ok") {
            code = row.status == "degenerate" ? kDegenerate : kNumerical;
        }
        const CornerRecord c = row.sol.corner.value_or(CornerRecord{});
        csv += std::to_string(pairs[i].first) + ',' + std::to_string(pairs[i].second) + ',' + row.status + ',' +
               std::to_string(row.sol.iterations) + ',' + format_double(row.sol.max_residual) + ',' +
               (c.present ? "1" : "0") + ',' + format_double(c.r_star) + ',' + format_double(c.jump) + ',' +
               format_double(c.holder_left) + ',' + format_double(c.holder_right) + ',' +
               format_double(row.sphere.r_min) + "\r\n";
        arr.push_back({{"n", pairs[i].first},
                       {"k", pairs[i].second},
                       {"status", row.status},
                       {"iterations", row.sol.iterations},
                       {"max_residual", row.sol.max_residual},
                       {"corner", ordered_json::parse(corner_json(row.sol.corner))},
                       {"r_min", row.sphere.r_min}});
    }
    if (!cfg.csv_out.empty()) {
        emit_file(cfg.csv_out, [&](std::ostream& f) { f << csv; });
    }
    if (!cfg.json_out.empty() || cfg.csv_out.empty()) {
        ordered_json j{{"domain", domain_obj(cfg.domain.value_or(Domain{Annulus{}}))}, {"grid", cfg.grid}, {"runs", arr}};
        emit(cfg.json_out, j.dump(2), out);
    }
    return code;
}

} // namespace sklern::cli
