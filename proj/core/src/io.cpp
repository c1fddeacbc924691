#include "sklern/io.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>

namespace sklern {

namespace {

using nlohmann::ordered_json;

ordered_json domain_json(const Domain& dom)
{
    if (const auto* ball = std::get_if<Ball>(&dom)) {
        return {{"type", "ball"}, {"R", ball->R}};
    }
    const auto& ann = std::get<Annulus>(dom);
    return {{"type", "annulus"}, {"a", ann.a}, {"b", ann.b}};
}

ordered_json corner_obj(const std::optional<CornerRecord>& c)
{
    if (!c) {
        return {{"present", false}};
    }
    ordered_json j{{"present", c->present}, {"location", c->r_star}, {"jump", c->jump}, {"floor", c->floor}};
    if (c->present) {
        j["du_left"] = c->du_left;
        j["du_right"] = c->du_right;
        j["anchor_left"] = c->anchor_left;
        j["anchor_right"] = c->anchor_right;
        j["holder_left"] = c->holder_left;
        j["holder_right"] = c->holder_right;
        j["fit_points_left"] = c->fit_points_left;
        j["fit_points_right"] = c->fit_points_right;
    }
    return j;
}

} // namespace

std::string format_double(double v)
{
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string expansion_json(const ExpansionTable& t)
{
    ordered_json coeffs = ordered_json::array();
    for (int p = 1; p <= t.order; ++p) {
        for (int q = 0; q <= t.V.log_degree(p); ++q) {
            const double v = t.V.coeff(p, q);
            if (v != 0.0) {
                coeffs.push_back({{"p", p}, {"q", q}, {"value", v}});
            }
        }
    }
    ordered_json j{{"n", t.n},
                   {"k", t.k},
                   {"kappa", t.kappa},
                   {"mu", t.mu},
                   {"order", t.order},
                   {"coefficients", coeffs},
                   {"c_n1", t.c_n1},
                   {"residual_order", t.residual_order},
                   {"residual_max", t.residual_max},
                   {"log_degree", t.log_degree},
                   {"metadata", {{"umbilic", t.umbilic}, {"formal", !t.umbilic}}}};
    return j.dump(2);
}

std::string corner_json(const std::optional<CornerRecord>& c)
{
    return corner_obj(c).dump(2);
}

std::string barrier_json(const BarrierReport& b)
{
    ordered_json j{{"theta", b.theta},
                   {"beta", b.beta},
                   {"delta", b.delta},
                   {"samples", b.samples},
                   {"max_G_plus", b.max_G_plus},
                   {"min_G_minus", b.min_G_minus},
                   {"empirical_delta1", b.empirical_delta1},
                   {"residual_slope", b.residual_slope}};
    return j.dump(2);
}

std::string minimal_sphere_json(const MinimalSphere& m)
{
    ordered_json j{{"r_min", m.r_min},   {"area", m.area}, {"index", m.index},
                   {"detached", m.detached}, {"tie", m.tie},   {"unimodal", m.unimodal}};
    return j.dump(2);
}

std::string solution_json(const RadialSolution& sol)
{
    ordered_json j{{"n", sol.n},
                   {"k", sol.k},
                   {"domain", domain_json(sol.domain)},
                   {"nodes", sol.size()},
                   {"epsilon", sol.eps},
                   {"converged", sol.converged},
                   {"iterations", sol.iterations},
                   {"max_residual", sol.max_residual},
                   {"corner", corner_obj(sol.corner)}};
    return j.dump(2);
}

void write_solution_csv(std::ostream& os, const RadialSolution& sol)
{
    os << "r,w,u,u'_left,u'_right,lamT,lamR,residual\r\n";
    for (int j = 0; j < sol.size(); ++j) {
        const auto i = static_cast<size_t>(j);
        os << format_double(sol.r[i]) << ',' << format_double(sol.w[i]) << ',' << format_double(sol.u[i]) << ','
           << format_double(sol.du_left[i]) << ',' << format_double(sol.du_right[i]) << ','
           << format_double(sol.lamT[i]) << ',' << format_double(sol.lamR[i]) << ','
           << format_double(sol.residual[i]) << "\r\n";
    }
}

void write_spheres_csv(std::ostream& os, const std::vector<SphereReport>& spheres)
{
    os << "r,H0,Hu,area_g,obstruction\r\n";
    for (const auto& s : spheres) {
        os << format_double(s.r) << ',' << format_double(s.H0) << ',' << format_double(s.Hu) << ','
           << format_double(s.area_g) << ',' << format_double(s.obstruction) << "\r\n";
    }
}

} // namespace sklern
