#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "sklern/expansion.hpp"
#include "sklern/geometry.hpp"
#include "sklern/radial.hpp"

namespace sklern {

/// {n, k, kappa[], mu, order, coefficients: [{p,q,value}], c_n1, residual_order, ...}
std::string expansion_json(const ExpansionTable& t);
std::string corner_json(const std::optional<CornerRecord>& c);
std::string barrier_json(const BarrierReport& b);
std::string minimal_sphere_json(const MinimalSphere& m);
/// Summary of a solve: domain, grid, convergence, residual, corner.
std::string solution_json(const RadialSolution& sol);

/// Columns r, w, u, u'_left, u'_right, lamT, lamR, residual with 17 significant digits.
void write_solution_csv(std::ostream& os, const RadialSolution& sol);
/// Columns r, H0, Hu, area_g, obstruction.
void write_spheres_csv(std::ostream& os, const std::vector<SphereReport>& spheres);

/// %.17g formatting; non-finite values print as nan / inf / -inf.
std::string format_double(double v);

} // namespace sklern
