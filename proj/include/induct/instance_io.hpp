#pragma once

#include <iosfwd>
#include <string>

#include "induct/model.hpp"

namespace induct {

// Schema "induct-instance/1": line-oriented UTF-8 text with sections params,
// depot, price-curve, vertices, arcs, stationary, dynamic, routes. Numbers are
// printed with enough digits for exact double round-trips.
void write_instance(const Instance& instance, std::ostream& os);
Instance read_instance(std::istream& is);

void save_instance(const Instance& instance, const std::string& path);
Instance load_instance(const std::string& path);

// Schema "induct-solution/1": configuration bits, cost breakdown, and one
// step-list block per vehicle plan.
void write_solution(const Solution& sol, std::ostream& os);
Solution read_solution(std::istream& is);

void save_solution(const Solution& sol, const std::string& path);
Solution load_solution(const std::string& path);

// Shortest exact decimal form of a double (round-trips via strtod).
std::string format_double(double v);

}  // namespace induct
