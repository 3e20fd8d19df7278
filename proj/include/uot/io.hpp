#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "uot/types.hpp"

namespace uot {

// Problem file: JSON object {n, m, a[], b[], cost[], lambda, penalty, epsilon}
// with cost row-major of length n*m and penalty one of "l2"|"kl"|"tv".
ProblemSpec load_problem(const std::string& path);
ProblemSpec parse_problem_json(const std::string& text);
std::string problem_to_json(const ProblemSpec& spec);
void save_problem(const ProblemSpec& spec, const std::string& path);

// Trace file: CSV with header iter,primal,dual,gap,screened,elapsed_ns.
void write_trace_csv(const std::vector<IterateTrace>& trace, std::ostream& os);
void save_trace_csv(const std::vector<IterateTrace>& trace, const std::string& path);

}  // namespace uot
