#include "uot/io.hpp"

#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace uot {

using nlohmann::json;

ProblemSpec parse_problem_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("problem file: ") + e.what());
  }
  ProblemSpec spec;
  try {
    spec.n = j.at("n").get<Index>();
    spec.m = j.at("m").get<Index>();
    spec.a = j.at("a").get<Vec>();
    spec.b = j.at("b").get<Vec>();
    spec.c = j.at("cost").get<Vec>();
    spec.lambda = j.value("lambda", 1.0);
    spec.penalty = penalty_from_string(j.value("penalty", std::string("l2")));
    spec.epsilon = j.value("epsilon", 0.0);
  } catch (const json::exception& e) {
    throw ParseError(std::string("problem file: ") + e.what());
  }
  try {
    spec.validate();
  } catch (const Error& e) {
    throw ParseError(std::string("problem file: ") + e.what());
  }
  return spec;
}

ProblemSpec load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open problem file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_problem_json(ss.str());
}

std::string problem_to_json(const ProblemSpec& spec) {
  json j;
  j["n"] = spec.n;
  j["m"] = spec.m;
  j["a"] = spec.a;
  j["b"] = spec.b;
  j["cost"] = spec.c;
  j["lambda"] = spec.lambda;
  j["penalty"] = to_string(spec.penalty);
  j["epsilon"] = spec.epsilon;
  return j.dump(2);
}

void save_problem(const ProblemSpec& spec, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write problem file: " + path);
  out << problem_to_json(spec) << '\n';
}

void write_trace_csv(const std::vector<IterateTrace>& trace, std::ostream& os) {
  os << "iter,primal,dual,gap,screened,elapsed_ns\n";
  os << std::setprecision(17);
  for (const IterateTrace& row : trace) {
    os << row.iter << ',' << row.primal << ',' << row.dual << ',' << row.gap << ','
       << row.screened << ',' << row.elapsed_ns << '\n';
  }
}

void save_trace_csv(const std::vector<IterateTrace>& trace, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write trace file: " + path);
  write_trace_csv(trace, out);
}

}  // namespace uot
