#include "evolba/trace.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace evolba {

const char* event_name(Event e) {
  switch (e) {
    case Event::init: return "init";
    case Event::sample: return "sample";
    case Event::binsearch: return "binsearch";
    case Event::jump: return "jump";
    case Event::boundary_move: return "boundary-move";
  }
  return "?";
}

Event event_from_name(std::string_view name) {
  if (name == "init") return Event::init;
  if (name == "sample") return Event::sample;
  if (name == "binsearch") return Event::binsearch;
  if (name == "jump") return Event::jump;
  if (name == "boundary-move") return Event::boundary_move;
  throw std::invalid_argument("unknown trace event: " + std::string(name));
}

namespace {

// Fixed formatting so identical traces serialize to identical bytes.
std::string format_l2(double v) {
  if (std::isinf(v)) return "inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void write_trace_csv(std::ostream& os, const AttackTrace& trace) {
  os << "query,best_l2,event\n";
  for (const auto& r : trace.records)
    os << r.query << ',' << format_l2(r.best_l2) << ',' << event_name(r.event)
       << '\n';
}

void write_trace_csv(const std::string& path, const AttackTrace& trace) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write trace: " + path);
  write_trace_csv(os, trace);
}

AttackTrace read_trace_csv(std::istream& is) {
  AttackTrace trace;
  std::string line;
  if (!std::getline(is, line) || line != "query,best_l2,event")
    throw std::runtime_error("trace CSV: bad header");
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto c1 = line.find(',');
    const auto c2 = line.find(',', c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos)
      throw std::runtime_error("trace CSV: bad row: " + line);
    TraceRecord r;
    r.query = static_cast<std::uint32_t>(std::stoul(line.substr(0, c1)));
    const std::string l2s = line.substr(c1 + 1, c2 - c1 - 1);
    r.best_l2 = l2s == "inf" ? std::numeric_limits<double>::infinity()
                             : std::stod(l2s);
    r.event = event_from_name(line.substr(c2 + 1));
    trace.records.push_back(r);
  }
  trace.total_queries =
      trace.records.empty() ? 0 : trace.records.back().query;
  trace.final_l2 = trace.records.empty()
                       ? std::numeric_limits<double>::infinity()
                       : trace.records.back().best_l2;
  return trace;
}

AttackTrace read_trace_csv(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot read trace: " + path);
  return read_trace_csv(is);
}

double best_l2_at(const AttackTrace& trace, std::uint32_t max_query) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& r : trace.records) {
    if (r.query > max_query) break;
    best = r.best_l2;
  }
  return best;
}

std::vector<std::string> check_trace_invariants(const AttackTrace& trace,
                                                std::uint32_t budget) {
  std::vector<std::string> issues;
  std::uint32_t prev_q = 0;
  double prev_best = std::numeric_limits<double>::infinity();
  for (const auto& r : trace.records) {
    if (r.query <= prev_q)
      issues.push_back("query index not strictly increasing at " +
                       std::to_string(r.query));
    if (r.best_l2 > prev_best)
      issues.push_back("best L2 increased at query " + std::to_string(r.query));
    prev_q = r.query;
    prev_best = r.best_l2;
  }
  if (!trace.records.empty() && trace.records.back().query > budget)
    issues.push_back("last query index exceeds budget");
  if (trace.total_queries != trace.records.size())
    issues.push_back("total_queries does not equal the number of records");
  return issues;
}

}  // namespace evolba
