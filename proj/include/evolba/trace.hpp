// Attack trace: one record per oracle query, carrying the best adversarial
// L2 seen so far. This is the quantity all reports aggregate.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

namespace evolba {

enum class Event : std::uint8_t { init, sample, binsearch, jump, boundary_move };

const char* event_name(Event e);
Event event_from_name(std::string_view name);

struct TraceRecord {
  std::uint32_t query = 0;  // 1-based query index
  double best_l2 = std::numeric_limits<double>::infinity();
  Event event = Event::init;

  bool operator==(const TraceRecord&) const = default;
};

struct AttackTrace {
  std::vector<TraceRecord> records;
  std::uint32_t total_queries = 0;
  double final_l2 = std::numeric_limits<double>::infinity();

  bool found() const { return final_l2 < std::numeric_limits<double>::infinity(); }
  bool operator==(const AttackTrace&) const = default;
};

void write_trace_csv(std::ostream& os, const AttackTrace& trace);
void write_trace_csv(const std::string& path, const AttackTrace& trace);
AttackTrace read_trace_csv(std::istream& is);
AttackTrace read_trace_csv(const std::string& path);

// Best adversarial L2 recorded at query_index <= max_query (step-function
// carry-forward); +inf if no adversarial point was seen by then.
double best_l2_at(const AttackTrace& trace, std::uint32_t max_query);

// Returns human-readable violations (empty when the trace is well formed):
// monotone best-so-far, strictly increasing query indices, indices within
// budget, record count equal to total_queries.
std::vector<std::string> check_trace_invariants(const AttackTrace& trace,
                                                std::uint32_t budget);

}  // namespace evolba
