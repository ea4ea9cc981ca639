#pragma once

#include <vector>

#include "stochround/lp.hpp"

namespace stochround {

struct JmsResult {
  std::vector<int> open;          // ascending facility indices
  std::vector<int> assign;        // per client
  double open_cost = 0;
  double connection_cost = 0;     // demand-weighted
  double cost() const { return open_cost + connection_cost; }
};

// Greedy facility location driven by a growing time budget: unconnected
// clients offer d_j * (t - c_ij) to each unopened facility, connected clients
// offer their potential savings d_j * (cur_j - c_ij); a facility opens when
// offers cover its cost, and everyone with a standing offer (re)connects.
// Event times are found in closed form; simultaneous events process in
// (time, facility, client) order with 1e-12 time tolerance.
class JmsSolver {
 public:
  explicit JmsSolver(const UflSubinstance& sub);

  bool done() const { return connected_ == static_cast<int>(sub_->num_clients()); }
  double time() const { return t_; }

  // Exact time of the next opening or connection; +inf when done.
  double next_event() const;
  void step();

  const std::vector<bool>& open() const { return open_; }
  const std::vector<int>& assignment() const { return assign_; }
  double connection_cost(int client) const { return cur_[client]; }

  JmsResult result() const;  // requires done()

 private:
  struct Event {
    double t = 0;
    int facility = -1;   // facility that opens, or is connected to
    int client = -1;     // -1 for an opening
  };
  Event find_next() const;
  double opening_time(int facility) const;
  void open_facility(int facility);

  const UflSubinstance* sub_;
  double t_ = 0;
  int connected_ = 0;
  std::vector<bool> open_;
  std::vector<int> assign_;      // -1 while unconnected
  std::vector<double> cur_;      // current connection distance, +inf unconnected
};

JmsResult jms_solve(const UflSubinstance& sub);

// Merge clients with identical distance rows, summing demands; out_rep (when
// given) maps each original client to its merged index.  Greedy behavior is
// unchanged, the event queue just gets shorter.
UflSubinstance coalesce_clients(const UflSubinstance& sub, std::vector<int>* out_rep = nullptr);

}  // namespace stochround
