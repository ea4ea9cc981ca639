#include "stochround/jms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "stochround/common.hpp"

namespace stochround {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTimeTol = 1e-12;

void validate(const UflSubinstance& sub) {
  if (sub.num_facilities() < 1) throw ValidationError("greedy subproblem without facilities");
  for (double f : sub.open_cost)
    if (!(f >= 0) || !std::isfinite(f)) throw ValidationError("facility cost must be finite, >= 0");
  if (static_cast<int>(sub.dist.size()) != sub.num_clients())
    throw ValidationError("distance table rows != clients");
  for (int j = 0; j < sub.num_clients(); ++j) {
    if (!(sub.demand[j] > 0)) throw ValidationError("client demand must be positive");
    if (static_cast<int>(sub.dist[j].size()) != sub.num_facilities())
      throw ValidationError("distance table columns != facilities");
    for (double c : sub.dist[j])
      if (!(c >= 0) || !std::isfinite(c)) throw ValidationError("distance must be finite, >= 0");
  }
}
}  // namespace

JmsSolver::JmsSolver(const UflSubinstance& sub) : sub_(&sub) {
  validate(sub);
  open_.assign(sub.num_facilities(), false);
  assign_.assign(sub.num_clients(), -1);
  cur_.assign(sub.num_clients(), kInf);
}

// Smallest t >= t_ at which facility i's offers reach its cost; +inf if they
// never do.  Offers from connected clients are constant in t, so the search
// is over the piecewise-linear unconnected part.
double JmsSolver::opening_time(int i) const {
  double base = 0;  // constant offers: connected clients' savings
  std::vector<std::pair<double, double>> ramp;  // (start distance, demand)
  for (int j = 0; j < sub_->num_clients(); ++j) {
    double c = sub_->dist[j][i];
    if (assign_[j] >= 0) {
      base += sub_->demand[j] * std::max(cur_[j] - c, 0.0);
    } else {
      ramp.emplace_back(c, sub_->demand[j]);
    }
  }
  const double need = sub_->open_cost[i];
  if (base >= need - kTimeTol) return t_;
  std::sort(ramp.begin(), ramp.end());

  double value = base, slope = 0, at = t_;
  std::size_t k = 0;
  while (k < ramp.size() && ramp[k].first <= at) {
    value += ramp[k].second * (at - ramp[k].first);
    slope += ramp[k].second;
    ++k;
  }
  while (true) {
    double segment_end = k < ramp.size() ? ramp[k].first : kInf;
    if (slope > 0) {
      double hit = at + (need - value) / slope;
      if (hit <= segment_end) return std::max(hit, t_);
    }
    if (k == ramp.size()) return kInf;
    value += slope * (segment_end - at);
    at = segment_end;
    slope += ramp[k].second;
    ++k;
  }
}

JmsSolver::Event JmsSolver::find_next() const {
  Event best;
  best.t = kInf;
  auto better = [](const Event& a, const Event& b) {
    if (a.t < b.t - kTimeTol) return true;
    if (a.t > b.t + kTimeTol) return false;
    if (a.facility != b.facility) return a.facility < b.facility;
    return a.client < b.client;  // -1 (opening) before any connection
  };
  auto consider = [&](double t, int facility, int client) {
    if (t >= kInf) return;
    Event e{t, facility, client};
    if (best.t >= kInf || better(e, best)) best = e;
  };
  for (int i = 0; i < sub_->num_facilities(); ++i)
    if (!open_[i]) consider(opening_time(i), i, -1);
  for (int j = 0; j < sub_->num_clients(); ++j) {
    if (assign_[j] >= 0) continue;
    for (int i = 0; i < sub_->num_facilities(); ++i)
      if (open_[i]) consider(std::max(sub_->dist[j][i], t_), i, j);
  }
  return best;
}

double JmsSolver::next_event() const {
  if (done()) return kInf;
  return find_next().t;
}

void JmsSolver::open_facility(int i) {
  open_[i] = true;
  for (int j = 0; j < sub_->num_clients(); ++j) {
    double c = sub_->dist[j][i];
    if (assign_[j] < 0) {
      if (c <= t_ + kTimeTol) {
        assign_[j] = i;
        cur_[j] = c;
        ++connected_;
      }
    } else if (c < cur_[j]) {  // strict improvement only
      assign_[j] = i;
      cur_[j] = c;
    }
  }
}

void JmsSolver::step() {
  if (done()) throw InternalError("greedy step past completion");
  Event ev = find_next();
  if (ev.t >= kInf) throw InternalError("no greedy event found before completion");
  t_ = std::max(t_, ev.t);
  if (ev.client < 0) {
    open_facility(ev.facility);
  } else {
    assign_[ev.client] = ev.facility;
    cur_[ev.client] = sub_->dist[ev.client][ev.facility];
    ++connected_;
  }
}

JmsResult JmsSolver::result() const {
  if (!done()) throw InternalError("greedy result requested before completion");
  JmsResult res;
  res.assign = assign_;
  for (int i = 0; i < sub_->num_facilities(); ++i)
    if (open_[i]) {
      res.open.push_back(i);
      res.open_cost += sub_->open_cost[i];
    }
  for (int j = 0; j < sub_->num_clients(); ++j)
    res.connection_cost += sub_->demand[j] * cur_[j];
  return res;
}

JmsResult jms_solve(const UflSubinstance& sub) {
  JmsSolver solver(sub);
  while (!solver.done()) solver.step();
  return solver.result();
}

UflSubinstance coalesce_clients(const UflSubinstance& sub, std::vector<int>* out_rep) {
  UflSubinstance merged;
  merged.open_cost = sub.open_cost;
  std::vector<int> rep(sub.num_clients(), -1);
  for (int j = 0; j < sub.num_clients(); ++j) {
    for (int k = 0; k < merged.num_clients(); ++k) {
      if (merged.dist[k] == sub.dist[j]) {
        rep[j] = k;
        merged.demand[k] += sub.demand[j];
        break;
      }
    }
    if (rep[j] < 0) {
      rep[j] = merged.num_clients();
      merged.demand.push_back(sub.demand[j]);
      merged.dist.push_back(sub.dist[j]);
    }
  }
  if (out_rep) *out_rep = std::move(rep);
  return merged;
}

}  // namespace stochround
