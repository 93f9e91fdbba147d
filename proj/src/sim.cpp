#include "tvq/sim.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <exception>
#include <functional>
#include <limits>
#include <ostream>
#include <queue>
#include <stdexcept>
#include <thread>

#include "tvq/csv.hpp"
#include "tvq/error.hpp"

namespace tvq {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

enum class Status : unsigned char { Queued, Served, Abandoned };

struct Customer {
  double arrival;
  double deadline;
  double leave = kInf;  // time the customer left the queue
  Status status = Status::Queued;
};

long grid_count(double horizon, double step) {
  return static_cast<long>(std::floor(horizon / step + 1e-9));
}

}  // namespace

long staffing_level(const ModelSpec& spec, double n, double t) {
  return static_cast<long>(std::ceil(n * spec.staffing.value(t) - 1e-9));
}

std::vector<StaffingChange> staffing_changes(const ModelSpec& spec, double n, double t_end) {
  std::vector<StaffingChange> out;
  if (spec.staffing.kind() == "constant") return out;
  double t = 0.0;
  long level = staffing_level(spec, n, t);
  while (t < t_end) {
    const double rate = n * std::abs(spec.staffing.deriv(t));
    const double ds = std::min({1e-2, 0.25 / (rate + 1e-12), t_end - t});
    const double next = t + ds;
    const long l = staffing_level(spec, n, next);
    if (l != level) {
      double lo = t, hi = next;
      for (int it = 0; it < 80 && hi - lo > 1e-13; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (staffing_level(spec, n, mid) == level) lo = mid; else hi = mid;
      }
      level = staffing_level(spec, n, hi);
      out.push_back({hi, level});
      t = hi;
    } else {
      t = next;
    }
  }
  return out;
}

std::vector<double> gen_arrivals(const ModelSpec& spec, double n, double t_end, Rng& rng) {
  std::vector<double> out;
  const double width = 0.05;
  const int samples = 9;
  for (double a = 0.0; a < t_end; a += width) {
    const double b = std::min(a + width, t_end);
    double vmax = 0.0, dmax = 0.0, d2max = 0.0;
    for (int i = 0; i < samples; ++i) {
      const double x = a + (b - a) * i / (samples - 1);
      vmax = std::max(vmax, spec.lambda.value(x));
      dmax = std::max(dmax, std::abs(spec.lambda.deriv(x)));
      d2max = std::max(d2max, std::abs(spec.lambda.deriv2(x)));
    }
    const double bound = n * (vmax + (b - a) * dmax + (b - a) * (b - a) * d2max);
    if (!(bound > 0.0)) continue;
    double t = a;
    while (true) {
      t += rng.exponential(bound);
      if (t >= b) break;
      const double rate = n * std::max(0.0, spec.lambda.value(t));
      if (rate > bound) throw NumericalError("arrival-rate bound violated during thinning");
      if (rng.uniform() * bound < rate) out.push_back(t);
    }
  }
  return out;
}

bool SamplePath::conserved() const {
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (x0 + N[k] - D[k] - A[k] - forced[k] != X[k]) return false;
  }
  return x0 + final_N - final_D - final_A - final_forced == final_X;
}

SamplePath run_replication(const SimConfig& cfg, int replication) {
  const ModelSpec& m = cfg.spec;
  const double T = cfg.obs_horizon();
  if (T > m.horizon * (1 + 1e-12)) {
    throw std::invalid_argument("observation horizon exceeds the model horizon");
  }
  if (!(cfg.grid_step > 0.0)) throw std::invalid_argument("grid step must be positive");
  if (!(cfg.n >= 1.0)) throw std::invalid_argument("scale n must be >= 1");
  const double t_end = T + std::max(0.0, cfg.tail);
  const auto rep = static_cast<std::uint64_t>(replication);
  Rng r_arrival = Rng::stream(cfg.seed, rep, 0);
  Rng r_service = Rng::stream(cfg.seed, rep, 1);
  Rng r_patience = Rng::stream(cfg.seed, rep, 2);

  const std::vector<double> arrivals = gen_arrivals(m, cfg.n, t_end, r_arrival);
  const std::vector<StaffingChange> changes = staffing_changes(m, cfg.n, t_end);

  const long K = grid_count(T, cfg.grid_step);
  SamplePath p;
  p.t.resize(static_cast<std::size_t>(K + 1));
  for (long k = 0; k <= K; ++k) p.t[static_cast<std::size_t>(k)] = static_cast<double>(k) * cfg.grid_step;
  const std::size_t G = p.t.size();
  for (auto* v : {&p.X, &p.Q, &p.B, &p.A, &p.N, &p.D, &p.E, &p.forced}) v->assign(G, 0);
  p.W.assign(G, 0.0);
  p.V.assign(G, kNaN);
  std::vector<long> front_id(G, -1), tail_id(G, -1), level_at(G, 0);

  std::vector<Customer> cust;
  std::size_t head = 0;  // first customer that may still be queued (FCFS)
  using Deadline = std::pair<double, std::size_t>;
  std::priority_queue<Deadline, std::vector<Deadline>, std::greater<>> deadlines;
  std::vector<double> freed;  // one entry per server that became available

  long level = staffing_level(m, cfg.n, 0.0);
  long B = 0, Q = 0, N = 0, D = 0, A = 0, E = 0, forced = 0;
  const long x0 = std::lround(cfg.n * m.x0);
  p.x0 = x0;
  double now = 0.0;

  auto queue_customer = [&](double arrival) {
    const double deadline = arrival + m.patience.sample(r_patience);
    cust.push_back({arrival, deadline});
    deadlines.emplace(deadline, cust.size() - 1);
    ++Q;
  };
  auto advance_head = [&] {
    while (head < cust.size() && cust[head].status != Status::Queued) ++head;
  };
  auto fill_servers = [&] {
    while (B < level && Q > 0) {
      advance_head();
      Customer& c = cust[head];
      c.status = Status::Served;
      c.leave = now;
      --Q;
      ++B;
      ++E;
    }
  };

  for (long i = 0; i < x0; ++i) {
    if (B < level) {
      ++B;
    } else {
      queue_customer(0.0);
    }
  }

  double next_completion = kInf;
  auto resample_completion = [&] {
    next_completion = B > 0 ? now + r_service.exponential(static_cast<double>(B) * m.mu) : kInf;
  };
  resample_completion();

  std::size_t ai = 0, ci = 0, gk = 0;
  auto record_until = [&](double te) {
    while (gk < G && p.t[gk] < te) {
      p.X[gk] = B + Q;
      p.Q[gk] = Q;
      p.B[gk] = B;
      p.A[gk] = A;
      p.N[gk] = N;
      p.D[gk] = D;
      p.E[gk] = E;
      p.forced[gk] = forced;
      level_at[gk] = level;
      if (Q > 0) {
        advance_head();
        p.W[gk] = p.t[gk] - cust[head].arrival;
        front_id[gk] = static_cast<long>(head);
        tail_id[gk] = static_cast<long>(cust.size()) - 1;
      }
      ++gk;
    }
  };

  while (true) {
    while (!deadlines.empty() && cust[deadlines.top().second].status != Status::Queued) deadlines.pop();
    const double t_arr = ai < arrivals.size() ? arrivals[ai] : kInf;
    const double t_stf = ci < changes.size() ? changes[ci].time : kInf;
    const double t_dl = deadlines.empty() ? kInf : deadlines.top().first;
    const double te = std::min({t_arr, t_stf, t_dl, next_completion});
    if (te > t_end) {
      record_until(kInf);
      break;
    }
    record_until(te);
    now = te;
    const long b_before = B;
    if (te == next_completion) {
      --B;
      ++D;
      freed.push_back(now);
      fill_servers();
      resample_completion();
      continue;
    }
    if (te == t_dl) {
      Customer& c = cust[deadlines.top().second];
      deadlines.pop();
      c.status = Status::Abandoned;
      c.leave = now;
      --Q;
      ++A;
    } else if (te == t_stf) {
      const long old = level;
      level = changes[ci++].level;
      if (level > old) {
        freed.insert(freed.end(), static_cast<std::size_t>(level - old), now);
        fill_servers();
      } else if (B > level) {
        forced += B - level;
        B = level;
      }
    } else {
      ++ai;
      ++N;
      if (B < level) {
        cust.push_back({now, kInf, now, Status::Served});
        ++B;
        ++E;
      } else {
        queue_customer(now);
      }
    }
    if (B != b_before) resample_completion();
  }
  p.final_X = B + Q;
  p.final_N = N;
  p.final_D = D;
  p.final_A = A;
  p.final_forced = forced;

  // V(t): the virtual customer waits until everyone queued at t has left the
  // queue, then takes the next server that becomes available. Sliding-window
  // maximum of leave times over [front_id, tail_id], both nondecreasing in t.
  std::deque<long> window;
  long pushed = -1, popped = -1;
  for (std::size_t k = 0; k < G; ++k) {
    double clear = p.t[k];
    if (front_id[k] >= 0) {
      while (pushed < tail_id[k]) {
        ++pushed;
        while (!window.empty() && cust[static_cast<std::size_t>(window.back())].leave <=
                                      cust[static_cast<std::size_t>(pushed)].leave) {
          window.pop_back();
        }
        window.push_back(pushed);
      }
      popped = std::max(popped, front_id[k] - 1);
      while (!window.empty() && window.front() <= popped) window.pop_front();
      clear = cust[static_cast<std::size_t>(window.front())].leave;
    } else if (p.B[k] < level_at[k]) {
      p.V[k] = 0.0;
      continue;
    }
    if (!std::isfinite(clear)) continue;
    auto it = std::lower_bound(freed.begin(), freed.end(), clear);
    if (front_id[k] >= 0) {
      // Servers freed exactly at `clear` go first to the customers ahead that
      // entered service then; several can free at once on a staffing jump.
      long taken = 0;
      if (std::next(it) != freed.end() && *std::next(it) == clear) {
        for (long id = front_id[k]; id <= tail_id[k]; ++id) {
          const Customer& c = cust[static_cast<std::size_t>(id)];
          if (c.status == Status::Served && c.leave == clear) ++taken;
        }
      } else if (it != freed.end() && *it == clear) {
        taken = 1;
        const Customer& c = cust[static_cast<std::size_t>(window.front())];
        if (c.status != Status::Served) taken = 0;
      }
      it += std::min<long>(taken, freed.end() - it);
    }
    if (it != freed.end()) p.V[k] = *it - p.t[k];
  }
  return p;
}

void write_path_csv(const SamplePath& p, std::ostream& os) {
  CsvWriter csv(os, {"t", "X", "Q", "B", "W", "V", "A", "N", "D", "E", "forced"});
  for (std::size_t k = 0; k < p.t.size(); ++k) {
    csv.cell(p.t[k]);
    for (long v : {p.X[k], p.Q[k], p.B[k]}) csv.cell(static_cast<double>(v));
    csv.cell(p.W[k]).cell(p.V[k]);
    for (long v : {p.A[k], p.N[k], p.D[k], p.E[k], p.forced[k]}) csv.cell(static_cast<double>(v));
    csv.end_row();
  }
}

void RunningStats::add(double x) {
  ++count;
  const double d = x - mean;
  mean += d / static_cast<double>(count);
  m2 += d * (x - mean);
}

void RunningStats::merge(const RunningStats& o) {
  if (o.count == 0) return;
  if (count == 0) {
    *this = o;
    return;
  }
  const double total = static_cast<double>(count + o.count);
  const double d = o.mean - mean;
  mean += d * static_cast<double>(o.count) / total;
  m2 += o.m2 + d * d * static_cast<double>(count) * static_cast<double>(o.count) / total;
  count += o.count;
}

double RunningStats::variance() const {
  return count > 1 ? m2 / static_cast<double>(count - 1) : kNaN;
}

double RunningStats::se() const { return std::sqrt(variance() / static_cast<double>(count)); }

SimEstimate estimate(const SimConfig& cfg) {
  if (cfg.reps < 1) throw std::invalid_argument("replication count must be >= 1");
  SimEstimate e;
  e.n = cfg.n;
  e.reps = cfg.reps;
  const int P = std::max(1, cfg.parallel);
  std::vector<SamplePath> batch;
  for (int first = 0; first < cfg.reps; first += P) {
    const int count = std::min(P, cfg.reps - first);
    batch.assign(static_cast<std::size_t>(count), SamplePath{});
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(count));
    auto work = [&](int j) {
      try {
        batch[static_cast<std::size_t>(j)] = run_replication(cfg, first + j);
      } catch (...) {
        errors[static_cast<std::size_t>(j)] = std::current_exception();
      }
    };
    if (count == 1) {
      work(0);
    } else {
      std::vector<std::thread> threads;
      for (int j = 0; j < count; ++j) threads.emplace_back(work, j);
      for (auto& th : threads) th.join();
    }
    for (const auto& err : errors) {
      if (err) std::rethrow_exception(err);
    }
    for (const SamplePath& p : batch) {
      if (e.t.empty()) {
        e.t = p.t;
        for (auto* v : {&e.X, &e.Q, &e.B, &e.W, &e.V, &e.A}) v->assign(p.t.size(), RunningStats{});
      }
      for (std::size_t k = 0; k < p.t.size(); ++k) {
        e.X[k].add(static_cast<double>(p.X[k]));
        e.Q[k].add(static_cast<double>(p.Q[k]));
        e.B[k].add(static_cast<double>(p.B[k]));
        e.A[k].add(static_cast<double>(p.A[k]));
        e.W[k].add(p.W[k]);
        if (!std::isnan(p.V[k])) e.V[k].add(p.V[k]);
      }
      e.all_conserved = e.all_conserved && p.conserved();
    }
  }
  return e;
}

void write_estimate_csv(const SimEstimate& e, std::ostream& os) {
  CsvWriter csv(os, {"t", "mean_X", "se_X", "var_X", "mean_Q", "var_Q", "mean_B", "var_B",
                     "mean_W", "var_W", "mean_V", "var_V", "mean_X_n", "var_X_n", "mean_Q_n",
                     "var_Q_n", "mean_B_n", "var_B_n", "var_W_n", "var_V_n"});
  const double n = e.n;
  auto mean = [](const RunningStats& s) { return s.count > 0 ? s.mean : kNaN; };
  for (std::size_t k = 0; k < e.t.size(); ++k) {
    for (double v : {e.t[k], mean(e.X[k]), e.X[k].se(), e.X[k].variance(), mean(e.Q[k]),
                     e.Q[k].variance(), mean(e.B[k]), e.B[k].variance(), mean(e.W[k]),
                     e.W[k].variance(), mean(e.V[k]), e.V[k].variance(), mean(e.X[k]) / n,
                     e.X[k].variance() / n, mean(e.Q[k]) / n, e.Q[k].variance() / n,
                     mean(e.B[k]) / n, e.B[k].variance() / n, e.W[k].variance() * n,
                     e.V[k].variance() * n}) {
      csv.cell(v);
    }
    csv.end_row();
  }
}

}  // namespace tvq
