#include "mlspec/divergence.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <vector>

#include "mlspec/error.hpp"

namespace mlspec {

// ---------------------------------------------------------------- metrics

MetricSpec MetricSpec::discrete(std::string variable) {
  return {Kind::discrete, 1, std::move(variable)};
}

MetricSpec MetricSpec::lp(unsigned p, std::string variable) {
  if (p == 0) throw Error(ErrorCode::UnknownKind, "l0 is not a metric");
  return {Kind::lp, p, std::move(variable)};
}

MetricSpec MetricSpec::linf(std::string variable) { return {Kind::lp, 0, std::move(variable)}; }

std::string MetricSpec::to_string() const {
  if (kind == Kind::discrete) return "discrete";
  if (p == 0) return "linf";
  return "l" + std::to_string(p);
}

MetricSpec MetricSpec::parse(std::string_view text, std::string variable) {
  if (text == "discrete") return discrete(std::move(variable));
  if (text == "linf") return linf(std::move(variable));
  if (text.size() >= 2 && text.front() == 'l' &&
      std::all_of(text.begin() + 1, text.end(), [](char c) { return c >= '0' && c <= '9'; }) &&
      text[1] != '0' && text.size() <= 4) {
    return lp(static_cast<unsigned>(std::stoul(std::string(text.substr(1)))), std::move(variable));
  }
  throw Error(ErrorCode::UnknownKind,
              "unknown metric '" + std::string(text) +
                  "' (expected discrete, linf, or l<p> with integer p >= 1)");
}

// --------------------------------------------------------------- distance

Distance::Distance(Rational power, unsigned root) : power_(std::move(power)), root_(root) {
  if (root_ == 0) throw std::invalid_argument("distance root must be positive");
  if (power_ < 0) throw std::invalid_argument("distance must be non-negative");
}

bool operator==(const Distance& a, const Distance& b) {
  if (a.root_ == b.root_) return a.power_ == b.power_;
  return pow(a.power_, b.root_) == pow(b.power_, a.root_);
}

bool operator<(const Distance& a, const Distance& b) {
  if (a.root_ == b.root_) return a.power_ < b.power_;
  return pow(a.power_, b.root_) < pow(b.power_, a.root_);
}

bool Distance::at_most(const Rational& bound) const {
  if (bound < 0) return false;
  if (root_ == 1) return power_ <= bound;
  return power_ <= pow(bound, root_);
}

std::optional<Rational> Distance::exact_value() const {
  if (root_ == 1) return power_;
  mpz_class num;
  mpz_class den;
  if (mpz_root(num.get_mpz_t(), power_.get_num_mpz_t(), root_) == 0) return std::nullopt;
  if (mpz_root(den.get_mpz_t(), power_.get_den_mpz_t(), root_) == 0) return std::nullopt;
  Rational r(num, den);
  r.canonicalize();
  return r;
}

std::string Distance::exact_string() const {
  if (auto v = exact_value()) return to_exact_string(*v);
  return to_exact_string(power_) + "^(1/" + std::to_string(root_) + ")";
}

std::string Distance::decimal() const {
  if (auto v = exact_value()) return to_decimal(*v);
  double approx = std::pow(power_.get_d(), 1.0 / static_cast<double>(root_));
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", approx);
  return buf;
}

namespace {

Distance lp_distance(unsigned p, const NumVec& a, const NumVec& b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::IncompatibleValues,
                "feature vectors of dimension " + std::to_string(a.size()) + " and " +
                    std::to_string(b.size()));
  }
  Rational acc = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    Rational d = a[i] - b[i];
    if (d < 0) d = -d;
    if (p == 0) {
      if (d > acc) acc = d;
    } else if (p == 1) {
      acc += d;
    } else {
      acc += pow(d, p);
    }
  }
  if (p <= 1) return Distance(acc);
  return Distance(acc, p);
}

NumVec flatten(const Outcome& o) {
  NumVec out;
  for (const auto& v : o) {
    if (!v.is_numeric()) {
      throw Error(ErrorCode::IncompatibleValues,
                  "lp metric applied to label '" + v.symbol() + "'");
    }
    const auto& c = v.components();
    out.insert(out.end(), c.begin(), c.end());
  }
  return out;
}

}  // namespace

Distance ground_metric(const MetricSpec& metric, const Value& a, const Value& b) {
  if (metric.kind == MetricSpec::Kind::discrete) return Distance(Rational(a == b ? 0 : 1));
  if (!a.is_numeric() || !b.is_numeric()) {
    throw Error(ErrorCode::IncompatibleValues,
                "lp metric applied to label value (" + a.to_string() + ", " + b.to_string() + ")");
  }
  return lp_distance(metric.p, a.components(), b.components());
}

Distance ground_metric(const MetricSpec& metric, const Outcome& a, const Outcome& b) {
  if (metric.kind == MetricSpec::Kind::discrete) return Distance(Rational(a == b ? 0 : 1));
  if (a.size() == 1 && b.size() == 1) return ground_metric(metric, a.front(), b.front());
  return lp_distance(metric.p, flatten(a), flatten(b));
}

// -------------------------------------------------------- total variation

Rational total_variation(const Distribution& mu0, const Distribution& mu1) {
  Rational gap = 0;
  const auto& m0 = mu0.masses();
  const auto& m1 = mu1.masses();
  auto i = m0.begin();
  auto j = m1.begin();
  while (i != m0.end() || j != m1.end()) {
    if (j == m1.end() || (i != m0.end() && i->first < j->first)) {
      gap += i->second;
      ++i;
    } else if (i == m0.end() || j->first < i->first) {
      gap += j->second;
      ++j;
    } else {
      Rational d = i->second - j->second;
      gap += d < 0 ? Rational(-d) : d;
      ++i;
      ++j;
    }
  }
  return gap / 2;
}

Rational total_variation_counts(std::span<const std::uint64_t> counts0, std::uint64_t total0,
                                std::span<const std::uint64_t> counts1, std::uint64_t total1) {
  if (counts0.size() != counts1.size()) {
    throw std::invalid_argument("count vectors differ in length");
  }
  if (total0 == 0 || total1 == 0) throw std::invalid_argument("empty count vector");

  constexpr std::uint64_t kLimb = std::uint64_t{1} << 32;
  const unsigned __int128 product = static_cast<unsigned __int128>(total0) * total1;
  const bool fits = total0 < kLimb && total1 < kLimb &&
                    product < (static_cast<unsigned __int128>(1) << 62);
  mpz_class gap;
  if (fits) {
    std::uint64_t sum = kernels::active().scaled_abs_diff_sum(counts0, total1, counts1, total0);
    gap = mpz_class(sum);
  } else {
    for (std::size_t i = 0; i < counts0.size(); ++i) {
      mpz_class d = mpz_class(counts0[i]) * total1 - mpz_class(counts1[i]) * total0;
      gap += abs(d);
    }
  }
  Rational tv(gap, mpz_class(total0) * total1 * 2);
  tv.canonicalize();
  return tv;
}

Rational total_variation(const MarginalCounts& a, const MarginalCounts& b) {
  std::vector<std::uint64_t> c0;
  std::vector<std::uint64_t> c1;
  auto i = a.counts.begin();
  auto j = b.counts.begin();
  while (i != a.counts.end() || j != b.counts.end()) {
    if (j == b.counts.end() || (i != a.counts.end() && i->first < j->first)) {
      c0.push_back(i->second);
      c1.push_back(0);
      ++i;
    } else if (i == a.counts.end() || j->first < i->first) {
      c0.push_back(0);
      c1.push_back(j->second);
      ++j;
    } else {
      c0.push_back(i->second);
      c1.push_back(j->second);
      ++i;
      ++j;
    }
  }
  return total_variation_counts(c0, a.total, c1, b.total);
}

// ---------------------------------------------------------- W-infinity

namespace {

// Dinic max-flow over big-integer capacities. Graphs here are four-layered
// (source, supplies, demands, sink), so recursion depth is bounded.
class MaxFlow {
 public:
  explicit MaxFlow(std::size_t nodes) : adjacency_(nodes), level_(nodes), next_(nodes) {}

  void add_edge(std::size_t from, std::size_t to, const mpz_class& capacity) {
    adjacency_[from].push_back(edges_.size());
    edges_.push_back({to, capacity});
    adjacency_[to].push_back(edges_.size());
    edges_.push_back({from, 0});
  }

  mpz_class run(std::size_t source, std::size_t sink) {
    mpz_class flow = 0;
    while (bfs(source, sink)) {
      std::fill(next_.begin(), next_.end(), 0);
      while (true) {
        mpz_class pushed = dfs(source, sink, mpz_class(-1));
        if (pushed == 0) break;
        flow += pushed;
      }
    }
    return flow;
  }

 private:
  struct Edge {
    std::size_t to;
    mpz_class residual;
  };

  bool bfs(std::size_t source, std::size_t sink) {
    std::fill(level_.begin(), level_.end(), -1);
    std::vector<std::size_t> queue{source};
    level_[source] = 0;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      std::size_t u = queue[head];
      for (std::size_t e : adjacency_[u]) {
        if (edges_[e].residual > 0 && level_[edges_[e].to] < 0) {
          level_[edges_[e].to] = level_[u] + 1;
          queue.push_back(edges_[e].to);
        }
      }
    }
    return level_[sink] >= 0;
  }

  // limit < 0 means unbounded.
  mpz_class dfs(std::size_t u, std::size_t sink, const mpz_class& limit) {
    if (u == sink) return limit;
    for (std::size_t& k = next_[u]; k < adjacency_[u].size(); ++k) {
      Edge& e = edges_[adjacency_[u][k]];
      if (e.residual <= 0 || level_[e.to] != level_[u] + 1) continue;
      mpz_class want = (limit < 0 || e.residual < limit) ? e.residual : limit;
      mpz_class got = dfs(e.to, sink, want);
      if (got > 0) {
        e.residual -= got;
        edges_[adjacency_[u][k] ^ 1].residual += got;
        return got;
      }
    }
    return 0;
  }

  std::vector<std::vector<std::size_t>> adjacency_;
  std::vector<Edge> edges_;
  std::vector<int> level_;
  std::vector<std::size_t> next_;
};

struct Transport {
  std::vector<Outcome> sources;
  std::vector<Outcome> sinks;
  std::vector<mpz_class> supply;
  std::vector<mpz_class> demand;
  mpz_class total;
  std::vector<std::vector<Distance>> cost;
};

Transport make_transport(const Distribution& mu0, const Distribution& mu1,
                         const MetricSpec& metric) {
  Transport t;
  t.sources = mu0.support();
  t.sinks = mu1.support();
  mpz_class denominator = 1;
  for (const auto& [o, m] : mu0.masses()) mpz_lcm(denominator.get_mpz_t(), denominator.get_mpz_t(), m.get_den_mpz_t());
  for (const auto& [o, m] : mu1.masses()) mpz_lcm(denominator.get_mpz_t(), denominator.get_mpz_t(), m.get_den_mpz_t());
  t.total = denominator;
  for (const auto& o : t.sources) {
    Rational scaled = mu0[o] * denominator;
    t.supply.push_back(scaled.get_num());
  }
  for (const auto& o : t.sinks) {
    Rational scaled = mu1[o] * denominator;
    t.demand.push_back(scaled.get_num());
  }
  t.cost.resize(t.sources.size());
  for (std::size_t i = 0; i < t.sources.size(); ++i) {
    t.cost[i].reserve(t.sinks.size());
    for (const auto& o : t.sinks) t.cost[i].push_back(ground_metric(metric, t.sources[i], o));
  }
  return t;
}

bool feasible(const Transport& t, const Distance& threshold) {
  const std::size_t n = t.sources.size();
  const std::size_t m = t.sinks.size();
  const std::size_t source = n + m;
  const std::size_t sink = n + m + 1;
  MaxFlow flow(n + m + 2);
  for (std::size_t i = 0; i < n; ++i) flow.add_edge(source, i, t.supply[i]);
  for (std::size_t j = 0; j < m; ++j) flow.add_edge(n + j, sink, t.demand[j]);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (t.cost[i][j] <= threshold) flow.add_edge(i, n + j, t.supply[i]);
    }
  }
  return flow.run(source, sink) == t.total;
}

}  // namespace

bool coupling_feasible(const Distribution& mu0, const Distribution& mu1,
                       const MetricSpec& metric, const Distance& threshold) {
  return feasible(make_transport(mu0, mu1, metric), threshold);
}

Distance wasserstein_inf(const Distribution& mu0, const Distribution& mu1,
                         const MetricSpec& metric) {
  Transport t = make_transport(mu0, mu1, metric);
  std::vector<Distance> candidates;
  for (const auto& row : t.cost) candidates.insert(candidates.end(), row.begin(), row.end());
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  // The optimum is attained at some pairwise distance; the largest one is
  // always feasible (every pair allowed).
  std::size_t lo = 0;
  std::size_t hi = candidates.size() - 1;
  while (lo < hi) {
    std::size_t mid = lo + (hi - lo) / 2;
    if (feasible(t, candidates[mid])) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return candidates[lo];
}

// ---------------------------------------------------------------- dispatch

std::string DivergenceSpec::to_string() const {
  if (kind == Kind::tv) return "tv";
  if (!metric) return "winf";
  return "winf(" + metric->to_string() + ")";
}

Distance divergence(const DivergenceSpec& spec, const Distribution& mu0, const Distribution& mu1,
                    const MetricSpec* fallback_metric) {
  if (spec.kind == DivergenceSpec::Kind::tv) return Distance(total_variation(mu0, mu1));
  const MetricSpec* metric = spec.metric ? &*spec.metric : fallback_metric;
  if (metric == nullptr) {
    throw Error(ErrorCode::IncompatibleValues, "winf divergence needs a ground metric");
  }
  return wasserstein_inf(mu0, mu1, *metric);
}

}  // namespace mlspec
