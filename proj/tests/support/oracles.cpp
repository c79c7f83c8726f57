#include "oracles.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace oracle {

Q tv_sup(const std::map<std::string, Q>& mu0, const std::map<std::string, Q>& mu1) {
  std::vector<std::string> support;
  for (const auto& [k, v] : mu0) support.push_back(k);
  for (const auto& [k, v] : mu1) {
    if (!mu0.count(k)) support.push_back(k);
  }
  auto mass = [](const std::map<std::string, Q>& mu, const std::string& k) {
    auto it = mu.find(k);
    return it == mu.end() ? Q(0) : it->second;
  };
  Q best = 0;
  const std::size_t n = support.size();
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << n); ++bits) {
    Q a = 0;
    Q b = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (bits >> i & 1) {
        a += mass(mu0, support[i]);
        b += mass(mu1, support[i]);
      }
    }
    Q d = abs(a - b);
    if (d > best) best = d;
  }
  return best;
}

Q ground_power(Ground g, const Point& a, const Point& b) {
  switch (g) {
    case Ground::discrete:
      return a == b ? Q(0) : Q(1);
    case Ground::l1: {
      Q s = 0;
      for (std::size_t i = 0; i < a.size(); ++i) s += abs(a[i] - b[i]);
      return s;
    }
    case Ground::l2: {
      Q s = 0;
      for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
      return s;
    }
    case Ground::linf: {
      Q s = 0;
      for (std::size_t i = 0; i < a.size(); ++i) s = std::max(s, Q(abs(a[i] - b[i])));
      return s;
    }
  }
  return 0;
}

bool hall_feasible(Ground g, const std::vector<Weighted>& mu0, const std::vector<Weighted>& mu1,
                   const Q& threshold) {
  const std::size_t n = mu0.size();
  for (std::uint64_t bits = 1; bits < (std::uint64_t{1} << n); ++bits) {
    Q supply = 0;
    std::vector<bool> reach(mu1.size(), false);
    for (std::size_t i = 0; i < n; ++i) {
      if (!(bits >> i & 1)) continue;
      supply += mu0[i].mass;
      for (std::size_t j = 0; j < mu1.size(); ++j) {
        if (ground_power(g, mu0[i].point, mu1[j].point) <= threshold) reach[j] = true;
      }
    }
    Q demand = 0;
    for (std::size_t j = 0; j < mu1.size(); ++j) {
      if (reach[j]) demand += mu1[j].mass;
    }
    if (supply > demand) return false;
  }
  return true;
}

Q winf_hall(Ground g, const std::vector<Weighted>& mu0, const std::vector<Weighted>& mu1) {
  std::set<Q> candidates;
  for (const auto& a : mu0) {
    for (const auto& b : mu1) candidates.insert(ground_power(g, a.point, b.point));
  }
  for (const Q& t : candidates) {
    if (hall_feasible(g, mu0, mu1, t)) return t;
  }
  return -1;  // unreachable for valid distributions
}

}  // namespace oracle

namespace oracle {

Q confusion_rate(const std::string& kind, const std::vector<Row>& rows, const std::string& label) {
  std::int64_t tp = 0, fp = 0, fn = 0, tn = 0;
  for (const auto& r : rows) {
    bool pos = r.yhat == label;
    bool act = r.y == label;
    if (pos && act) ++tp;
    else if (pos) ++fp;
    else if (act) ++fn;
    else ++tn;
  }
  auto frac = [](std::int64_t num, std::int64_t den) {
    if (den == 0) return Q(-1);
    Q q(num, den);
    q.canonicalize();
    return q;
  };
  std::int64_t all = tp + fp + fn + tn;
  if (kind == "precision") return frac(tp, tp + fp);
  if (kind == "recall") return frac(tp, tp + fn);
  if (kind == "accuracy") return frac(tp + tn, all);
  if (kind == "prevalence") return frac(tp + fn, all);
  if (kind == "fdr") return frac(fp, tp + fp);
  if (kind == "for") return frac(fn, fn + tn);
  if (kind == "npv") return frac(tn, fn + tn);
  if (kind == "fallout") return frac(fp, fp + tn);
  if (kind == "specificity") return frac(tn, fp + tn);
  if (kind == "missrate") return frac(fn, tp + fn);
  throw std::invalid_argument("unknown kind " + kind);
}

}  // namespace oracle
