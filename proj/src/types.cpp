#include "lcb/types.hpp"

#include <algorithm>
#include <cmath>

namespace lcb {

Action::Action(Vec c) : coords(std::move(c)) {
  if (coords.empty()) throw std::invalid_argument("Action: empty coordinate vector");
  if (norm2(coords) > 1.0 + 1e-9)
    throw std::invalid_argument("Action: L2 norm exceeds the unit ball");
}

namespace {

std::uint64_t fnv1a(std::uint64_t h, const void* data, std::size_t len) {
  const unsigned char* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 1099511628211ULL;
  }
  return h;
}

std::vector<std::int64_t> quantize(const Action& a) {
  std::vector<std::int64_t> q(a.coords.size());
  for (std::size_t i = 0; i < q.size(); ++i)
    q[i] = static_cast<std::int64_t>(std::llround(a.coords[i] * 1e12));
  return q;
}

}  // namespace

ActionSet::ActionSet(std::vector<Action> actions) : actions_(std::move(actions)) {
  if (actions_.empty()) throw std::invalid_argument("ActionSet: must be nonempty");
  const std::size_t d = actions_.front().dim();
  for (const Action& a : actions_)
    if (a.dim() != d) throw std::invalid_argument("ActionSet: mixed action dimensions");
  // Order-insensitive id: quantize, sort lexicographically, hash.
  std::vector<std::vector<std::int64_t>> keys;
  keys.reserve(actions_.size());
  for (const Action& a : actions_) keys.push_back(quantize(a));
  std::sort(keys.begin(), keys.end());
  std::uint64_t h = 1469598103934665603ULL;
  h = fnv1a(h, &d, sizeof(d));
  for (const auto& k : keys) h = fnv1a(h, k.data(), k.size() * sizeof(std::int64_t));
  id_ = h;
}

ActionDistribution::ActionDistribution(Vec w) : weights(std::move(w)) {
  if (weights.empty()) throw std::invalid_argument("ActionDistribution: empty");
  double sum = 0.0;
  for (double x : weights) {
    if (x < -1e-12) throw std::invalid_argument("ActionDistribution: negative weight");
    sum += x;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw std::invalid_argument("ActionDistribution: weights do not sum to 1");
}

bool lifted_cov_valid(const LiftedCov& c, std::string* why) {
  const Mat& m = c.matrix;
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  if (m.rows() != m.cols() || m.rows() == 0) return fail("not square");
  const std::size_t n = m.rows();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::abs(m(i, j) - m(j, i)) > 1e-10) return fail("not symmetric at 1e-10");
  if (std::abs(m(n - 1, n - 1) - 1.0) > 1e-9) return fail("bottom-right entry is not 1");
  if (m.trace() > 2.0 + 1e-9) return fail("trace exceeds 2");
  if (min_eigenvalue(m) < -1e-9) return fail("not PSD at -1e-9");
  if (why) why->clear();
  return true;
}

}  // namespace lcb
