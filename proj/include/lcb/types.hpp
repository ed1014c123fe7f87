#pragma once

#include <cstdint>
#include <vector>

#include "lcb/matrix.hpp"

namespace lcb {

// Feature vector in the unit L2 ball.
struct Action {
  Vec coords;

  Action() = default;
  explicit Action(Vec c);  // throws if the norm exceeds 1 + 1e-9
  std::size_t dim() const { return coords.size(); }
};

// (a, 1): the action embedded in the lifted space.
struct LiftedAction {
  Vec coords;  // length d+1, last entry exactly 1
};

// The per-round context: a finite, nonempty set of actions. `id` is a
// canonical 64-bit hash, insensitive to action order, with coordinates
// quantized at 1e-12; equal ids identify repeated contexts across rounds.
class ActionSet {
 public:
  explicit ActionSet(std::vector<Action> actions);

  const std::vector<Action>& actions() const { return actions_; }
  std::size_t size() const { return actions_.size(); }
  std::size_t dim() const { return actions_.front().dim(); }
  const Action& operator[](std::size_t i) const { return actions_[i]; }
  std::uint64_t id() const { return id_; }

 private:
  std::vector<Action> actions_;
  std::uint64_t id_;
};

// Probability vector aligned with an ActionSet's action ordering.
struct ActionDistribution {
  Vec weights;

  ActionDistribution() = default;
  explicit ActionDistribution(Vec w);  // throws unless nonnegative and sums to 1 within 1e-9
  std::size_t size() const { return weights.size(); }
};

// (d+1)x(d+1) second-moment matrix of lifted actions, E[aa^T] with a=(a,1).
struct LiftedCov {
  Mat matrix;
};

// Check the LiftedCov contract: symmetric within 1e-10, PSD within 1e-9,
// bottom-right entry 1 within 1e-9, trace at most 2 + 1e-9.
bool lifted_cov_valid(const LiftedCov& c, std::string* why = nullptr);

// Adversary loss vector; environments keep it inside the unit ball, the
// loss estimator intentionally does not.
struct LossVector {
  Vec coords;
};

// Lifted loss [[0, y/2], [y^T/2, 0]].
struct LiftedLoss {
  Mat matrix;
};

}  // namespace lcb
