#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lcb/rng.hpp"
#include "lcb/types.hpp"

namespace lcb {

enum class ContextKind { finite_support, sleeping, ball };

// Per-round action-set distribution D.
struct ContextSpec {
  ContextKind kind = ContextKind::sleeping;
  int d = 1;
  // finite_support
  std::vector<std::pair<double, ActionSet>> support;  // probabilities sum to 1
  // sleeping: each unit vector is available independently with probability q,
  // resampled until nonempty.
  double q = 1.0;
  // ball: K i.i.d. uniform draws from the unit ball.
  int K = 1;

  void validate() const;  // throws std::invalid_argument with a field message
};

enum class AdversaryKind { fixed, piecewise, drift };
enum class MisspecMode { none, radial, sign };

// Oblivious loss schedule: a function of t only.
struct AdversarySpec {
  AdversaryKind kind = AdversaryKind::fixed;
  int d = 1;
  std::vector<Vec> vectors;       // fixed: 1 entry; piecewise: per segment
  std::vector<long> switch_rounds;  // piecewise: ascending last rounds of segments 0..k-2
  double omega = 0.0;             // drift: angular rate in the (e1, e2) plane
  double epsilon = 0.0;           // misspecification level
  MisspecMode misspec = MisspecMode::none;

  void validate() const;
};

enum class FeedbackKind { two_point, exact };

struct FeedbackModel {
  FeedbackKind kind = FeedbackKind::two_point;
};

ActionSet draw_context(const ContextSpec& spec, Rng& rng);

// y_t with ||y_t|| <= 1; never reads learner state.
Vec adversary_loss(const AdversarySpec& spec, long t);

// Expected loss f_t(a) in [-1, 1] with |f_t(a) - <a, y_t>| <= epsilon.
double misspec_value(const AdversarySpec& spec, const Action& a, long t);

// two_point: +1 with probability (1+mean)/2, else -1; exact: the mean itself.
double sample_feedback(const FeedbackModel& model, double mean, Rng& rng);

}  // namespace lcb
