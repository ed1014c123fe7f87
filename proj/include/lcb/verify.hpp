#pragma once

#include <string>
#include <vector>

#include "lcb/harness.hpp"

namespace lcb {

// One row of the runnable invariant table.
struct VerifyRow {
  std::string name;
  bool pass = false;
  double stat = 0.0;       // measured value
  double threshold = 0.0;  // bound it is compared against
  std::string detail;
};

// --- reusable checks (verify rows and the acceptance suite share these) ---

struct IdentityStats {
  double max_err_trace = 0.0;
  double max_err_bregman = 0.0;
  double max_err_inner = 0.0;
};
// Random lifted matrices: trace identity, Bregman identity, and the
// loss inner-product identity; returns the max absolute errors.
IdentityStats check_exact_identities(int instances, std::uint64_t seed);

// Worst slack of tr(U Sigma^{-1}) - (||u - x||^2_{Sigma^{-1}}/4 - 1/4);
// nonnegative (within 1e-9) means the bound holds.
double check_special_trace_bound(int instances, std::uint64_t seed);

struct FtrlGridStats {
  double max_objective_excess = 0.0;  // solver objective minus grid minimum
  double symmetric_linf = 0.0;        // distance of the {e1,e2} solution from (1/2, 1/2)
};
FtrlGridStats check_ftrl_against_grid(int instances, std::uint64_t seed);

struct DesignStats {
  double basis_uniform_linf = 0.0;   // standard-basis designs vs uniform
  double basis_leverage_err = 0.0;   // |max leverage - d|
  double random_excess = 0.0;        // max leverage minus (rank + tol) on random sets
};
DesignStats check_design(int d_lo, int d_hi, int random_sets, int actions_per_set,
                         int random_d, double tol, std::uint64_t seed);

// Violation rate of H-hat + (3c/2)(d/n) ln(d/delta) I >= H/2 over the trials.
double check_concentration(double c, int d, int n, double delta, int trials,
                           std::uint64_t seed, bool parallel);

// Max per-coordinate |MC mean - closed form| in standard-error units across
// the instances.
double check_conditional_mean(int instances, int draws, std::uint64_t seed, bool parallel);

struct DispatchStats {
  double max_sigma_distance = 0.0;  // worst |rate - 2^{-j-1}| in binomial SEs
  long skipped = 0;
  bool skip_rounds_clean = true;    // skip rounds updated no instance
};
DispatchStats check_stabilise_dispatch(long rounds_per_bucket, std::uint64_t seed);

struct CorralStats {
  bool clamp_ok = true;
  double kkt_residual = 0.0;
  double telescoping_err = 0.0;
  int good_arm_wins = 0;  // seeds where the better arm ends above the weight bar
  int seeds = 0;
};
CorralStats check_corral_master(long T, int seeds, double weight_bar, std::uint64_t seed);

struct ComparatorStats {
  double max_bruteforce_diff = 0.0;  // exact-enumeration disagreement
  double worst_grid_margin = 0.0;    // min over instances of grid_best - comparator
};
ComparatorStats check_comparator(int tiny_instances, int grid_instances, std::uint64_t seed);

// The whole invariant table at its module-level sample counts.
std::vector<VerifyRow> verify_suites(std::uint64_t seed, bool parallel = true);

std::string verify_table(const std::vector<VerifyRow>& rows);
std::string verify_csv(const std::vector<VerifyRow>& rows);

}  // namespace lcb
