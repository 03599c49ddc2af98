#include "decoy/keyrate.h"

#include <algorithm>
#include <cmath>

#include "decoy/error.h"

namespace decoy {

void DistillationInput::validate() const {
  if (!(t_b >= 0.0 && t_b <= 0.5)) throw DecoyError(ErrorCode::kInvalidArgument, "t_b must lie in [0, 0.5]");
  if (!(t_p >= 0.0 && t_p <= 0.5)) throw DecoyError(ErrorCode::kInvalidArgument, "t_p must lie in [0, 0.5]");
  if (!(delta >= 0.0 && delta <= 1.0)) throw DecoyError(ErrorCode::kInvalidArgument, "delta must lie in [0, 1]");
  if (!(n_r >= 0.0) || !std::isfinite(n_r)) throw DecoyError(ErrorCode::kInvalidArgument, "n_r must be >= 0");
}

double binary_entropy(double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw DecoyError(ErrorCode::kInvalidArgument, "entropy argument must lie in [0, 1]");
  if (t == 0.0 || t == 1.0) return 0.0;
  return -t * std::log2(t) - (1.0 - t) * std::log2(1.0 - t);
}

namespace {

// Privacy-amplification cost per raw bit.
double pa_fraction(const DistillationInput& in) {
  if (in.delta >= 1.0) return 1.0;
  const double untagged_phase = in.t_p / (1.0 - in.delta);
  if (untagged_phase > 0.5) return 1.0;
  return std::min(1.0, in.delta + (1.0 - in.delta) * binary_entropy(untagged_phase));
}

}  // namespace

DistillationCosts distillation_costs(const DistillationInput& in) {
  in.validate();
  return {in.n_r * binary_entropy(in.t_b), in.n_r * pa_fraction(in)};
}

double key_fraction(const DistillationInput& in) {
  in.validate();
  return std::max(0.0, 1.0 - binary_entropy(in.t_b) - pa_fraction(in));
}

}  // namespace decoy
