#pragma once

#include <cstdint>

namespace decoy {

struct DistillationInput {
  double t_b = 0.0;    // bit-flip error rate, [0, 0.5]
  double t_p = 0.0;    // phase-flip error rate, [0, 0.5]
  double delta = 0.0;  // verified tagged fraction, [0, 1]
  double n_r = 0.0;    // raw bits

  // Throws DecoyError(kInvalidArgument) when a field is out of range.
  void validate() const;
};

struct DistillationCosts {
  double ec_bits = 0.0;
  double pa_bits = 0.0;
};

double binary_entropy(double t);

// Raw bits consumed by error correction and by privacy amplification. When
// the untagged phase error t_p / (1 - delta) reaches 1/2 (or delta = 1)
// privacy amplification consumes every raw bit.
DistillationCosts distillation_costs(const DistillationInput& in);

// Net secure fraction 1 - H(t_b) - delta - (1 - delta) H(t_p / (1 - delta)),
// floored at zero. n_r is ignored.
double key_fraction(const DistillationInput& in);

}  // namespace decoy
