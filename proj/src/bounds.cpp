#include "decoy/bounds.h"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <limits>

#include "decoy/error.h"

namespace decoy {

const char* to_string(BoundMethod method) {
  switch (method) {
    case BoundMethod::kHwang: return "HWANG";
    case BoundMethod::kAsymptotic3: return "ASYMPTOTIC_3";
    case BoundMethod::kFluctuation: return "FLUCTUATION";
    case BoundMethod::kOperational: return "OPERATIONAL";
  }
  return "UNKNOWN";
}

BoundMethod parse_bound_method(const std::string& name) {
  std::string lower;
  for (char ch : name) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
  if (lower == "hwang") return BoundMethod::kHwang;
  if (lower == "asymptotic" || lower == "asymptotic_3") return BoundMethod::kAsymptotic3;
  if (lower == "fluctuation") return BoundMethod::kFluctuation;
  if (lower == "operational") return BoundMethod::kOperational;
  throw DecoyError(ErrorCode::kInvalidArgument, "unknown bound method '" + name + "'");
}

void FluctuationParams::validate() const {
  if (!(N_mu >= 1.0 && N_mup >= 1.0 && N_0 >= 1.0)) {
    throw DecoyError(ErrorCode::kInvalidArgument, "pulse counts must be >= 1");
  }
  if (!(coefficient > 0.0) || !std::isfinite(coefficient)) {
    throw DecoyError(ErrorCode::kInvalidArgument, "confidence coefficient must be > 0");
  }
  if (!(r0 >= 0.0 && r0 < 1.0)) {
    throw DecoyError(ErrorCode::kInvalidArgument, "r0 must lie in [0,1)");
  }
}

namespace {

void require_pair(Intensity mu, Intensity mup) {
  if (!validate_pair(mu, mup)) {
    throw DecoyError(ErrorCode::kInvalidPair, "need mu' > mu > 0 and mu' e^-mu' > mu e^-mu");
  }
}

void require_signal_rate(const ObservedRates& rates) {
  rates.validate();
  if (rates.S_mu <= 0.0) throw DecoyError(ErrorCode::kZeroRate, "S_mu is zero");
}

// Fills the derived fields of an asymptotic-style result from delta.
BoundResult finish(BoundMethod method, double delta, Intensity mu, const ObservedRates& rates) {
  const double m = mu.value();
  const double c = multi_photon_weight(mu);
  BoundResult out;
  out.method = method;
  out.delta = std::clamp(delta, 0.0, 1.0);
  out.sc_upper = out.delta * rates.S_mu / c;
  const double single = rates.S_mu - std::exp(-m) * rates.S0 - c * out.sc_upper;
  out.s1_lower = std::max(0.0, single / (m * std::exp(-m)));
  out.untagged_lower = std::max(0.0, single / rates.S_mu);
  return out;
}

// Two-source constraint system in click-fraction coordinates:
//   x = (weight of rho_c in A) * s_c,  y = (weight of |1> in A) * s_1,
//   vacuum_A + y + x = S_mu,
//   vacuum_A' + a (1 - r1) y + b (1 - rc) x <= S_mu',
// with r1 y = k sqrt(y / n_single) and rc x = k sqrt(x / n_multi).
struct ConstraintSystem {
  double S = 0.0;
  double Sp = 0.0;
  double vacuum_A = 0.0;
  double vacuum_Ap = 0.0;
  double a = 0.0;
  double b = 0.0;
  double k = 0.0;
  double n_single = std::numeric_limits<double>::infinity();
  double n_multi = std::numeric_limits<double>::infinity();

  double budget() const { return S - vacuum_A; }

  double fluct(double v, double n) const { return v > 0.0 ? k * std::sqrt(v / n) : 0.0; }

  // Convex in x; the feasible set {h <= 0} is an interval.
  double h(double x) const {
    const double y = budget() - x;
    return b * (x - fluct(x, n_multi)) + a * (y - fluct(y, n_single)) + vacuum_Ap - Sp;
  }
};

struct SolveOutcome {
  double x = 0.0;
  int iterations = 0;
  bool failed_closed = false;
};

constexpr int kMaxFixedPointIterations = 200;

std::optional<SolveOutcome> fixed_point(const ConstraintSystem& sys) {
  const double A = sys.budget();
  double x = 0.0;
  double y = A;
  double r1_term = 0.0;  // r1 * y from the previous iterate
  double rc = 0.0;
  for (int it = 1; it <= kMaxFixedPointIterations; ++it) {
    const double coeff = sys.b * (1.0 - rc) - sys.a;
    if (coeff <= 0.0) return std::nullopt;
    const double next = (sys.Sp - sys.vacuum_Ap - sys.a * A + sys.a * r1_term) / coeff;
    if (!(next > 0.0) || next > A) return std::nullopt;
    const bool done = it > 1 && std::abs(next - x) <= 1e-13 * sys.S;
    x = next;
    y = A - x;
    r1_term = sys.fluct(y, sys.n_single);
    rc = sys.fluct(x, sys.n_multi) / x;
    if (done) return SolveOutcome{x, it, false};
  }
  return std::nullopt;
}

// Largest root of the convex h on [0, A] by golden-section minimisation
// followed by bisection.
SolveOutcome bracketed(const ConstraintSystem& sys) {
  const double A = sys.budget();
  constexpr double kInvPhi = 0.6180339887498949;
  double lo = 0.0;
  double hi = A;
  double m1 = hi - kInvPhi * (hi - lo);
  double m2 = lo + kInvPhi * (hi - lo);
  double f1 = sys.h(m1);
  double f2 = sys.h(m2);
  int it = 0;
  for (; it < 200 && hi - lo > 1e-16 * A; ++it) {
    if (f1 < f2) {
      hi = m2, m2 = m1, f2 = f1;
      m1 = hi - kInvPhi * (hi - lo);
      f1 = sys.h(m1);
    } else {
      lo = m1, m1 = m2, f1 = f2;
      m2 = lo + kInvPhi * (hi - lo);
      f2 = sys.h(m2);
    }
  }
  double x_min = f1 < f2 ? m1 : m2;
  for (double edge : {0.0, A}) {
    if (sys.h(edge) < sys.h(x_min)) x_min = edge;
  }
  if (sys.h(x_min) > 0.0) {
    throw DecoyError(ErrorCode::kNoSolution,
                     "no tagged fraction is consistent with the observed rates at this confidence");
  }
  lo = x_min;
  hi = A;
  for (int j = 0; j < 200 && hi - lo > 1e-17 * A; ++j, ++it) {
    const double mid = 0.5 * (lo + hi);
    (sys.h(mid) <= 0.0 ? lo : hi) = mid;
  }
  if (!(hi - lo <= 1e-12 * A)) {
    throw DecoyError(ErrorCode::kNoSolution, "bisection bracket did not collapse");
  }
  return {lo, it, false};
}

SolveOutcome solve(const ConstraintSystem& sys) {
  const double A = sys.budget();
  if (!(A > 0.0)) {
    throw DecoyError(ErrorCode::kNoSolution, "vacuum contribution exceeds the signal rate");
  }
  if (sys.h(A) <= 0.0) return {A, 0, true};
  if (auto fp = fixed_point(sys)) {
    // Accept only the larger root: h must be increasing through it.
    const double probe = std::min(A, fp->x * (1.0 + 1e-6) + 1e-12 * A);
    const double scale = sys.b * sys.S;
    if (std::abs(sys.h(fp->x)) <= 1e-10 * scale && sys.h(probe) > sys.h(fp->x)) return *fp;
  }
  return bracketed(sys);
}

struct ClassWeights {
  double p0 = 0.0;
  double p1 = 0.0;
  double c = 0.0;
};

ConstraintSystem build_system(const ObservedRates& rates, const FluctuationParams& params,
                              const ClassWeights& A, const ClassWeights& Ap) {
  ConstraintSystem sys;
  sys.S = rates.S_mu;
  sys.Sp = rates.S_mup;
  sys.vacuum_A = A.p0 * rates.S0;
  sys.vacuum_Ap = Ap.p0 * (1.0 - params.r0) * rates.S0;
  sys.a = Ap.p1 / A.p1;
  sys.b = Ap.c / A.c;
  sys.k = params.coefficient;
  // Fluctuation pools: the smaller of the two sources' expected populations of
  // each state, expressed in units of source-A pulses.
  sys.n_single = std::min(params.N_mu, params.N_mup * sys.a);
  sys.n_multi = std::min(params.N_mu, params.N_mup * sys.b);
  return sys;
}

ClassWeights nominal_signal(Intensity mu) {
  const auto d = decompose(mu);
  return {d.p0, d.p1, d.c};
}

ClassWeights nominal_decoy(Intensity mu, Intensity mup) {
  const auto r = residual_decompose(mu, mup);
  return {r.p0p, r.p1p, r.c_coeff};
}

std::string fluctuation_note(double coefficient) {
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "each cross-source rate comparison fails with probability < exp(-%.6g^2/4) = %.3g",
                coefficient, std::exp(-coefficient * coefficient / 4.0));
  return buf;
}

struct CornerResult {
  double delta = 1.0;
  double s1 = 0.0;
  double untagged = 0.0;
  double r1 = 0.0;
  double rc = 0.0;
  int iterations = 0;
  bool failed_closed = false;
};

CornerResult solve_corner(const ObservedRates& rates, const FluctuationParams& params,
                          const ClassWeights& A, const ClassWeights& Ap) {
  const auto sys = build_system(rates, params, A, Ap);
  const auto sol = solve(sys);
  CornerResult out;
  out.iterations = sol.iterations;
  if (sol.failed_closed) {
    out.failed_closed = true;
    return out;
  }
  const double y = sys.budget() - sol.x;
  out.delta = sol.x / rates.S_mu;
  out.s1 = y / A.p1;
  out.untagged = y / rates.S_mu;
  out.r1 = y > 0.0 ? sys.fluct(y, sys.n_single) / y : 0.0;
  out.rc = sol.x > 0.0 ? sys.fluct(sol.x, sys.n_multi) / sol.x : 0.0;
  return out;
}

BoundResult to_result(BoundMethod method, const CornerResult& corner, Intensity mu, Intensity mup,
                      const ObservedRates& rates) {
  BoundResult out;
  out.method = method;
  out.iterations = corner.iterations;
  out.failed_closed = corner.failed_closed;
  out.delta = std::clamp(corner.delta, 0.0, 1.0);
  out.sc_upper = out.delta * rates.S_mu / multi_photon_weight(mu);
  out.s1_lower = std::max(0.0, corner.s1);
  out.untagged_lower = std::clamp(corner.untagged, 0.0, 1.0);
  out.r1 = corner.r1;
  out.rc = corner.rc;
  if (rates.S_mup > 0.0) out.delta_prime = delta_prime(mu, mup, out.delta_with_vacuum(), rates);
  return out;
}

}  // namespace

BoundResult hwang_delta(Intensity mu, Intensity mup, const ObservedRates& rates) {
  require_pair(mu, mup);
  require_signal_rate(rates);
  const double m = mu.value();
  const double mp = mup.value();
  const double delta = m * m * std::exp(-m) * rates.S_mup / (mp * mp * std::exp(-mp) * rates.S_mu);
  return finish(BoundMethod::kHwang, std::min(delta, 1.0), mu, rates);
}

BoundResult asymptotic_delta(Intensity mu, Intensity mup, const ObservedRates& rates) {
  require_pair(mu, mup);
  require_signal_rate(rates);
  const double m = mu.value();
  const double mp = mup.value();
  const double ratio = m * std::exp(-m) * rates.S_mup / (mp * std::exp(-mp) * rates.S_mu);
  const double delta =
      m / (mp - m) * (ratio - 1.0) + m * std::exp(-m) * rates.S0 / (mp * rates.S_mu);
  if (delta < -1e-12) {
    throw DecoyError(ErrorCode::kNegativeBound,
                     "S_mu'/S_mu lies below the vacuum plus single-photon floor");
  }
  auto out = finish(BoundMethod::kAsymptotic3, delta, mu, rates);
  if (rates.S_mup > 0.0) out.delta_prime = delta_prime(mu, mup, out.delta_with_vacuum(), rates);
  return out;
}

double delta_prime(Intensity mu, Intensity mup, double delta, const ObservedRates& rates) {
  if (!(delta >= 0.0 && delta <= 1.0)) {
    throw DecoyError(ErrorCode::kInvalidArgument, "delta must lie in [0,1]");
  }
  if (rates.S_mu <= 0.0 || rates.S_mup <= 0.0) {
    throw DecoyError(ErrorCode::kZeroRate, "delta' needs S_mu > 0 and S_mu' > 0");
  }
  const double m = mu.value();
  const double mp = mup.value();
  const double single_share = 1.0 - delta - std::exp(-m) * rates.S0 / rates.S_mu;
  const double value = 1.0 - single_share * std::exp(m - mp) - std::exp(-mp) * rates.S0 / rates.S_mup;
  return std::clamp(value, 0.0, 1.0);
}

double relative_fluctuation(double s, double N0, double coefficient) {
  if (!(s > 0.0)) throw DecoyError(ErrorCode::kZeroRate, "counting rate must be > 0");
  if (!(N0 >= 1.0)) throw DecoyError(ErrorCode::kInvalidArgument, "N0 must be >= 1");
  return coefficient * std::sqrt(1.0 / (s * N0));
}

double violation_probability(double delta_abs, double s, double N0) {
  if (!(s > 0.0)) throw DecoyError(ErrorCode::kZeroRate, "counting rate must be > 0");
  return std::exp(-delta_abs * delta_abs * N0 / (4.0 * s));
}

BoundResult fluctuation_delta(Intensity mu, Intensity mup, const ObservedRates& rates,
                              const FluctuationParams& params) {
  require_pair(mu, mup);
  require_signal_rate(rates);
  params.validate();
  const auto corner = solve_corner(rates, params, nominal_signal(mu), nominal_decoy(mu, mup));
  auto out = to_result(BoundMethod::kFluctuation, corner, mu, mup, rates);
  out.confidence_note = fluctuation_note(params.coefficient);
  return out;
}

BoundResult operational_error_delta(Intensity mu, Intensity mup, const ObservedRates& rates,
                                    const FluctuationParams& params, const EpsilonCaps& caps) {
  require_pair(mu, mup);
  require_signal_rate(rates);
  params.validate();
  const std::array<double, 6> cap{caps.signal.eps0, caps.signal.eps1, caps.signal.eps_c,
                                  caps.decoy.eps0,  caps.decoy.eps1,  caps.decoy.eps_c};
  for (double e : cap) {
    if (!(e >= 0.0 && e < 0.5)) {
      throw DecoyError(ErrorCode::kInvalidArgument, "epsilon caps must lie in [0, 0.5)");
    }
  }

  const ClassWeights A = nominal_signal(mu);
  const ClassWeights Ap = nominal_decoy(mu, mup);
  const CornerResult reference = solve_corner(rates, params, A, Ap);

  // The worst corner maximises delta; s1 and the untagged fraction are
  // minimised independently so each reported quantity is a bound in its own
  // right. Corners are visited in a fixed order.
  CornerResult worst;
  worst.delta = -1.0;
  double s1_min = std::numeric_limits<double>::infinity();
  double untagged_min = std::numeric_limits<double>::infinity();
  int total_iterations = 0;
  for (unsigned mask = 0; mask < 64; ++mask) {
    std::array<double, 6> eps{};
    for (std::size_t i = 0; i < 6; ++i) eps[i] = ((mask >> i) & 1U) ? cap[i] : -cap[i];
    const ClassWeights a{A.p0 * (1 + eps[0]), A.p1 * (1 + eps[1]), A.c * (1 + eps[2])};
    const ClassWeights ap{Ap.p0 * (1 + eps[3]), Ap.p1 * (1 + eps[4]), Ap.c * (1 + eps[5])};
    const CornerResult corner = solve_corner(rates, params, a, ap);
    total_iterations += corner.iterations;
    if (corner.failed_closed) {
      s1_min = 0.0;
      untagged_min = 0.0;
    } else {
      s1_min = std::min(s1_min, corner.s1);
      untagged_min = std::min(untagged_min, corner.untagged);
    }
    if (corner.failed_closed || corner.delta > worst.delta) worst = corner;
    if (worst.failed_closed) break;
  }
  if (!worst.failed_closed) {
    worst.s1 = s1_min;
    worst.untagged = untagged_min;
  }
  worst.iterations = total_iterations;

  auto out = to_result(BoundMethod::kOperational, worst, mu, mup, rates);
  if (!reference.failed_closed && reference.s1 > 0.0) out.s1_ratio = out.s1_lower / reference.s1;
  out.confidence_note = fluctuation_note(params.coefficient) + "; worst of 64 intensity-error corners";
  return out;
}

BoundResult corner_delta(Intensity mu, Intensity mup, const ObservedRates& rates, const FluctuationParams& params,
                         const EpsilonCorner& eps) {
  require_pair(mu, mup);
  require_signal_rate(rates);
  params.validate();
  for (double e : {eps.signal.eps0, eps.signal.eps1, eps.signal.eps_c, eps.decoy.eps0, eps.decoy.eps1,
                   eps.decoy.eps_c}) {
    if (!(std::abs(e) < 0.5)) throw DecoyError(ErrorCode::kInvalidArgument, "epsilon must lie in (-0.5, 0.5)");
  }
  const ClassWeights A = nominal_signal(mu);
  const ClassWeights Ap = nominal_decoy(mu, mup);
  const ClassWeights a{A.p0 * (1 + eps.signal.eps0), A.p1 * (1 + eps.signal.eps1), A.c * (1 + eps.signal.eps_c)};
  const ClassWeights ap{Ap.p0 * (1 + eps.decoy.eps0), Ap.p1 * (1 + eps.decoy.eps1), Ap.c * (1 + eps.decoy.eps_c)};
  auto out = to_result(BoundMethod::kOperational, solve_corner(rates, params, a, ap), mu, mup, rates);
  out.confidence_note = fluctuation_note(params.coefficient) + "; single intensity-error corner";
  return out;
}

BoundResult compute_bound(BoundMethod method, Intensity mu, Intensity mup, const ObservedRates& rates,
                          const FluctuationParams& params, const EpsilonCaps& caps) {
  switch (method) {
    case BoundMethod::kHwang: return hwang_delta(mu, mup, rates);
    case BoundMethod::kAsymptotic3: return asymptotic_delta(mu, mup, rates);
    case BoundMethod::kFluctuation: return fluctuation_delta(mu, mup, rates, params);
    case BoundMethod::kOperational: return operational_error_delta(mu, mup, rates, params, caps);
  }
  throw DecoyError(ErrorCode::kInvalidArgument, "unknown bound method");
}

}  // namespace decoy
