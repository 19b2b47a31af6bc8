#include "hetsat/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/special_functions/gamma.hpp>

namespace hetsat {

void QuadratureSpec::validate() const {
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) throw DomainError("tolerances must be positive");
  if (max_subdivisions < 1) throw DomainError("max_subdivisions must be >= 1");
  if (omega_truncation < 0.0 || y_truncation < 0.0) {
    throw DomainError("truncations must be positive (or 0 for automatic)");
  }
  if (!(envelope_rel > 0.0) || !(omega_ceiling > 0.0)) {
    throw DomainError("envelope level and omega ceiling must be positive");
  }
  if (kernel_nodes < 8) throw DomainError("kernel_nodes must be >= 8");
  if (series_terms < 1) throw DomainError("series_terms must be >= 1");
  if (!(tail_rel > 0.0) || !(target_abs > 0.0)) {
    throw DomainError("tail_rel and target_abs must be positive");
  }
}

// ---------------------------------------------------------------------------
// Incomplete gamma

namespace {

constexpr int kMaxGammaIterations = 20000;
constexpr double kGammaEps = 1e-16;

cplx gamma_series(double a, cplx z) {
  cplx term = 1.0 / a;
  cplx sum = term;
  for (int n = 1; n < kMaxGammaIterations; ++n) {
    term *= z / (a + n);
    sum += term;
    if (std::abs(term) < kGammaEps * std::abs(sum)) {
      return sum * std::exp(a * std::log(z) - z);
    }
  }
  throw NumericalError("incomplete gamma series did not converge", std::abs(sum), 0.0);
}

// Modified Lentz evaluation of the Legendre continued fraction for Gamma(a, z).
cplx upper_gamma_fraction(double a, cplx z) {
  constexpr double tiny = 1e-300;
  cplx b = z + 1.0 - a;
  cplx c = 1.0 / tiny;
  cplx d = 1.0 / b;
  cplx h = d;
  for (int i = 1; i < kMaxGammaIterations; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const cplx del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kGammaEps) {
      return std::exp(a * std::log(z) - z) * h;
    }
  }
  throw NumericalError("incomplete gamma continued fraction did not converge", std::abs(h), 0.0);
}

}  // namespace

cplx lower_incomplete_gamma(double a, cplx z) {
  if (!(a > 0.0)) throw DomainError("incomplete gamma needs a > 0");
  if (z == cplx(0.0, 0.0)) return 0.0;
  const double mag = std::abs(z);
  const bool near_negative_axis = z.real() < 0.0 && std::abs(z.imag()) <= -z.real();
  if (mag < a + 8.0 || near_negative_axis) return gamma_series(a, z);
  return std::tgamma(a) - upper_gamma_fraction(a, z);
}

double lower_incomplete_gamma(double a, double x) {
  if (!(x >= 0.0)) throw DomainError("real incomplete gamma needs x >= 0");
  return lower_incomplete_gamma(a, cplx(x, 0.0)).real();
}

double regularized_lower_gamma(double a, double x) {
  if (!(x >= 0.0)) throw DomainError("regularized gamma needs x >= 0");
  return boost::math::gamma_p(a, x);
}

// ---------------------------------------------------------------------------
// Fixed Gauss-Legendre rules

namespace {

struct UnitRule {
  std::vector<double> x;
  std::vector<double> w;
};

template <int N>
UnitRule boost_rule() {
  using G = boost::math::quadrature::gauss<double, N>;
  const auto& xs = G::abscissa();
  const auto& ws = G::weights();
  UnitRule r;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (xs[i] == 0.0) {
      r.x.push_back(0.0);
      r.w.push_back(ws[i]);
    } else {
      r.x.push_back(-xs[i]);
      r.w.push_back(ws[i]);
      r.x.push_back(xs[i]);
      r.w.push_back(ws[i]);
    }
  }
  std::vector<std::size_t> idx(r.x.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](auto l, auto rr) { return r.x[l] < r.x[rr]; });
  UnitRule sorted;
  for (auto i : idx) {
    sorted.x.push_back(r.x[i]);
    sorted.w.push_back(r.w[i]);
  }
  return sorted;
}

const UnitRule& unit_rule(int n) {
  static const UnitRule r8 = boost_rule<8>();
  static const UnitRule r16 = boost_rule<16>();
  static const UnitRule r24 = boost_rule<24>();
  static const UnitRule r32 = boost_rule<32>();
  static const UnitRule r48 = boost_rule<48>();
  static const UnitRule r64 = boost_rule<64>();
  if (n <= 8) return r8;
  if (n <= 16) return r16;
  if (n <= 24) return r24;
  if (n <= 32) return r32;
  if (n <= 48) return r48;
  return r64;
}

}  // namespace

GaussLegendreRule::GaussLegendreRule(double a, double b, int panels, int points_per_panel) {
  if (!(a <= b) || panels < 1) throw DomainError("GaussLegendreRule needs a <= b and panels >= 1");
  const UnitRule& u = unit_rule(points_per_panel);
  const double width = (b - a) / panels;
  nodes_.reserve(static_cast<std::size_t>(panels) * u.x.size());
  weights_.reserve(nodes_.capacity());
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * width;
    const double mid = lo + 0.5 * width;
    for (std::size_t i = 0; i < u.x.size(); ++i) {
      nodes_.push_back(mid + 0.5 * width * u.x[i]);
      weights_.push_back(0.5 * width * u.w[i]);
    }
  }
}

// ---------------------------------------------------------------------------
// Cumulative integral

namespace {

constexpr int kPanelOrder = 16;

const std::array<double, kPanelOrder>& barycentric_weights() {
  static const std::array<double, kPanelOrder> w = [] {
    const UnitRule& u = unit_rule(kPanelOrder);
    std::array<double, kPanelOrder> out{};
    for (int i = 0; i < kPanelOrder; ++i) {
      double prod = 1.0;
      for (int k = 0; k < kPanelOrder; ++k) {
        if (k != i) prod *= u.x[i] - u.x[k];
      }
      out[i] = 1.0 / prod;
    }
    return out;
  }();
  return w;
}

// Barycentric interpolation on the unit-rule nodes at s in [-1, 1].
double interpolate(const double* values, double s) {
  const UnitRule& u = unit_rule(kPanelOrder);
  const auto& bw = barycentric_weights();
  double num = 0.0;
  double den = 0.0;
  for (int i = 0; i < kPanelOrder; ++i) {
    const double diff = s - u.x[i];
    if (diff == 0.0) return values[i];
    const double t = bw[i] / diff;
    num += t * values[i];
    den += t;
  }
  return num / den;
}

}  // namespace

CumulativeIntegral::CumulativeIntegral(const std::function<double(double)>& f, double a,
                                       double b, std::span<const double> breaks,
                                       int panels_per_segment) {
  if (!(a < b)) throw DomainError("CumulativeIntegral needs a < b");
  std::vector<double> cuts{a};
  for (double x : breaks) {
    if (x > a && x < b && x > cuts.back()) cuts.push_back(x);
  }
  cuts.push_back(b);
  for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
    const double width = (cuts[s + 1] - cuts[s]) / panels_per_segment;
    for (int p = 0; p < panels_per_segment; ++p) edges_.push_back(cuts[s] + p * width);
  }
  edges_.push_back(b);

  const UnitRule& u = unit_rule(kPanelOrder);
  const std::size_t panels = edges_.size() - 1;
  values_.resize(panels * kPanelOrder);
  cumulative_.assign(edges_.size(), 0.0);
  for (std::size_t p = 0; p < panels; ++p) {
    const double lo = edges_[p];
    const double half = 0.5 * (edges_[p + 1] - lo);
    double acc = 0.0;
    for (int i = 0; i < kPanelOrder; ++i) {
      const double v = f(lo + half * (1.0 + u.x[i]));
      values_[p * kPanelOrder + i] = v;
      acc += u.w[i] * v;
    }
    cumulative_[p + 1] = cumulative_[p] + half * acc;
  }
}

double CumulativeIntegral::operator()(double x) const {
  if (edges_.empty()) return 0.0;
  if (x <= edges_.front()) return 0.0;
  if (x >= edges_.back()) return cumulative_.back();
  const auto it = std::upper_bound(edges_.begin(), edges_.end(), x);
  const std::size_t p = static_cast<std::size_t>(it - edges_.begin()) - 1;
  const double lo = edges_[p];
  const double panel_half = 0.5 * (edges_[p + 1] - lo);
  const double sub_half = 0.5 * (x - lo);
  const UnitRule& u = unit_rule(kPanelOrder);
  const double* vals = &values_[p * kPanelOrder];
  double acc = 0.0;
  for (int i = 0; i < kPanelOrder; ++i) {
    const double t = lo + sub_half * (1.0 + u.x[i]);
    const double s = (t - lo) / panel_half - 1.0;
    acc += u.w[i] * interpolate(vals, s);
  }
  return cumulative_[p] + sub_half * acc;
}

double CumulativeIntegral::between(double lo, double hi) const {
  if (!(hi > lo)) return 0.0;
  return (*this)(hi) - (*this)(lo);
}

// ---------------------------------------------------------------------------
// Fourier inversion

cplx inversion_kernel(double omega, double y, double delta) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  const double y_low = y / delta;
  if (std::abs(omega) * y < 1e-6) {
    // Removable singularity: expand to second order in omega.
    const double d1 = y - y_low;
    const double d2 = y * y - y_low * y_low;
    return cplx(d1, 0.5 * omega * d2) / two_pi;
  }
  const cplx j(0.0, 1.0);
  return (std::exp(j * omega * y) - std::exp(j * omega * y_low)) / (two_pi * j * omega);
}

namespace {

cplx transform_product(const JointTransform& t, double omega, double y) {
  if (t.product) return t.product(omega, y);
  return t.theta(omega, y) * t.upsilon(omega, y);
}

cplx atom_part(const std::vector<TransformAtom>& atoms, double omega) {
  cplx acc = 0.0;
  for (const auto& a : atoms) acc += a.weight * std::exp(cplx(0.0, -omega * a.shift));
  return acc;
}

double sgn(double x) { return (x > 0.0) - (x < 0.0); }

// Full-line integral of the kernel against an atom, in closed form.
double atom_closed_form(const std::vector<TransformAtom>& atoms, double y, double delta) {
  double acc = 0.0;
  for (const auto& a : atoms) acc += a.weight * 0.5 * (sgn(y - a.shift) - sgn(y / delta - a.shift));
  return acc;
}

struct YScan {
  double y_max;
  double y_peak;        // location of the peak of |P(0, y)| y
  double density_peak;  // largest |P(0, y)| seen
};

YScan scan_y(const JointTransform& t, const QuadratureSpec& spec) {
  const double s = t.y_scale;
  double peak = 0.0;
  YScan out{0.0, s, 0.0};
  double last_significant = s;
  for (int k = -40; k <= 80; ++k) {
    const double y = s * std::ldexp(1.0, k);
    const double d = std::abs(transform_product(t, 0.0, y));
    const double v = d * y;
    if (!std::isfinite(v)) continue;
    out.density_peak = std::max(out.density_peak, d);
    if (v > peak) {
      peak = v;
      out.y_peak = y;
    }
    if (v >= spec.envelope_rel * peak) last_significant = y;
    else if (y > 4.0 * last_significant && peak > 0.0) break;
  }
  out.y_max = spec.y_truncation > 0.0 ? spec.y_truncation : 2.0 * last_significant;
  return out;
}

struct OmegaScan {
  double omega_max;
  double tail_envelope;
};

OmegaScan find_omega_max(const JointTransform& t, double y_peak, double y_max,
                         const QuadratureSpec& spec) {
  const double s = t.y_scale;
  const double ceiling = spec.omega_ceiling / s;
  if (spec.omega_truncation > 0.0) return {spec.omega_truncation, 0.0};
  double omega_max = 0.0;
  double worst_tail = 0.0;
  const std::array<double, 6> probes{0.05, 0.2, 0.5, 1.0, 2.0, 5.0};
  for (double frac : probes) {
    const double y = std::min(frac * y_peak, 0.5 * y_max);
    const auto atoms = t.atoms ? t.atoms(y) : std::vector<TransformAtom>{};
    double peak = 0.0;
    double last_significant = 1.0 / s;
    double tail = 0.0;
    for (int k = -8;; ++k) {
      const double w = std::ldexp(1.0, k) / s;
      if (w > ceiling) break;
      const double v = std::abs(transform_product(t, w, y) - atom_part(atoms, w));
      if (!std::isfinite(v)) continue;
      peak = std::max(peak, v);
      tail = peak > 0.0 ? v / peak : 0.0;
      if (v >= spec.envelope_rel * peak) last_significant = w;
      else if (w > 8.0 * last_significant) break;
    }
    omega_max = std::max(omega_max, std::min(2.0 * last_significant, ceiling));
    worst_tail = std::max(worst_tail, tail);
  }
  return {omega_max, worst_tail};
}

struct InnerResult {
  double value;
  double error;
  bool converged;
};

// Distances between a carrier frequency and the phase shifts present in P.
struct Detuning {
  double low;
  double high;
};

Detuning detuning(double carrier, const std::vector<double>& shifts) {
  Detuning d{std::abs(carrier), std::abs(carrier)};
  for (double s : shifts) {
    d.low = std::min(d.low, std::abs(carrier - s));
    d.high = std::max(d.high, std::abs(carrier - s));
  }
  return d;
}

// Gauss-Kronrod bisection to an absolute tolerance, split evenly between halves.
template <unsigned N = 21, class F>
double bisect_gk(const F& f, double a, double b, double tol, int depth, double& err) {
  double e = 0.0;
  const double v = boost::math::quadrature::gauss_kronrod<double, N>::integrate(f, a, b, 0, 0.0, &e);
  if (e <= tol || depth <= 0) {
    err += e;
    return v;
  }
  const double m = 0.5 * (a + b);
  return bisect_gk<N>(f, a, m, 0.5 * tol, depth - 1, err) + bisect_gk<N>(f, m, b, 0.5 * tol, depth - 1, err);
}

// 2 Re int_0^omega_max K(w, y) (P(w, y) - atoms) dw + closed-form atoms.
// Below omega_split the full kernel is integrated. Above it the two carriers
// e^{jwy} and e^{jwy/delta} are integrated separately, each on panels no wider
// than half a period of its slowest-beating component, and stopped once an
// integration-by-parts bound on the remaining tail drops below tol.
InnerResult inner_integral(const JointTransform& t, double y, double delta, double omega_max,
                           double density_floor, const QuadratureSpec& spec) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  const auto atoms = t.atoms ? t.atoms(y) : std::vector<TransformAtom>{};
  std::vector<double> shifts{0.0};
  for (const auto& a : atoms) shifts.push_back(a.shift);
  auto residual = [&](double w) { return transform_product(t, w, y) - atom_part(atoms, w); };

  const double density = std::abs(transform_product(t, 0.0, y));
  const double tol = spec.tail_rel * std::max(density, density_floor) + 1e-300;
  const int depth = std::min(spec.max_subdivisions, 8);

  InnerResult out{atom_closed_form(atoms, y, delta), 0.0, true};
  auto integrate = [&](const auto& f, double a, double b) {
    out.value += bisect_gk(f, a, b, 0.05 * tol, depth, out.error);
  };

  const double spread = y * (1.0 - 1.0 / delta);
  const double omega_split = std::min(omega_max, std::numbers::pi / std::max(spread, 1e-300));
  auto full = [&](double w) { return 2.0 * (inversion_kernel(w, y, delta) * residual(w)).real(); };
  double lo = 0.0;
  double width = std::min(omega_split, 1.0 / t.y_scale);
  while (lo < omega_split) {
    const double hi = std::min(omega_split, lo + width);
    integrate(full, lo, hi);
    lo = hi;
    width = hi;
    const double bound = hi * std::abs(inversion_kernel(hi, y, delta)) * std::abs(residual(hi));
    if (bound < tol) return out;
  }
  if (omega_split >= omega_max) return out;

  for (const double carrier : {y, y / delta}) {
    const double sign = carrier == y ? 1.0 : -1.0;
    const Detuning d = detuning(carrier, shifts);
    auto part = [&](double w) {
      const cplx j(0.0, 1.0);
      return sign * 2.0 * (std::exp(j * w * carrier) * residual(w) / (two_pi * j * w)).real();
    };
    lo = omega_split;
    while (lo < omega_max) {
      const double hi = std::min({omega_max, 2.0 * lo, lo + std::numbers::pi / d.high});
      integrate(part, lo, hi);
      lo = hi;
      const double amplitude = std::abs(residual(hi)) / (two_pi * hi);
      const double reach = d.low > 0.0 ? std::min(hi, 2.0 / d.low) : hi;
      if (amplitude * reach < tol) break;
    }
  }
  return out;
}

}  // namespace

InversionResult fourier_inversion_cp(const JointTransform& transform, double delta_max,
                                     const QuadratureSpec& spec, bool parallel) {
  spec.validate();
  if (!(delta_max > 1.0)) {
    // Empty interval (y/delta, y): nothing can be covered.
    return InversionResult{};
  }
  if (!(transform.y_scale > 0.0)) throw DomainError("JointTransform::y_scale must be positive");

  InversionResult out;
  const YScan ys = scan_y(transform, spec);
  out.y_max = ys.y_max;
  const double s = ys.y_peak;
  const OmegaScan scan = find_omega_max(transform, s, out.y_max, spec);
  out.omega_max = scan.omega_max;
  out.tail_envelope = scan.tail_envelope;
  // Per-y stopping levels never ask for more than a thousandth of the
  // absolute target once spread over the y range.
  const double density_floor =
      std::max(1e-2 * ys.density_peak, 1e-3 * spec.target_abs / (spec.tail_rel * out.y_max));

  // Outer variable: y = s t / (1 - t), t in [0, t_max], s at the density peak.
  const double t_max = out.y_max / (s + out.y_max);
  constexpr int kOuterPanels = 10;
  std::vector<double> panel_value(kOuterPanels, 0.0);
  std::vector<double> panel_error(kOuterPanels, 0.0);

  const double outer_tol = spec.target_abs / kOuterPanels;
  constexpr int kOuterDepth = 2;

  auto outer_integrand = [&](double tt) {
    if (tt <= 0.0) return 0.0;
    const double y = s * tt / (1.0 - tt);
    const double jac = s / ((1.0 - tt) * (1.0 - tt));
    return inner_integral(transform, y, delta_max, out.omega_max, density_floor, spec).value * jac;
  };

  auto density = [&](double tt) {
    if (tt <= 0.0) return 0.0;
    const double y = s * tt / (1.0 - tt);
    return std::abs(transform_product(transform, 0.0, y)) * s / ((1.0 - tt) * (1.0 - tt));
  };
  // GK bisection in which a piece may instead be bounded by its y-density
  // mass: the covered mass lies in [0, that mass]. Near y = 0 the inner
  // integrals are too rough for GK but the mass is tiny.
  auto bounded = [&](auto&& self, double a, double b, double tol, int depth, double& err) -> double {
    double e = 0.0;
    const double v = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(outer_integrand, a, b, 0, 0.0, &e);
    if (e <= tol) {
      err += e;
      return v;
    }
    double me = 0.0;
    const double mass = bisect_gk<15>(density, a, b, 0.01 * tol, 8, me) + me;
    if (mass < e && (mass <= tol || depth <= 0)) {
      err += mass;
      return std::clamp(v, 0.0, mass);
    }
    if (depth <= 0) {
      err += e;
      return v;
    }
    const double m = 0.5 * (a + b);
    return self(self, a, m, 0.5 * tol, depth - 1, err) + self(self, m, b, 0.5 * tol, depth - 1, err);
  };

  auto run_panel = [&](int p) {
    // Panels are geometric in t near 0, where the y-density is steepest.
    const double lo = p == 0 ? 0.0 : t_max * std::pow(1e-4, double(kOuterPanels - p) / kOuterPanels);
    const double hi = t_max * std::pow(1e-4, double(kOuterPanels - p - 1) / kOuterPanels);
    double err = 0.0;
    panel_value[p] = bounded(bounded, lo, hi, outer_tol, kOuterDepth, err);
    panel_error[p] = err;
  };

  if (parallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (int p = 0; p < kOuterPanels; ++p) run_panel(p);
  } else {
    for (int p = 0; p < kOuterPanels; ++p) run_panel(p);
  }

  for (int p = 0; p < kOuterPanels; ++p) {
    out.raw += panel_value[p];
    out.error += panel_error[p];
  }
  out.converged = out.error <= spec.target_abs;
  out.value = std::clamp(out.raw, 0.0, 1.0);
  return out;
}

}  // namespace hetsat
