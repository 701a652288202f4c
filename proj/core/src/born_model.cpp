#include "eikamp/born_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

// pchip.hpp (Boost 1.74) calls isnan unqualified.
#include <math.h>

#include <boost/math/interpolators/pchip.hpp>

#include "eikamp/errors.hpp"

namespace eikamp::eikonal {

namespace {

constexpr Complex kI{0.0, 1.0};

BornReality reality_of_coupling(Complex c) {
  // a = i c f(q) with real f
  if (c.imag() == 0.0) return BornReality::pure_imaginary;
  if (c.real() == 0.0) return BornReality::real;
  return BornReality::general;
}

}  // namespace

struct BornModel::Table {
  using Spline = boost::math::interpolators::pchip<std::vector<double>>;

  Table(Spline re, Spline im, double q_last, Complex last, double tail_rate)
      : re(std::move(re)), im(std::move(im)), q_last(q_last), last(last), tail_rate(tail_rate) {}

  Spline re;
  Spline im;
  double q_last;
  Complex last;
  double tail_rate;
};

std::string_view to_string(BornKind kind) {
  switch (kind) {
    case BornKind::gaussian:
      return "gaussian";
    case BornKind::exponential_pole:
      return "exponential_pole";
    case BornKind::tabulated:
      return "tabulated";
  }
  return "?";
}

std::string_view to_string(BornReality r) {
  switch (r) {
    case BornReality::general:
      return "general";
    case BornReality::real:
      return "real";
    case BornReality::pure_imaginary:
      return "pure_imaginary";
  }
  return "?";
}

double DecayEnvelope::operator()(double q) const {
  const double x = std::max(0.0, q - onset);
  if (shape == Shape::gaussian) return magnitude * std::exp(-rate * x * x);
  return magnitude * std::exp(-rate * x);
}

BornModel BornModel::gaussian(Complex coupling, double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw DomainError("gaussian Born model: scale Lambda must be positive");
  }
  if (!std::isfinite(coupling.real()) || !std::isfinite(coupling.imag())) {
    throw DomainError("gaussian Born model: coupling must be finite");
  }
  BornModel m;
  m.kind_ = BornKind::gaussian;
  m.coupling_ = coupling;
  m.scale_ = lambda;
  m.envelope_ = {DecayEnvelope::Shape::gaussian, std::abs(coupling), 0.5 / (lambda * lambda), 0.0};
  m.reality_ = reality_of_coupling(coupling);
  return m;
}

BornModel BornModel::exponential_pole(Complex residue, double slope) {
  if (!(slope > 0.0) || !std::isfinite(slope)) {
    throw DomainError("exponential-pole Born model: slope B must be positive");
  }
  if (!std::isfinite(residue.real()) || !std::isfinite(residue.imag())) {
    throw DomainError("exponential-pole Born model: residue must be finite");
  }
  BornModel m;
  m.kind_ = BornKind::exponential_pole;
  m.coupling_ = residue;
  m.scale_ = slope;
  m.envelope_ = {DecayEnvelope::Shape::gaussian, std::abs(residue), slope, 0.0};
  m.reality_ = reality_of_coupling(residue);
  return m;
}

BornModel BornModel::tabulated(std::vector<TabulatedSample> samples,
                               std::optional<double> tail_rate) {
  if (samples.size() < 4) throw DomainError("tabulated Born model needs at least 4 samples");
  if (samples.front().q != 0.0) throw DomainError("tabulated Born model must start at q = 0");
  for (std::size_t i = 1; i < samples.size(); ++i) {
    if (!(samples[i].q > samples[i - 1].q)) {
      throw DomainError("tabulated Born model: q must be strictly increasing");
    }
  }
  for (const auto& s : samples) {
    if (!std::isfinite(s.q) || !std::isfinite(s.reduced.real()) || !std::isfinite(s.reduced.imag())) {
      throw DomainError("tabulated Born model: non-finite sample");
    }
  }

  const auto& tail_a = samples[samples.size() - 2];
  const auto& tail_b = samples.back();
  double kappa = 0.0;
  if (tail_rate) {
    kappa = *tail_rate;
  } else if (std::abs(tail_a.reduced) > 0.0 && std::abs(tail_b.reduced) > 0.0) {
    kappa = std::log(std::abs(tail_a.reduced) / std::abs(tail_b.reduced)) / (tail_b.q - tail_a.q);
  }
  if (!(kappa > 0.0) || !std::isfinite(kappa)) {
    throw DomainError(
        "tabulated Born model: tail does not decay; give a positive tail_rate in [envelope]");
  }

  std::vector<double> q, re, im;
  double max_re = 0.0;
  double max_im = 0.0;
  bool all_real = true;
  bool all_imag = true;
  for (const auto& s : samples) {
    q.push_back(s.q);
    re.push_back(s.reduced.real());
    im.push_back(s.reduced.imag());
    max_re = std::max(max_re, std::fabs(s.reduced.real()));
    max_im = std::max(max_im, std::fabs(s.reduced.imag()));
    all_real = all_real && s.reduced.imag() == 0.0;
    all_imag = all_imag && s.reduced.real() == 0.0;
  }
  std::vector<double> q2 = q;
  Table::Spline re_spline(std::move(q), std::move(re));
  Table::Spline im_spline(std::move(q2), std::move(im));

  BornModel m;
  m.kind_ = BornKind::tabulated;
  m.table_ = std::make_shared<const Table>(std::move(re_spline), std::move(im_spline), tail_b.q,
                                           tail_b.reduced, kappa);
  m.envelope_ = {DecayEnvelope::Shape::exponential, std::hypot(max_re, max_im), kappa, tail_b.q};
  m.reality_ = all_imag ? BornReality::pure_imaginary
                        : (all_real ? BornReality::real : BornReality::general);
  return m;
}

Complex BornModel::reduced(double q) const {
  if (!(q >= 0.0)) throw DomainError("Born amplitude evaluated at negative q");
  switch (kind_) {
    case BornKind::gaussian:
      return kI * coupling_ * std::exp(-0.5 * q * q / (scale_ * scale_));
    case BornKind::exponential_pole:
      return kI * coupling_ * std::exp(-scale_ * q * q);
    case BornKind::tabulated:
      if (q <= table_->q_last) return {table_->re(q), table_->im(q)};
      return table_->last * std::exp(-table_->tail_rate * (q - table_->q_last));
  }
  return {};
}

Complex BornModel::chi0() const {
  if (kind_ != BornKind::gaussian) throw DomainError("chi0 is defined for the gaussian model only");
  return coupling_ * scale_ * scale_ / (4.0 * std::numbers::pi);
}

}  // namespace eikamp::eikonal
