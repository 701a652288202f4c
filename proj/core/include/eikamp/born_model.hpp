#pragma once

// Parameterised Born amplitudes.  Every model is linear in s, so it is
// stored as the reduced amplitude a(q) = A_B(s, q) / s with q = sqrt(-t).
//
//   gaussian          a(q) = i g exp(-q^2 / (2 Lambda^2))
//   exponential_pole  a(q) = i C exp(t B) = i C exp(-B q^2)
//   tabulated         pchip interpolation of (q, Re a, Im a) samples,
//                     exponential tail a(q_last) exp(-kappa (q - q_last))

#include <complex>
#include <memory>
#include <optional>
#include <string_view>
#include <vector>

namespace eikamp::eikonal {

using Complex = std::complex<double>;

enum class BornKind { gaussian, exponential_pole, tabulated };

std::string_view to_string(BornKind kind);

/// Reality class of A_B over its whole range.
enum class BornReality { general, real, pure_imaginary };

std::string_view to_string(BornReality r);

/// Non-increasing bound |a(q)| <= envelope(q).
struct DecayEnvelope {
  enum class Shape { gaussian, exponential };

  Shape shape = Shape::gaussian;
  double magnitude = 1.0;
  /// gaussian: exp(-rate x^2);  exponential: exp(-rate x)
  double rate = 1.0;
  /// x = max(0, q - onset)
  double onset = 0.0;

  double operator()(double q) const;
};

struct TabulatedSample {
  double q;
  Complex reduced;
};

class BornModel {
 public:
  /// Throws DomainError unless lambda > 0 and g is finite.
  static BornModel gaussian(Complex coupling, double lambda);
  /// Throws DomainError unless slope > 0.
  static BornModel exponential_pole(Complex residue, double slope);
  /// Needs at least 4 samples with strictly increasing q starting at 0.
  /// Without tail_rate the tail slope is fitted to the last two samples and
  /// must come out positive.
  static BornModel tabulated(std::vector<TabulatedSample> samples,
                             std::optional<double> tail_rate = std::nullopt);

  BornKind kind() const noexcept { return kind_; }

  /// A_B(s, q) / s
  Complex reduced(double q) const;
  Complex amplitude(double s, double q) const { return s * reduced(q); }

  const DecayEnvelope& envelope() const noexcept { return envelope_; }
  BornReality reality() const noexcept { return reality_; }

  /// Coupling g (gaussian) or residue C (pole); zero for tables.
  Complex coupling() const noexcept { return coupling_; }
  /// Lambda (gaussian) or slope B (pole); zero for tables.
  double scale() const noexcept { return scale_; }

  /// gaussian only: chi0 = g Lambda^2 / (4 pi).
  Complex chi0() const;

 private:
  struct Table;

  BornModel() = default;

  BornKind kind_ = BornKind::gaussian;
  Complex coupling_{};
  double scale_ = 0.0;
  DecayEnvelope envelope_;
  BornReality reality_ = BornReality::general;
  std::shared_ptr<const Table> table_;
};

}  // namespace eikamp::eikonal
