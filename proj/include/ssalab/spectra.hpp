// spectra.hpp — ascending spectra, entropy, block aggregation, majorization.
//
// Conventions used throughout the library:
//   * spectra are sorted ascending (smallest eigenvalue first),
//   * majorized_by(x, y) tests "x is majorized by y": the ascending partial
//     sums of x dominate those of y for every prefix, with equal totals,
//   * aggregation forms consecutive block sums of an ascending vector.

#pragma once

#include <string>
#include <vector>

namespace ssalab {

inline constexpr double kSpectrumSumTol = 1e-12;
inline constexpr double kMajorizationTol = 1e-9;
inline constexpr double kRankThreshold = 1e-10;

enum class SpectrumLabel { ABC, AB, BC, B, Abstract };

std::string to_string(SpectrumLabel label);

/// Ascending nonnegative vector summing to 1: the eigenvalue list of a
/// density matrix, or an abstract normalized vector of the same shape.
class Spectrum {
 public:
  /// Validates nonnegativity, ascending order and unit sum (within
  /// kSpectrumSumTol); throws std::invalid_argument otherwise.
  static Spectrum make(std::vector<double> values,
                       SpectrumLabel label = SpectrumLabel::Abstract);

  /// The uniform spectrum of length n.
  static Spectrum uniform(int n, SpectrumLabel label = SpectrumLabel::Abstract);

  const std::vector<double>& values() const { return values_; }
  SpectrumLabel label() const { return label_; }
  int size() const { return static_cast<int>(values_.size()); }
  double operator[](int i) const { return values_[static_cast<size_t>(i)]; }

 private:
  Spectrum(std::vector<double> values, SpectrumLabel label)
      : values_(std::move(values)), label_(label) {}

  std::vector<double> values_;
  SpectrumLabel label_;
};

/// Shannon entropy in nats, with the 0 ln 0 = 0 convention.
double entropy(const std::vector<double>& values);
double entropy(const Spectrum& s);

/// Consecutive block sums of an ascending source vector.
struct AggregatedSpectrum {
  std::vector<double> values;  // nondecreasing; same total mass as the source
  SpectrumLabel source;
  int block = 1;
};

/// Block sums of `s` with the given block size; block must divide the length.
AggregatedSpectrum aggregate(const Spectrum& s, int block);

/// Raw helper used by the minimizer on unvalidated vectors.
std::vector<double> block_sums(const std::vector<double>& values, int block);

struct MajorizationResult {
  bool holds = false;
  double min_margin = 0.0;        // min over k of margins[k]
  std::vector<double> margins;    // margins[k-1] = sum_{i<=k} x - sum_{i<=k} y
};

/// Tests whether x is majorized by y under the ascending convention:
/// every ascending partial sum of x dominates that of y within tol, and the
/// totals agree within tol. Inputs must be equal length; if presorted is
/// false both are sorted ascending first.
MajorizationResult majorized_by(const std::vector<double>& x,
                                const std::vector<double>& y,
                                double tol = kMajorizationTol,
                                bool presorted = true);

struct RankResult {
  int rank = 0;
  int zero_count = 0;
};

/// Number of entries strictly above `threshold` (absolute; spectra sum to 1).
RankResult numerical_rank(const Spectrum& s, double threshold = kRankThreshold);
RankResult numerical_rank(const std::vector<double>& values,
                          double threshold = kRankThreshold);

}  // namespace ssalab
