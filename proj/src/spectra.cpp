#include "ssalab/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace ssalab {

std::string to_string(SpectrumLabel label) {
  switch (label) {
    case SpectrumLabel::ABC: return "ABC";
    case SpectrumLabel::AB: return "AB";
    case SpectrumLabel::BC: return "BC";
    case SpectrumLabel::B: return "B";
    case SpectrumLabel::Abstract: return "abstract";
  }
  return "abstract";
}

Spectrum Spectrum::make(std::vector<double> values, SpectrumLabel label) {
  if (values.empty()) throw std::invalid_argument("spectrum: empty vector");
  double sum = 0.0;
  for (size_t i = 0; i < values.size(); ++i) {
    if (values[i] < 0.0) {
      std::ostringstream msg;
      msg << "spectrum: negative entry " << values[i] << " at index " << i;
      throw std::invalid_argument(msg.str());
    }
    if (i > 0 && values[i] < values[i - 1]) {
      std::ostringstream msg;
      msg << "spectrum: not ascending at index " << i << " (" << values[i - 1]
          << " > " << values[i] << ")";
      throw std::invalid_argument(msg.str());
    }
    sum += values[i];
  }
  if (std::abs(sum - 1.0) > kSpectrumSumTol) {
    std::ostringstream msg;
    msg << "spectrum: sum " << sum << " deviates from 1 by more than "
        << kSpectrumSumTol;
    throw std::invalid_argument(msg.str());
  }
  return Spectrum(std::move(values), label);
}

Spectrum Spectrum::uniform(int n, SpectrumLabel label) {
  if (n < 1) throw std::invalid_argument("spectrum: length must be >= 1");
  std::vector<double> v(static_cast<size_t>(n), 1.0 / n);
  return Spectrum(std::move(v), label);
}

double entropy(const std::vector<double>& values) {
  double acc = 0.0;
  for (double x : values) {
    if (x > 0.0) acc -= x * std::log(x);
  }
  return acc;
}

double entropy(const Spectrum& s) { return entropy(s.values()); }

std::vector<double> block_sums(const std::vector<double>& values, int block) {
  if (block < 1) throw std::invalid_argument("aggregate: block must be >= 1");
  const int n = static_cast<int>(values.size());
  if (n % block != 0) {
    std::ostringstream msg;
    msg << "aggregate: block " << block << " does not divide length " << n;
    throw std::invalid_argument(msg.str());
  }
  std::vector<double> out(static_cast<size_t>(n / block), 0.0);
  for (int j = 0; j < n / block; ++j) {
    double s = 0.0;
    for (int i = j * block; i < (j + 1) * block; ++i)
      s += values[static_cast<size_t>(i)];
    out[static_cast<size_t>(j)] = s;
  }
  return out;
}

AggregatedSpectrum aggregate(const Spectrum& s, int block) {
  AggregatedSpectrum agg{block_sums(s.values(), block), s.label(), block};
  // Block sums of an ascending vector are nondecreasing; anything beyond
  // rounding noise indicates a corrupted input.
  for (size_t j = 1; j < agg.values.size(); ++j) {
    if (agg.values[j] < agg.values[j - 1] - 1e-12)
      throw std::runtime_error("aggregate: block sums not nondecreasing");
  }
  return agg;
}

MajorizationResult majorized_by(const std::vector<double>& x,
                                const std::vector<double>& y, double tol,
                                bool presorted) {
  if (x.size() != y.size()) {
    std::ostringstream msg;
    msg << "majorized_by: length mismatch " << x.size() << " vs " << y.size();
    throw std::invalid_argument(msg.str());
  }
  if (x.empty()) throw std::invalid_argument("majorized_by: empty vectors");

  const std::vector<double>* px = &x;
  const std::vector<double>* py = &y;
  std::vector<double> xs, ys;
  if (!presorted) {
    xs = x;
    ys = y;
    std::sort(xs.begin(), xs.end());
    std::sort(ys.begin(), ys.end());
    px = &xs;
    py = &ys;
  }

  const size_t n = px->size();
  MajorizationResult result;
  result.margins.resize(n);
  double sx = 0.0, sy = 0.0;
  for (size_t k = 0; k < n; ++k) {
    sx += (*px)[k];
    sy += (*py)[k];
    result.margins[k] = sx - sy;
  }
  result.min_margin =
      *std::min_element(result.margins.begin(), result.margins.end());
  result.holds =
      result.min_margin >= -tol && std::abs(result.margins[n - 1]) <= tol;
  return result;
}

RankResult numerical_rank(const std::vector<double>& values, double threshold) {
  int rank = 0;
  for (double x : values)
    if (x > threshold) ++rank;
  return {rank, static_cast<int>(values.size()) - rank};
}

RankResult numerical_rank(const Spectrum& s, double threshold) {
  return numerical_rank(s.values(), threshold);
}

}  // namespace ssalab
