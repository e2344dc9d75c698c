// tensor.hpp — Hermitian matrices with tripartite structure and partial traces.
//
// Basis convention: for subsystem dimensions (L, M, N) of A, B, C the
// composite index is i = (a*M + b)*N + c with a in [0,L), b in [0,M),
// c in [0,N) — A is the slowest-varying factor, C the fastest. Every
// partial trace derives from this single convention; reduced states keep
// the remaining factors in A < B < C order.

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <iosfwd>
#include <string>

#include "ssalab/spectra.hpp"

namespace ssalab {

using ComplexMatrix = Eigen::MatrixXcd;

inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kEigenvalueFloor = -1e-10;
inline constexpr double kTraceTol = 1e-10;
inline constexpr double kEigenpairResidualTol = 1e-9;

// ---------------------------------------------------------------- subsystems

/// Bitmask over the three tensor factors.
enum class Subsystems : unsigned {
  A = 1u,
  B = 2u,
  C = 4u,
  AB = 3u,
  AC = 5u,
  BC = 6u,
  ABC = 7u,
};

constexpr Subsystems operator|(Subsystems a, Subsystems b) {
  return static_cast<Subsystems>(static_cast<unsigned>(a) |
                                 static_cast<unsigned>(b));
}

constexpr bool contains(Subsystems set, Subsystems sub) {
  return (static_cast<unsigned>(set) & static_cast<unsigned>(sub)) ==
         static_cast<unsigned>(sub);
}

constexpr int subsystem_count(Subsystems set) {
  const unsigned u = static_cast<unsigned>(set);
  return static_cast<int>((u & 1u) + ((u >> 1) & 1u) + ((u >> 2) & 1u));
}

std::string to_string(Subsystems set);

/// Parses "A", "AB", "BC", ... ; throws std::invalid_argument otherwise.
Subsystems subsystems_from_string(const std::string& text);

// ---------------------------------------------------------------------- dims

struct TripartiteDims {
  int l = 1;  // dim of A
  int m = 1;  // dim of B
  int n = 1;  // dim of C

  int total() const { return l * m * n; }
  int dim_of(Subsystems set) const;
  bool operator==(const TripartiteDims&) const = default;
};

/// Throws std::invalid_argument unless all dimensions are >= 1.
void validate(const TripartiteDims& dims);

// -------------------------------------------------------------- density type

/// Trace-one positive-semidefinite Hermitian matrix over the tensor factors
/// named in `support` (the full state has support ABC; partial traces
/// produce reduced supports).
class DensityMatrix {
 public:
  /// Validates squareness, dimension bookkeeping, Hermiticity (kHermitianTol),
  /// unit trace (kTraceTol) and eigenvalue floor (kEigenvalueFloor).
  static DensityMatrix make(ComplexMatrix matrix, TripartiteDims dims,
                            Subsystems support = Subsystems::ABC);

  const ComplexMatrix& matrix() const { return matrix_; }
  const TripartiteDims& dims() const { return dims_; }
  Subsystems support() const { return support_; }
  int dim() const { return static_cast<int>(matrix_.rows()); }

 private:
  DensityMatrix(ComplexMatrix matrix, TripartiteDims dims, Subsystems support)
      : matrix_(std::move(matrix)), dims_(dims), support_(support) {}

  ComplexMatrix matrix_;
  TripartiteDims dims_;
  Subsystems support_;
};

// ---------------------------------------------------------------- operations

/// Largest |m(i,j) - conj(m(j,i))| over all entries.
double hermiticity_error(const ComplexMatrix& m);

/// All eigenvalues of a Hermitian matrix, sorted ascending. Eigenvalues in
/// [kEigenvalueFloor, 0) are clamped to 0 for density-matrix use; anything
/// below the floor is returned as computed. Rejects non-Hermitian input and
/// eigendecompositions whose reconstruction residual exceeds
/// kEigenpairResidualTol * ||m||.
Eigen::VectorXd hermitian_eigenvalues(const ComplexMatrix& m);

/// Reduced state on `keep`, a nonempty subset of rho's support. keep equal
/// to the full support returns the input unchanged.
DensityMatrix partial_trace(const DensityMatrix& rho, Subsystems keep);

/// Ascending clamped spectrum of a density matrix, renormalized to sum
/// exactly 1 when the trace drift is within kTraceTol.
Spectrum spectrum_of(const DensityMatrix& rho);

// ---------------------------------------------------------------- file format
//
// JSON document with fields
//   dims:    [L, M, N]
//   entries: row-major array of [re, im] pairs, length (L*M*N)^2
// Parsers apply the same tolerances as DensityMatrix::make.

DensityMatrix load_density_matrix(std::istream& in);
DensityMatrix load_density_matrix(const std::string& path);
void save_density_matrix(const DensityMatrix& rho, std::ostream& out);
void save_density_matrix(const DensityMatrix& rho, const std::string& path);

}  // namespace ssalab
