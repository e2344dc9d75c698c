#include "ssalab/tensor.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace ssalab {

std::string to_string(Subsystems set) {
  std::string out;
  if (contains(set, Subsystems::A)) out += 'A';
  if (contains(set, Subsystems::B)) out += 'B';
  if (contains(set, Subsystems::C)) out += 'C';
  return out.empty() ? "none" : out;
}

Subsystems subsystems_from_string(const std::string& text) {
  unsigned bits = 0;
  for (char ch : text) {
    switch (ch) {
      case 'A': case 'a': bits |= 1u; break;
      case 'B': case 'b': bits |= 2u; break;
      case 'C': case 'c': bits |= 4u; break;
      default:
        throw std::invalid_argument("subsystems: unknown label '" + text + "'");
    }
  }
  if (bits == 0)
    throw std::invalid_argument("subsystems: empty label");
  return static_cast<Subsystems>(bits);
}

int TripartiteDims::dim_of(Subsystems set) const {
  int d = 1;
  if (contains(set, Subsystems::A)) d *= l;
  if (contains(set, Subsystems::B)) d *= m;
  if (contains(set, Subsystems::C)) d *= n;
  return d;
}

void validate(const TripartiteDims& dims) {
  if (dims.l < 1 || dims.m < 1 || dims.n < 1) {
    std::ostringstream msg;
    msg << "dims: subsystem dimensions must be >= 1, got (" << dims.l << ", "
        << dims.m << ", " << dims.n << ")";
    throw std::invalid_argument(msg.str());
  }
}

double hermiticity_error(const ComplexMatrix& m) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      worst = std::max(worst, std::abs(m(i, j) - std::conj(m(j, i))));
  return worst;
}

namespace {

void require_hermitian(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) {
    std::ostringstream msg;
    msg << "matrix: not square (" << m.rows() << "x" << m.cols() << ")";
    throw std::invalid_argument(msg.str());
  }
  const double err = hermiticity_error(m);
  if (err > kHermitianTol) {
    std::ostringstream msg;
    msg << "matrix: not Hermitian, max asymmetry " << err << " exceeds "
        << kHermitianTol;
    throw std::invalid_argument(msg.str());
  }
}

}  // namespace

Eigen::VectorXd hermitian_eigenvalues(const ComplexMatrix& m) {
  require_hermitian(m);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("eigensolver: failed to converge");

  const double scale = std::max(m.norm(), 1e-300);
  const ComplexMatrix residual =
      m * solver.eigenvectors() -
      solver.eigenvectors() * solver.eigenvalues().asDiagonal();
  for (Eigen::Index j = 0; j < residual.cols(); ++j) {
    if (residual.col(j).norm() > kEigenpairResidualTol * scale)
      throw std::runtime_error("eigensolver: eigenpair residual above bound");
  }

  Eigen::VectorXd vals = solver.eigenvalues();  // ascending
  for (Eigen::Index i = 0; i < vals.size(); ++i) {
    if (vals[i] >= kEigenvalueFloor && vals[i] < 0.0) vals[i] = 0.0;
  }
  return vals;
}

DensityMatrix DensityMatrix::make(ComplexMatrix matrix, TripartiteDims dims,
                                  Subsystems support) {
  validate(dims);
  require_hermitian(matrix);
  const int expected = dims.dim_of(support);
  if (matrix.rows() != expected) {
    std::ostringstream msg;
    msg << "density matrix: dimension " << matrix.rows()
        << " does not match support " << to_string(support) << " of dims ("
        << dims.l << ", " << dims.m << ", " << dims.n << ") = " << expected;
    throw std::invalid_argument(msg.str());
  }
  const double trace = matrix.trace().real();
  if (std::abs(trace - 1.0) > kTraceTol) {
    std::ostringstream msg;
    msg << "density matrix: trace " << trace << " deviates from 1 by more than "
        << kTraceTol;
    throw std::invalid_argument(msg.str());
  }
  const Eigen::VectorXd vals = hermitian_eigenvalues(matrix);
  if (vals[0] < kEigenvalueFloor) {
    std::ostringstream msg;
    msg << "density matrix: eigenvalue " << vals[0] << " below floor "
        << kEigenvalueFloor;
    throw std::invalid_argument(msg.str());
  }
  return DensityMatrix(std::move(matrix), dims, support);
}

DensityMatrix partial_trace(const DensityMatrix& rho, Subsystems keep) {
  if (static_cast<unsigned>(keep) == 0u)
    throw std::invalid_argument("partial_trace: empty keep set");
  if (!contains(rho.support(), keep)) {
    std::ostringstream msg;
    msg << "partial_trace: keep " << to_string(keep) << " not a subset of "
        << to_string(rho.support());
    throw std::invalid_argument(msg.str());
  }
  if (keep == rho.support()) return rho;

  // Factors present in the input, in A < B < C order.
  struct Factor {
    Subsystems id;
    int dim;
    bool kept;
  };
  std::vector<Factor> factors;
  for (Subsystems s : {Subsystems::A, Subsystems::B, Subsystems::C}) {
    if (contains(rho.support(), s))
      factors.push_back({s, rho.dims().dim_of(s), contains(keep, s)});
  }

  // Row-major strides over the present factors.
  const int count = static_cast<int>(factors.size());
  std::vector<int> stride(factors.size(), 1);
  for (int p = count - 2; p >= 0; --p)
    stride[p] = stride[p + 1] * factors[p + 1].dim;

  int kept_dim = 1, traced_dim = 1;
  for (const Factor& f : factors) (f.kept ? kept_dim : traced_dim) *= f.dim;

  // Odometer over a sub-list of factor positions.
  auto expand = [&](long index, bool kept_side) {
    long offset = 0;
    long rem = index;
    for (int p = count - 1; p >= 0; --p) {
      if (factors[p].kept != kept_side) continue;
      offset += (rem % factors[p].dim) * stride[p];
      rem /= factors[p].dim;
    }
    return offset;
  };

  ComplexMatrix reduced = ComplexMatrix::Zero(kept_dim, kept_dim);
  for (int i = 0; i < kept_dim; ++i) {
    const long row_base = expand(i, true);
    for (int j = 0; j < kept_dim; ++j) {
      const long col_base = expand(j, true);
      std::complex<double> acc = 0.0;
      for (int t = 0; t < traced_dim; ++t) {
        const long off = expand(t, false);
        acc += rho.matrix()(row_base + off, col_base + off);
      }
      reduced(i, j) = acc;
    }
  }
  return DensityMatrix::make(std::move(reduced), rho.dims(), keep);
}

Spectrum spectrum_of(const DensityMatrix& rho) {
  Eigen::VectorXd vals = hermitian_eigenvalues(rho.matrix());
  if (vals[0] < kEigenvalueFloor) {
    std::ostringstream msg;
    msg << "spectrum: eigenvalue " << vals[0] << " below floor "
        << kEigenvalueFloor;
    throw std::invalid_argument(msg.str());
  }
  double sum = 0.0;
  for (Eigen::Index i = 0; i < vals.size(); ++i) sum += vals[i];
  if (std::abs(sum - 1.0) > kTraceTol) {
    std::ostringstream msg;
    msg << "spectrum: eigenvalue sum " << sum << " drifts from 1 by more than "
        << kTraceTol;
    throw std::invalid_argument(msg.str());
  }

  std::vector<double> values(static_cast<size_t>(vals.size()));
  for (Eigen::Index i = 0; i < vals.size(); ++i)
    values[static_cast<size_t>(i)] = vals[i] / sum;

  SpectrumLabel label = SpectrumLabel::Abstract;
  switch (rho.support()) {
    case Subsystems::ABC: label = SpectrumLabel::ABC; break;
    case Subsystems::AB: label = SpectrumLabel::AB; break;
    case Subsystems::BC: label = SpectrumLabel::BC; break;
    case Subsystems::B: label = SpectrumLabel::B; break;
    default: break;
  }
  return Spectrum::make(std::move(values), label);
}

// ------------------------------------------------------------------- file IO

DensityMatrix load_density_matrix(std::istream& in) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("density matrix file: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("dims") || !doc.contains("entries"))
    throw std::invalid_argument(
        "density matrix file: expected object with 'dims' and 'entries'");
  const auto& jd = doc["dims"];
  if (!jd.is_array() || jd.size() != 3)
    throw std::invalid_argument("density matrix file: dims must be [L, M, N]");
  TripartiteDims dims{jd[0].get<int>(), jd[1].get<int>(), jd[2].get<int>()};
  validate(dims);

  const auto& entries = doc["entries"];
  const long dim = dims.total();
  if (!entries.is_array() ||
      entries.size() != static_cast<size_t>(dim) * static_cast<size_t>(dim))
    throw std::invalid_argument(
        "density matrix file: entries must hold (L*M*N)^2 [re, im] pairs");

  ComplexMatrix m(dim, dim);
  for (long i = 0; i < dim; ++i) {
    for (long j = 0; j < dim; ++j) {
      const auto& cell = entries[static_cast<size_t>(i * dim + j)];
      if (!cell.is_array() || cell.size() != 2)
        throw std::invalid_argument(
            "density matrix file: each entry must be a [re, im] pair");
      m(i, j) = {cell[0].get<double>(), cell[1].get<double>()};
    }
  }
  return DensityMatrix::make(std::move(m), dims);
}

DensityMatrix load_density_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw std::invalid_argument("density matrix file: cannot open " + path);
  return load_density_matrix(in);
}

void save_density_matrix(const DensityMatrix& rho, std::ostream& out) {
  if (rho.support() != Subsystems::ABC)
    throw std::invalid_argument(
        "density matrix file: only full (ABC) states are serializable; embed "
        "bipartite states as (L, M, 1)");
  nlohmann::ordered_json doc;
  doc["dims"] = {rho.dims().l, rho.dims().m, rho.dims().n};
  nlohmann::ordered_json entries = nlohmann::ordered_json::array();
  for (Eigen::Index i = 0; i < rho.matrix().rows(); ++i)
    for (Eigen::Index j = 0; j < rho.matrix().cols(); ++j)
      entries.push_back({rho.matrix()(i, j).real(), rho.matrix()(i, j).imag()});
  doc["entries"] = std::move(entries);
  out << doc.dump(2) << '\n';
}

void save_density_matrix(const DensityMatrix& rho, const std::string& path) {
  std::ofstream out(path);
  if (!out)
    throw std::invalid_argument("density matrix file: cannot write " + path);
  save_density_matrix(rho, out);
}

}  // namespace ssalab
