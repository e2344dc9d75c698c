#include "ssalab/stategen.hpp"

#include <json.hpp>

#include <sstream>
#include <stdexcept>

#include "ssalab/rng.hpp"

namespace ssalab {

namespace {

// Row-major fill keeps the draw order independent of Eigen's storage layout.
ComplexMatrix gaussian_matrix(int rows, int cols, SplitMix64& rng) {
  ComplexMatrix g(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) g(i, j) = rng.complex_gaussian();
  return g;
}

ComplexMatrix wishart_state(int dim, int rank, SplitMix64& rng) {
  const ComplexMatrix g = gaussian_matrix(dim, rank, rng);
  ComplexMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  // Symmetrize away the rounding skew of the product.
  rho = (rho + rho.adjoint().eval()) / 2.0;
  return rho;
}

ComplexMatrix pure_state(int dim, SplitMix64& rng) {
  Eigen::VectorXcd v(dim);
  for (int i = 0; i < dim; ++i) v[i] = rng.complex_gaussian();
  v /= v.norm();
  return v * v.adjoint();
}

ComplexMatrix projector_of_sum(int dim, const std::vector<int>& kets) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim);
  const double amp = 1.0 / std::sqrt(static_cast<double>(kets.size()));
  for (int k : kets) v[k] = amp;
  return v * v.adjoint();
}

/// Strictly positive diagonal entries, normalized to unit sum.
std::vector<double> random_simplex_interior(int n, SplitMix64& rng) {
  std::vector<double> w(static_cast<size_t>(n));
  double sum = 0.0;
  for (double& x : w) {
    x = rng.uniform(0.5, 1.5);
    sum += x;
  }
  for (double& x : w) x /= sum;
  return w;
}

ComplexMatrix factor_matrix(const FactorSpec& factor, int dim,
                            SplitMix64& rng) {
  switch (factor.kind) {
    case FactorSpec::Kind::GinibreFull:
      return wishart_state(dim, dim, rng);
    case FactorSpec::Kind::GinibreRank:
      if (factor.rank < 1 || factor.rank > dim)
        throw std::invalid_argument("generate: factor rank out of range");
      return wishart_state(dim, factor.rank, rng);
    case FactorSpec::Kind::PureRandom:
      return pure_state(dim, rng);
    case FactorSpec::Kind::Mixed:
      return ComplexMatrix::Identity(dim, dim) / static_cast<double>(dim);
  }
  throw std::invalid_argument("generate: unknown factor kind");
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

}  // namespace

std::string to_string(StateKind kind) {
  switch (kind) {
    case StateKind::GinibreFull: return "ginibre_full";
    case StateKind::GinibreRank: return "ginibre_rank";
    case StateKind::PureRandom: return "pure_random";
    case StateKind::Ghz: return "ghz";
    case StateKind::W: return "w";
    case StateKind::Product: return "product";
    case StateKind::Lemma2Construct: return "lemma2_construct";
  }
  return "ginibre_full";
}

StateKind state_kind_from_string(const std::string& text) {
  if (text == "ginibre_full") return StateKind::GinibreFull;
  if (text == "ginibre_rank") return StateKind::GinibreRank;
  if (text == "pure_random") return StateKind::PureRandom;
  if (text == "ghz") return StateKind::Ghz;
  if (text == "w") return StateKind::W;
  if (text == "product") return StateKind::Product;
  if (text == "lemma2_construct") return StateKind::Lemma2Construct;
  throw std::invalid_argument("generator: unknown kind '" + text + "'");
}

namespace {

std::string factor_kind_name(FactorSpec::Kind kind) {
  switch (kind) {
    case FactorSpec::Kind::GinibreFull: return "ginibre_full";
    case FactorSpec::Kind::GinibreRank: return "ginibre_rank";
    case FactorSpec::Kind::PureRandom: return "pure_random";
    case FactorSpec::Kind::Mixed: return "mixed";
  }
  return "ginibre_full";
}

FactorSpec::Kind factor_kind_from_string(const std::string& text) {
  if (text == "ginibre_full") return FactorSpec::Kind::GinibreFull;
  if (text == "ginibre_rank") return FactorSpec::Kind::GinibreRank;
  if (text == "pure_random") return FactorSpec::Kind::PureRandom;
  if (text == "mixed") return FactorSpec::Kind::Mixed;
  throw std::invalid_argument("generator: unknown factor kind '" + text + "'");
}

}  // namespace

GeneratorSpec GeneratorSpec::from_json_text(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("generator spec: ") + e.what());
  }
  GeneratorSpec spec;
  if (!doc.is_object() || !doc.contains("dims") || !doc.contains("kind"))
    throw std::invalid_argument(
        "generator spec: expected object with 'dims' and 'kind'");
  const auto& jd = doc["dims"];
  if (!jd.is_array() || jd.size() != 3)
    throw std::invalid_argument("generator spec: dims must be [L, M, N]");
  spec.dims = {jd[0].get<int>(), jd[1].get<int>(), jd[2].get<int>()};
  spec.kind = state_kind_from_string(doc["kind"].get<std::string>());
  spec.seed = doc.value("seed", std::uint64_t{0});
  spec.rank = doc.value("rank", 0);
  spec.zeros = doc.value("zeros", 0);
  if (doc.contains("factors")) {
    for (const auto& jf : doc["factors"]) {
      FactorSpec factor;
      factor.kind = factor_kind_from_string(jf.at("kind").get<std::string>());
      factor.rank = jf.value("rank", 0);
      spec.factors.push_back(factor);
    }
  }
  return spec;
}

std::string GeneratorSpec::to_json_text() const {
  nlohmann::ordered_json doc;
  doc["dims"] = {dims.l, dims.m, dims.n};
  doc["kind"] = to_string(kind);
  doc["seed"] = seed;
  if (kind == StateKind::GinibreRank) doc["rank"] = rank;
  if (kind == StateKind::Lemma2Construct) doc["zeros"] = zeros;
  if (kind == StateKind::Product) {
    nlohmann::ordered_json jf = nlohmann::ordered_json::array();
    for (const FactorSpec& factor : factors) {
      nlohmann::ordered_json one;
      one["kind"] = factor_kind_name(factor.kind);
      if (factor.kind == FactorSpec::Kind::GinibreRank)
        one["rank"] = factor.rank;
      jf.push_back(one);
    }
    doc["factors"] = std::move(jf);
  }
  return doc.dump();
}

DensityMatrix generate(const GeneratorSpec& spec) {
  validate(spec.dims);
  const int dim = spec.dims.total();
  SplitMix64 rng(spec.seed);

  switch (spec.kind) {
    case StateKind::GinibreFull:
      return DensityMatrix::make(wishart_state(dim, dim, rng), spec.dims);

    case StateKind::GinibreRank:
      if (spec.rank < 1 || spec.rank > dim) {
        std::ostringstream msg;
        msg << "generate: rank " << spec.rank << " out of [1, " << dim << "]";
        throw std::invalid_argument(msg.str());
      }
      return DensityMatrix::make(wishart_state(dim, spec.rank, rng), spec.dims);

    case StateKind::PureRandom:
      return DensityMatrix::make(pure_state(dim, rng), spec.dims);

    case StateKind::Ghz:
      if (spec.dims.l != 2 || spec.dims.m != 2 || spec.dims.n != 2)
        throw std::invalid_argument("generate: ghz requires dims (2,2,2)");
      return DensityMatrix::make(projector_of_sum(8, {0, 7}), spec.dims);

    case StateKind::W:
      if (spec.dims.l != 2 || spec.dims.m != 2 || spec.dims.n != 2)
        throw std::invalid_argument("generate: w requires dims (2,2,2)");
      return DensityMatrix::make(projector_of_sum(8, {1, 2, 4}), spec.dims);

    case StateKind::Product: {
      if (spec.factors.size() != 3)
        throw std::invalid_argument(
            "generate: product requires exactly three factors (A, B, C)");
      const int fdims[3] = {spec.dims.l, spec.dims.m, spec.dims.n};
      ComplexMatrix rho;
      for (int p = 0; p < 3; ++p) {
        SplitMix64 sub(derive_seed(spec.seed, static_cast<std::uint64_t>(p)));
        ComplexMatrix factor = factor_matrix(spec.factors[static_cast<size_t>(p)],
                                             fdims[p], sub);
        rho = (p == 0) ? factor : kron(rho, factor);
      }
      rho /= rho.trace().real();
      return DensityMatrix::make(std::move(rho), spec.dims);
    }

    case StateKind::Lemma2Construct: {
      const int bc_dim = spec.dims.m * spec.dims.n;
      if (spec.zeros < 0 || spec.zeros > bc_dim - 1) {
        std::ostringstream msg;
        msg << "generate: lemma2_construct zeros " << spec.zeros
            << " out of [0, " << bc_dim - 1 << "]";
        throw std::invalid_argument(msg.str());
      }
      // Diagonal factors give exact ranks: rank(rho_ABC) = L * (MN - s).
      const std::vector<double> wa = random_simplex_interior(spec.dims.l, rng);
      std::vector<double> wbc(static_cast<size_t>(bc_dim), 0.0);
      {
        const std::vector<double> tail =
            random_simplex_interior(bc_dim - spec.zeros, rng);
        for (int i = spec.zeros; i < bc_dim; ++i)
          wbc[static_cast<size_t>(i)] = tail[static_cast<size_t>(i - spec.zeros)];
      }
      ComplexMatrix rho = ComplexMatrix::Zero(dim, dim);
      for (int a = 0; a < spec.dims.l; ++a)
        for (int k = 0; k < bc_dim; ++k)
          rho(a * bc_dim + k, a * bc_dim + k) =
              wa[static_cast<size_t>(a)] * wbc[static_cast<size_t>(k)];
      return DensityMatrix::make(std::move(rho), spec.dims);
    }
  }
  throw std::invalid_argument("generate: unknown kind");
}

}  // namespace ssalab
