#pragma once

#include <complex>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace robustness {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Numerical tolerances shared by every module. Verdicts quote these values.
namespace tol {
inline constexpr double hermitian = 1e-12;
inline constexpr double psd = 1e-9;  // minimum eigenvalue must be >= -psd
inline constexpr double trace = 1e-9;
inline constexpr double pure_norm = 1e-12;
inline constexpr double determinant = 1e-12;
inline constexpr double rank_cutoff = 1e-10;     // local ranks in support_info
inline constexpr double schmidt_zero = 1e-12;    // Schmidt coefficients treated as 0
inline constexpr double degenerate = 1e-9;       // eigenvalue clustering
inline constexpr double family_match = 1e-10;    // closed-form family recognition
}  // namespace tol

enum class ErrorKind {
  not_hermitian,
  invalid_state,
  bad_partition,
  not_bipartite,
  unsupported_dimension,
  product_state,
  not_entangled,
  not_separable_reference,
  inconsistent_bounds,
  not_converged,
  parse_error,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::not_hermitian: return "NotHermitian";
    case ErrorKind::invalid_state: return "InvalidState";
    case ErrorKind::bad_partition: return "BadPartition";
    case ErrorKind::not_bipartite: return "NotBipartite";
    case ErrorKind::unsupported_dimension: return "UnsupportedDimension";
    case ErrorKind::product_state: return "ProductState";
    case ErrorKind::not_entangled: return "NotEntangled";
    case ErrorKind::not_separable_reference: return "NotSeparableReference";
    case ErrorKind::inconsistent_bounds: return "InconsistentBounds";
    case ErrorKind::not_converged: return "NotConverged";
    case ErrorKind::parse_error: return "ParseError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Local dimensions n_1..n_N of the parties. The last party's index varies
/// fastest in the flattened basis.
class PartyStructure {
 public:
  PartyStructure() = default;

  explicit PartyStructure(std::vector<int> dims) : dims_(std::move(dims)) {
    if (dims_.empty()) throw Error(ErrorKind::bad_partition, "at least one party required");
    for (int d : dims_) {
      if (d < 1) throw Error(ErrorKind::bad_partition, "party dimensions must be positive");
    }
  }

  PartyStructure(std::initializer_list<int> dims) : PartyStructure(std::vector<int>(dims)) {}

  const std::vector<int>& dims() const noexcept { return dims_; }
  int parties() const noexcept { return static_cast<int>(dims_.size()); }
  int dim(int party) const { return dims_.at(static_cast<std::size_t>(party)); }
  int total() const noexcept {
    return std::accumulate(dims_.begin(), dims_.end(), 1, std::multiplies<>());
  }
  bool bipartite() const noexcept { return dims_.size() == 2; }

  /// Multi-index digits of a flattened index.
  std::vector<int> digits(int index) const {
    std::vector<int> out(dims_.size());
    for (int p = parties() - 1; p >= 0; --p) {
      out[static_cast<std::size_t>(p)] = index % dims_[static_cast<std::size_t>(p)];
      index /= dims_[static_cast<std::size_t>(p)];
    }
    return out;
  }

  int flatten(const std::vector<int>& digits) const {
    int index = 0;
    for (std::size_t p = 0; p < dims_.size(); ++p) index = index * dims_[p] + digits[p];
    return index;
  }

  friend bool operator==(const PartyStructure&, const PartyStructure&) = default;

 private:
  std::vector<int> dims_{1};
};

inline void require_bipartite(const PartyStructure& s, const char* what) {
  if (!s.bipartite()) throw Error(ErrorKind::not_bipartite, std::string(what) + " needs N = 2");
}

}  // namespace robustness
