#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "kmslab/decay.hpp"
#include "kmslab/fock.hpp"
#include "kmslab/kms.hpp"
#include "kmslab/linalg.hpp"

namespace kmslab::chain {

/// Nearest-neighbour coupling h[k][l][r][m] of the pair operator
///   P = sum h_klrm |k><r| (x) |l><m|
/// on a site of local dimension d.
class CouplingTensor {
 public:
  explicit CouplingTensor(std::size_t d);

  std::size_t local_dim() const { return d_; }

  cplx& operator()(std::size_t k, std::size_t l, std::size_t r, std::size_t m);
  cplx operator()(std::size_t k, std::size_t l, std::size_t r, std::size_t m) const;

  /// max |h_klrm - conj(h_rmkl)|.
  double hermiticity_defect() const;

  /// s_k = sum_{l,r,m} |h_klrm|.
  double growth_norm(std::size_t k) const;

  /// sum_{l,m} |h_0l0m|: the part that acts as an energy shift on |k><k|_0.
  double shift_norm() const;

  /// Copy embedded in local dimension d_new >= d, new entries zero.
  CouplingTensor padded(std::size_t d_new) const;

  /// Two-site matrix of P with the first site least significant.
  Matrix pair_operator() const;

 private:
  std::size_t index(std::size_t k, std::size_t l, std::size_t r, std::size_t m) const;

  std::size_t d_;
  std::vector<cplx> h_;
};

/// Periodic chain of `sites` truncated d-level sites.
struct ToyChainSpec {
  std::size_t sites = 2;
  std::size_t d = 2;
  CouplingTensor coupling{2};
  double beta = 1.0;
  /// Upper limit on d^sites.
  std::size_t max_dim = 4096;

  std::size_t dimension() const;
  /// Throws std::invalid_argument on a malformed spec (N < 2, d mismatch,
  /// non-Hermitian coupling, dimension overflow, beta <= 0).
  void validate() const;
};

/// H_N = sum_n [ sum_k k |k><k|_n + P_(n,n+1) + P_(n,n-1) ], indices mod N,
/// where P_(a,b) places the |k><r| factor on site a and |l><m| on site b.
Matrix build_hamiltonian(const ToyChainSpec& spec);

/// Single-site operator embedded at `site`.
Matrix site_operator(const ToyChainSpec& spec, const Matrix& local, std::size_t site);

/// |a><b| on one site.
Matrix matrix_unit(std::size_t d, std::size_t a, std::size_t b);

/// delta(X) = i[H_N, X] for X = |k><0|_0 (x) 1, and its analytic pieces.
///
/// The full commutator splits into i k X plus the contributions of the bonds to
/// the right and to the left of site 0, each built directly from the coupling
/// coefficients. `printed_*` keeps only the three terms of the short textbook
/// formula (diagonal, left term with h_rlkm, right term with -h_0lsm); for a
/// generic coupling those miss two contributions per bond and `printed_residual`
/// is reported rather than asserted.
struct LocalDerivative {
  Matrix commutator;
  Matrix diagonal_term;
  Matrix left_term;
  Matrix right_term;
  /// max |commutator - (diagonal + left + right)|.
  double residual = 0.0;
  Matrix printed_left_term;
  Matrix printed_right_term;
  double printed_residual = 0.0;
};

LocalDerivative local_derivative(const ToyChainSpec& spec, std::size_t k);

/// Growth condition sum_{lrm} |h_klrm| < c k^alpha, alpha <= 0, with k = 0
/// regularized as max(k, 1)^alpha.
struct CouplingCondition {
  double c_star = 0.0;
  std::vector<double> growth;
  double shift_norm = 0.0;
};

CouplingCondition coupling_condition(const CouplingTensor& coupling, double alpha);

/// Constants entering the occupation bound for A = |0><k|_0:
///  shift >= ||<0|_0 V |0>_0|| and h[k] >= ||<k|_0 V||, where V collects the four
///  coupling pieces touching site 0. Each piece is bounded by its exact local
///  operator norm and the pieces are added.
struct BoundConstants {
  double shift = 0.0;
  std::vector<double> h;
};

BoundConstants bound_constants(const CouplingTensor& coupling);

struct OccupationProfile {
  /// occupation_by_site[n][k] = w(|k><k|_n).
  std::vector<std::vector<double>> occupation_by_site;
  /// Site average.
  std::vector<double> occupation;
  /// tail[K] = sum_{k > K} occupation[k].
  std::vector<double> tail;
  /// max_{n,k} |occupation_by_site[n][k] - occupation_by_site[0][k]|.
  double translation_defect = 0.0;
};

OccupationProfile occupation_profile(const ToyChainSpec& spec);
OccupationProfile occupation_profile(const ToyChainSpec& spec, const Matrix& rho);

struct OccupationBoundRow {
  std::size_t k = 0;
  double occupation = 0.0;
  /// Decay query at lambda = beta k, h = beta h_k, shift = beta shift.
  decay::DecayQuery query;
  /// false when beta (k - shift) <= 0 (no bound available).
  bool has_bound = false;
  bool holds = true;
};

/// Measured site-0 occupations against the decay bound, k = 0..d-1.
std::vector<OccupationBoundRow> occupation_vs_bound(const ToyChainSpec& spec);

/// KMS gaps of the chain's Gibbs state for A = |0><k|_0, k = 0..d-1.
std::vector<kms::KmsGapReport> chain_kms_gaps(const ToyChainSpec& spec);

/// max_k<d |occupation_d(k) - occupation_{d+1}(k)| when the site space is
/// enlarged by one level (coupling padded with zeros).
double truncation_drift(const ToyChainSpec& spec);

struct WindowEntropy {
  std::size_t size = 0;
  double entropy = 0.0;
};

struct SubadditivityCheck {
  std::size_t left = 0;
  std::size_t right = 0;
  double joint = 0.0;
  double left_entropy = 0.0;
  double right_entropy = 0.0;
  bool holds = true;
};

struct EntropyReport {
  std::vector<WindowEntropy> windows;
  std::vector<SubadditivityCheck> subadditivity;
};

/// Entropies of the windows [0, w) for each requested w, and
/// S(AB) <= S(A) + S(B) (tolerance 1e-9) for adjacent windows A = [0, a),
/// B = [a, a + b) over every pair of requested sizes with a + b <= N.
EntropyReport local_entropy_report(const ToyChainSpec& spec, std::span<const std::size_t> window_sizes);

}  // namespace kmslab::chain
