#include "kmslab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace kmslab {

HermitianSpectrum hermitian_spectrum(const Matrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a);
  if (solver.info() != Eigen::Success) throw std::runtime_error("hermitian eigensolver failed");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

double hermiticity_defect(const Matrix& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("hermiticity_defect: matrix not square");
  if (a.size() == 0) return 0.0;
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

double operator_norm(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues()(0);
}

double smallest_singular_value(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues()(svd.singularValues().size() - 1);
}

double max_abs(const Matrix& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

double shannon_entropy(std::span<const double> probabilities) {
  double s = 0.0;
  for (double p : probabilities) {
    if (p <= 0.0) continue;
    const double c = std::min(p, 1.0);
    s -= c * std::log(c);
  }
  return s;
}

double von_neumann_entropy(const Matrix& rho) {
  const auto spec = hermitian_spectrum(0.5 * (rho + rho.adjoint()));
  double s = 0.0;
  for (Eigen::Index i = 0; i < spec.values.size(); ++i) {
    const double p = std::clamp(spec.values(i), 1e-300, 1.0);
    s -= p * std::log(p);
  }
  return s;
}

namespace {

std::vector<std::size_t> strides_of(std::span<const std::size_t> dims) {
  std::vector<std::size_t> s(dims.size());
  std::size_t acc = 1;
  for (std::size_t i = 0; i < dims.size(); ++i) {
    s[i] = acc;
    acc *= dims[i];
  }
  return s;
}

std::size_t total_dim(std::span<const std::size_t> dims) {
  std::size_t d = 1;
  for (auto x : dims) d *= x;
  return d;
}

void check_sites(std::span<const std::size_t> dims, std::span<const std::size_t> sites) {
  std::vector<bool> seen(dims.size(), false);
  for (auto s : sites) {
    if (s >= dims.size()) throw std::invalid_argument("qudit index out of range");
    if (seen[s]) throw std::invalid_argument("repeated qudit index");
    seen[s] = true;
  }
}

}  // namespace

Matrix partial_trace_qudits(const Matrix& rho, std::span<const std::size_t> dims,
                            std::span<const std::size_t> keep) {
  const std::size_t full = total_dim(dims);
  if (static_cast<std::size_t>(rho.rows()) != full || rho.rows() != rho.cols())
    throw std::invalid_argument("partial_trace_qudits: dimension mismatch");
  check_sites(dims, keep);

  const auto stride = strides_of(dims);
  std::vector<bool> kept(dims.size(), false);
  for (auto s : keep) kept[s] = true;

  std::vector<std::size_t> kept_dims;
  for (auto s : keep) kept_dims.push_back(dims[s]);
  const auto kept_stride = strides_of(kept_dims);
  const std::size_t out_dim = total_dim(kept_dims);

  // Split every full index into (kept part, traced part).
  std::vector<std::size_t> kept_index(full), traced_key(full);
  for (std::size_t idx = 0; idx < full; ++idx) {
    std::size_t k = 0, t = 0;
    for (std::size_t q = 0; q < dims.size(); ++q) {
      const std::size_t digit = (idx / stride[q]) % dims[q];
      if (!kept[q]) t += digit * stride[q];
    }
    for (std::size_t j = 0; j < keep.size(); ++j)
      k += ((idx / stride[keep[j]]) % dims[keep[j]]) * kept_stride[j];
    kept_index[idx] = k;
    traced_key[idx] = t;
  }

  Matrix out = Matrix::Zero(static_cast<Eigen::Index>(out_dim), static_cast<Eigen::Index>(out_dim));
  for (std::size_t r = 0; r < full; ++r)
    for (std::size_t c = 0; c < full; ++c)
      if (traced_key[r] == traced_key[c])
        out(static_cast<Eigen::Index>(kept_index[r]), static_cast<Eigen::Index>(kept_index[c])) +=
            rho(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
  return out;
}

Matrix embed_local(const Matrix& local, std::span<const std::size_t> dims,
                   std::span<const std::size_t> sites) {
  check_sites(dims, sites);
  const auto stride = strides_of(dims);
  std::vector<std::size_t> local_dims;
  for (auto s : sites) local_dims.push_back(dims[s]);
  const auto local_stride = strides_of(local_dims);
  const std::size_t local_dim = total_dim(local_dims);
  if (static_cast<std::size_t>(local.rows()) != local_dim || local.rows() != local.cols())
    throw std::invalid_argument("embed_local: local operator has wrong dimension");

  const std::size_t full = total_dim(dims);
  Matrix out = Matrix::Zero(static_cast<Eigen::Index>(full), static_cast<Eigen::Index>(full));
  for (std::size_t col = 0; col < full; ++col) {
    std::size_t local_col = 0, rest = col;
    for (std::size_t j = 0; j < sites.size(); ++j) {
      const std::size_t digit = (col / stride[sites[j]]) % dims[sites[j]];
      local_col += digit * local_stride[j];
      rest -= digit * stride[sites[j]];
    }
    for (std::size_t local_row = 0; local_row < local_dim; ++local_row) {
      const cplx v = local(static_cast<Eigen::Index>(local_row), static_cast<Eigen::Index>(local_col));
      if (v == cplx{}) continue;
      std::size_t row = rest;
      for (std::size_t j = 0; j < sites.size(); ++j)
        row += ((local_row / local_stride[j]) % local_dims[j]) * stride[sites[j]];
      out(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) += v;
    }
  }
  return out;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

}  // namespace kmslab
