#pragma once

#include "mhkg/graph.hpp"
#include "mhkg/types.hpp"

#include <Eigen/Jacobi>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

namespace mhkg {

// Ascending eigenvalues with orthonormal eigenvectors in matching columns.
template <typename Scalar>
struct SpectralDecomposition {
  VectorX<Scalar> eigenvalues;
  MatrixX<Scalar> eigenvectors;
  Scalar rho = Scalar(0);

  Index size() const { return eigenvalues.size(); }
};

using Spectrum = SpectralDecomposition<double>;

struct JacobiOptions {
  double tolerance = 1e-12;
  int max_sweeps = 100;
};

// Cyclic Jacobi eigensolver for symmetric matrices. Output is deterministic:
// eigenpairs are stably sorted by (eigenvalue, rotation index) and each
// eigenvector's first component larger than 1e-12 in magnitude is positive.
template <typename Derived>
SpectralDecomposition<typename Derived::Scalar> eig_sym(const Eigen::MatrixBase<Derived>& m,
                                                        const JacobiOptions& opt = {}) {
  using Scalar = typename Derived::Scalar;
  using std::abs;
  const Index n = m.rows();
  require(n > 0 && m.cols() == n, "eigendecomposition needs a non-empty square matrix");
  require(all_finite(m), "eigendecomposition input has non-finite entries");

  MatrixX<Scalar> a = m;
  const Scalar scale = std::max(Scalar(1), a.cwiseAbs().maxCoeff());
  const Scalar asym = (a - a.transpose()).cwiseAbs().maxCoeff();
  require(asym <= Scalar(1e-12) * scale,
          "eigendecomposition input is not symmetric (max asymmetry " + std::to_string(double(asym)) +
              ")");
  a = (a + a.transpose()) / Scalar(2);

  MatrixX<Scalar> v = MatrixX<Scalar>::Identity(n, n);
  const Scalar threshold = Scalar(opt.tolerance) * scale;
  auto max_off = [&] {
    Scalar off(0);
    for (Index q = 1; q < n; ++q)
      for (Index p = 0; p < q; ++p) off = std::max(off, abs(a(p, q)));
    return off;
  };

  bool converged = max_off() <= threshold;
  for (int sweep = 0; sweep < opt.max_sweeps && !converged; ++sweep) {
    for (Index p = 0; p < n - 1; ++p) {
      for (Index q = p + 1; q < n; ++q) {
        if (a(p, q) == Scalar(0)) continue;
        Eigen::JacobiRotation<Scalar> rot;
        rot.makeJacobi(a, p, q);
        a.applyOnTheLeft(p, q, rot.adjoint());
        a.applyOnTheRight(p, q, rot);
        a(p, q) = Scalar(0);
        a(q, p) = Scalar(0);
        a.col(p) = a.row(p).transpose();
        a.col(q) = a.row(q).transpose();
        v.applyOnTheRight(p, q, rot);
      }
    }
    converged = max_off() <= threshold;
  }
  if (!converged) {
    throw NumericError("Jacobi eigensolver did not converge in " +
                       std::to_string(opt.max_sweeps) + " sweeps");
  }

  std::vector<Index> order(n);
  std::iota(order.begin(), order.end(), Index(0));
  std::stable_sort(order.begin(), order.end(),
                   [&](Index i, Index j) { return a(i, i) < a(j, j); });

  SpectralDecomposition<Scalar> out;
  out.eigenvalues.resize(n);
  out.eigenvectors.resize(n, n);
  for (Index c = 0; c < n; ++c) {
    out.eigenvalues(c) = a(order[c], order[c]);
    auto col = out.eigenvectors.col(c);
    col = v.col(order[c]);
    for (Index r = 0; r < n; ++r) {
      if (abs(col(r)) > Scalar(1e-12)) {
        if (col(r) < Scalar(0)) col = -col;
        break;
      }
    }
  }
  out.rho = out.eigenvalues(n - 1);
  return out;
}

inline Spectrum laplacian_spectrum(const Graph& g) { return eig_sym(normalized_laplacian(g)); }

// U^T H
template <typename Scalar, typename Derived>
MatrixX<Scalar> graph_fourier(const SpectralDecomposition<Scalar>& d,
                              const Eigen::MatrixBase<Derived>& h) {
  require(h.rows() == d.size(), "signal has " + std::to_string(h.rows()) +
                                    " rows, expected " + std::to_string(d.size()));
  return d.eigenvectors.transpose() * h;
}

// U H_hat
template <typename Scalar, typename Derived>
MatrixX<Scalar> inverse_graph_fourier(const SpectralDecomposition<Scalar>& d,
                                      const Eigen::MatrixBase<Derived>& h_hat) {
  require(h_hat.rows() == d.size(), "spectral signal has " + std::to_string(h_hat.rows()) +
                                        " rows, expected " + std::to_string(d.size()));
  return d.eigenvectors * h_hat;
}

// U diag(r) U^T H without forming the N x N operator.
template <typename Scalar, typename DerivedR, typename DerivedH>
MatrixX<Scalar> spectral_filter(const SpectralDecomposition<Scalar>& d,
                                const Eigen::MatrixBase<DerivedR>& response,
                                const Eigen::MatrixBase<DerivedH>& h) {
  require(response.size() == d.size(), "response length does not match the spectrum");
  return d.eigenvectors * (response.asDiagonal() * graph_fourier(d, h));
}

// U diag(r) U^T as an exactly symmetric N x N matrix.
template <typename Scalar, typename DerivedR>
MatrixX<Scalar> spectral_operator(const SpectralDecomposition<Scalar>& d,
                                  const Eigen::MatrixBase<DerivedR>& response) {
  require(response.size() == d.size(), "response length does not match the spectrum");
  MatrixX<Scalar> op = d.eigenvectors * response.asDiagonal() * d.eigenvectors.transpose();
  return (op + op.transpose()) / Scalar(2);
}

template <typename Scalar>
Index zero_multiplicity(const SpectralDecomposition<Scalar>& d, double tol = 1e-9) {
  return (d.eigenvalues.array().abs() <= Scalar(tol)).count();
}

}  // namespace mhkg
