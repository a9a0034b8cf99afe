// Non-negative least squares on the normal equations (Lawson-Hanson style
// active set).  The fit problems here have a handful of unknowns, so the
// solver favors predictable arithmetic over scalability: restricted systems
// of one or two unknowns are solved in closed form (exact for exactly
// representable inputs), larger or singular ones go through Eigen's complete
// orthogonal decomposition, which also supplies the minimum-norm solution
// when the system is rank deficient.

#include "rmode/nnls.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace rmode::fit {

namespace {

// Solves G z = c restricted to the passive coordinates; zeros elsewhere.
Eigen::VectorXd restricted_solve(const Eigen::MatrixXd& G, const Eigen::VectorXd& c,
                                 const std::vector<int>& passive, bool& rank_deficient) {
  const auto n = c.size();
  Eigen::VectorXd z = Eigen::VectorXd::Zero(n);
  const std::size_t k = passive.size();
  if (k == 0) return z;

  if (k == 1) {
    const int j = passive[0];
    const double g = G(j, j);
    if (!(g > 0.0)) {
      rank_deficient = true;  // all-zero column; minimum-norm choice is 0
      return z;
    }
    z(j) = c(j) / g;
    return z;
  }

  if (k == 2) {
    const int p = passive[0];
    const int q = passive[1];
    const double gpp = G(p, p), gpq = G(p, q), gqq = G(q, q);
    const double det = gpp * gqq - gpq * gpq;
    // For a Gram matrix det <= gpp*gqq always; treat a vanishing ratio as
    // singular and fall through to the decomposition path.
    if (det > 1e-12 * std::max(gpp * gqq, gpq * gpq)) {
      z(p) = (c(p) * gqq - c(q) * gpq) / det;
      z(q) = (c(q) * gpp - c(p) * gpq) / det;
      return z;
    }
  }

  Eigen::MatrixXd Gpp(k, k);
  Eigen::VectorXd cp(k);
  for (std::size_t r = 0; r < k; ++r) {
    cp(r) = c(passive[r]);
    for (std::size_t s = 0; s < k; ++s) Gpp(r, s) = G(passive[r], passive[s]);
  }
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(Gpp);
  cod.setThreshold(1e-12);
  if (cod.rank() < static_cast<Eigen::Index>(k)) rank_deficient = true;
  const Eigen::VectorXd zp = cod.solve(cp);  // minimum-norm when singular
  for (std::size_t r = 0; r < k; ++r) z(passive[r]) = zp(r);
  return z;
}

}  // namespace

NnlsResult nnls_normal(const Eigen::MatrixXd& gram, const Eigen::VectorXd& rhs,
                       const NnlsOptions& opts) {
  const auto n = rhs.size();
  if (n < 1 || gram.rows() != n || gram.cols() != n) {
    throw std::invalid_argument("nnls_normal: gram must be square and match rhs");
  }
  if (!(opts.kkt_rel_tol >= 0.0) || !(opts.primal_rel_tol >= 0.0)) {
    throw std::invalid_argument("nnls_normal: negative tolerance");
  }

  NnlsResult result;
  result.x = Eigen::VectorXd::Zero(n);

  const double grad_tol = opts.kkt_rel_tol * rhs.cwiseAbs().maxCoeff();

  std::vector<char> passive(n, 0);
  std::vector<int> pidx;
  Eigen::VectorXd x_before = result.x;
  int stalls = 0;

  const int max_outer = 10 * static_cast<int>(n) + 30;
  for (int outer = 0; outer < max_outer; ++outer) {
    result.iterations = outer;
    const Eigen::VectorXd w = rhs - gram * result.x;

    int entering = -1;
    double w_best = grad_tol;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!passive[j] && w(j) > w_best) {
        w_best = w(j);
        entering = static_cast<int>(j);
      }
    }
    if (entering < 0) break;  // KKT holds: no active coordinate wants in

    x_before = result.x;
    passive[entering] = 1;

    for (int inner = 0; inner <= static_cast<int>(n) + 1; ++inner) {
      pidx.clear();
      for (Eigen::Index j = 0; j < n; ++j) {
        if (passive[j]) pidx.push_back(static_cast<int>(j));
      }
      if (pidx.empty()) break;

      bool deficient = false;
      Eigen::VectorXd z = restricted_solve(gram, rhs, pidx, deficient);
      if (deficient) result.rank_deficient = true;

      // Clamp rounding dust to the bound before judging feasibility, so a
      // coefficient that is zero up to noise terminates exactly at zero
      // instead of surviving as ~1e-14 and poisoning its square root.
      double z_max = 0.0;
      for (int j : pidx) z_max = std::max(z_max, std::abs(z(j)));
      const double snap = opts.primal_rel_tol * z_max;
      for (int j : pidx) {
        if (z(j) > 0.0 && z(j) <= snap) z(j) = 0.0;
      }

      bool feasible = true;
      for (int j : pidx) {
        if (!(z(j) > 0.0)) {
          feasible = false;
          break;
        }
      }
      if (feasible) {
        result.x = z;
        break;
      }

      // Step from x toward z, stopping where the first coordinate hits the
      // bound; that coordinate (at least) leaves the passive set.
      double alpha = std::numeric_limits<double>::infinity();
      for (int j : pidx) {
        if (z(j) <= 0.0) {
          const double denom = result.x(j) - z(j);
          alpha = std::min(alpha, denom > 0.0 ? result.x(j) / denom : 0.0);
        }
      }
      if (!std::isfinite(alpha)) alpha = 0.0;

      for (int j : pidx) {
        const double moved = result.x(j) + alpha * (z(j) - result.x(j));
        result.x(j) = moved;
      }
      for (int j : pidx) {
        if (!(result.x(j) > 0.0) || (z(j) <= 0.0 && result.x(j) <= snap)) {
          result.x(j) = 0.0;
          passive[j] = 0;
        }
      }
    }

    // Anti-cycling: two consecutive outer rounds without movement means the
    // remaining gradients are numerically meaningless.
    if (result.x.cwiseEqual(x_before).all()) {
      if (++stalls >= 2) break;
    } else {
      stalls = 0;
    }
  }

  for (Eigen::Index j = 0; j < n; ++j) {
    if (result.x(j) < 0.0) result.x(j) = 0.0;
  }
  return result;
}

}  // namespace rmode::fit
