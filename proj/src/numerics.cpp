#include "starris/numerics.hpp"

#include <algorithm>
#include <cmath>

namespace starris {

double wrap_angle(double theta) {
  double w = std::fmod(theta, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  if (w >= kTwoPi) w = 0.0;  // inputs just below a period can round up
  return w;
}

namespace {

double circular_distance(double a, double b) {
  return std::fabs(std::remainder(a - b, kTwoPi));
}

}  // namespace

int proj_discrete_index(double theta, const PhaseGrid& grid) {
  if (grid.continuous()) throw InvalidGrid("projection needs a finite grid");
  const double step = grid.step();
  const double w = wrap_angle(theta);
  const int below =
      std::min(static_cast<int>(std::floor(w / step)), grid.levels - 1);
  const int above = (below + 1) % grid.levels;
  const double d_below = circular_distance(w, grid.value(below));
  const double d_above = circular_distance(w, grid.value(above));
  // exact ties resolve to the smaller grid value
  if (d_above < d_below || (d_above == d_below && above < below)) return above;
  return below;
}

double proj_discrete_phase(double theta, const PhaseGrid& grid) {
  if (grid.continuous()) return wrap_angle(theta);
  return grid.value(proj_discrete_index(theta, grid));
}

HermitianEig hermitian_eig(const Eigen::MatrixXcd& h) {
  const Eigen::MatrixXcd sym = 0.5 * (h + h.adjoint());
  if ((h - sym).norm() > 1e-10 * std::max(1.0, h.norm()))
    throw NotHermitian("matrix is not Hermitian within tolerance");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(sym);
  if (es.info() != Eigen::Success)
    throw NotHermitian("eigendecomposition did not converge");
  const int n = static_cast<int>(h.rows());
  const double floor = -1e-10 * h.norm();
  HermitianEig out;
  out.u.resize(n, n);
  out.lambda.resize(n);
  for (int i = 0; i < n; ++i) {  // solver sorts ascending; flip to descending
    const double ev = es.eigenvalues()(n - 1 - i);
    if (ev < floor) throw NotPsd("matrix has a negative eigenvalue");
    out.lambda(i) = std::max(ev, 0.0);
    out.u.col(i) = es.eigenvectors().col(n - 1 - i);
  }
  return out;
}

double bisect_root(const std::function<double(double)>& f, double lo,
                   double hi, double tol, int* iterations) {
  if (!(lo <= hi) || !(tol > 0.0))
    throw std::invalid_argument("bisect_root needs lo <= hi and tol > 0");
  if (iterations) *iterations = 0;
  double flo = f(lo);
  if (flo == 0.0) return lo;
  double fhi = f(hi);
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0))
    throw NoSignChange("function has the same sign at both endpoints");
  const int max_iters =
      static_cast<int>(std::ceil(std::log2(std::max((hi - lo) / tol, 1.0)))) +
      2;
  int count = 0;
  while (hi - lo > tol && count < max_iters) {
    const double mid = 0.5 * (lo + hi);
    const double fmid = f(mid);
    ++count;
    if (fmid == 0.0) {
      lo = hi = mid;
      break;
    }
    if ((fmid > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
      fhi = fmid;
    }
  }
  if (iterations) *iterations = count;
  return 0.5 * (lo + hi);
}

}  // namespace starris
