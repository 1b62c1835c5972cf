#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>

#include "starris/errors.hpp"

namespace starris {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;
inline constexpr double kLn2 = 0.69314718055994530942;

/// Uniform phase constellation {2*pi*k/L : k = 0..L-1}. levels == 0 means
/// continuous phase; every projection degenerates to angle wrapping.
struct PhaseGrid {
  int levels = 0;

  bool continuous() const { return levels == 0; }
  double step() const { return kTwoPi / levels; }
  double value(int k) const { return k * step(); }
};

/// Floored modulo of an angle into [0, 2*pi).
double wrap_angle(double theta);

/// Index of the grid point closest to theta on the circle. Exact ties
/// resolve to the smaller grid value. Requires levels > 0.
int proj_discrete_index(double theta, const PhaseGrid& grid);

/// Closest grid point to theta; wrapped theta itself when continuous.
double proj_discrete_phase(double theta, const PhaseGrid& grid);

struct HermitianEig {
  Eigen::MatrixXcd u;      // unitary, columns are eigenvectors
  Eigen::VectorXd lambda;  // descending, clamped to >= 0
};

/// Eigendecomposition of a (numerically) Hermitian PSD matrix. The input is
/// symmetrized first; tiny negative eigenvalues from roundoff are clamped to
/// zero, genuinely negative ones raise NotPsd.
HermitianEig hermitian_eig(const Eigen::MatrixXcd& h);

/// Root of a monotone function by bisection. Either endpoint may already be
/// a root; otherwise the endpoint values must differ in sign.
double bisect_root(const std::function<double(double)>& f, double lo,
                   double hi, double tol, int* iterations = nullptr);

}  // namespace starris
