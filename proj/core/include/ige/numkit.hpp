#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace ige {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct IgeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Simplex/NNLS/Dykstra exceeded its iteration cap (degenerate cycling or
/// pathological geometry); caller may perturb and retry.
struct IterationLimitError : IgeError {
  using IgeError::IgeError;
};

struct EmptyIntersectionError : IgeError {
  using IgeError::IgeError;
};

struct SingularMatrixError : IgeError {
  using IgeError::IgeError;
};

/// Numeric tolerances threaded through every module. All strictly positive.
struct Tolerances {
  double feas_tol = 1e-9;
  double kkt_tol = 1e-10;
  double sample_tol = 1e-6;
  int lp_max_iter = 50000;
  int nnls_max_iter = 5000;
  int dykstra_max_iter = 4000000;

  void validate() const {
    if (!(feas_tol > 0) || !(kkt_tol > 0) || !(sample_tol > 0))
      throw std::invalid_argument("Tolerances: all tolerances must be > 0");
    if (lp_max_iter <= 0 || nnls_max_iter <= 0 || dykstra_max_iter <= 0)
      throw std::invalid_argument("Tolerances: iteration caps must be > 0");
  }
};

/// Dense real vector. Construction rejects NaN/Inf entries.
class DenseVector {
 public:
  DenseVector() = default;
  explicit DenseVector(std::size_t n) : data_(n, 0.0) {}
  DenseVector(std::initializer_list<double> xs) : data_(xs) { check_finite(); }
  explicit DenseVector(std::vector<double> xs) : data_(std::move(xs)) { check_finite(); }

  std::size_t size() const { return data_.size(); }
  double& operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }
  const std::vector<double>& data() const { return data_; }
  std::vector<double>& data() { return data_; }

  bool operator==(const DenseVector&) const = default;

 private:
  void check_finite() const;
  std::vector<double> data_;
};

/// Dense row-major matrix. Construction rejects NaN/Inf entries.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> data);
  /// Builds from a list of equally sized rows.
  static DenseMatrix from_rows(const std::vector<DenseVector>& rows, std::size_t cols);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  DenseVector row(std::size_t i) const;
  const std::vector<double>& data() const { return data_; }

  bool operator==(const DenseMatrix&) const = default;

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<double> data_;
};

// Vector/matrix arithmetic. Everything is by-value and allocation-happy;
// dimensions stay in single digits throughout.
double dot(const DenseVector& a, const DenseVector& b);
double norm2(const DenseVector& a);
double norm_inf(const DenseVector& a);
DenseVector add(const DenseVector& a, const DenseVector& b);
DenseVector sub(const DenseVector& a, const DenseVector& b);
DenseVector scale(const DenseVector& a, double s);
DenseVector matvec(const DenseMatrix& m, const DenseVector& x);
DenseVector matvec_transposed(const DenseMatrix& m, const DenseVector& y);
DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix transpose(const DenseMatrix& m);
DenseMatrix identity(std::size_t n);

/// Solves Ax = b by LU with partial pivoting. Throws SingularMatrixError.
DenseVector solve_linear(DenseMatrix a, DenseVector b);

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending.
std::vector<double> jacobi_eigenvalues(DenseMatrix sym);

/// Smallest singular value of a (not necessarily square) matrix, computed
/// from the extreme eigenvalue of the Gram matrix on the shorter side.
/// For a surjective map this is its exact openness bound.
double smallest_singular_value(const DenseMatrix& m);
double largest_singular_value(const DenseMatrix& m);

enum class LpSense { LE, GE, EQ };
enum class LpStatus { Optimal, Infeasible, Unbounded };

/// max (or min) c.x subject to row constraints and variable bounds.
/// Bounds may be +/-infinity (stored as raw doubles on purpose).
struct LpProblem {
  DenseVector objective;
  bool maximize = true;
  DenseMatrix constraint_matrix;  // one row per constraint
  std::vector<LpSense> senses;
  DenseVector rhs;
  std::vector<double> lower;  // empty means all -inf
  std::vector<double> upper;  // empty means all +inf

  static LpProblem maximize_free(DenseVector c, DenseMatrix a, std::vector<LpSense> s,
                                 DenseVector b);
};

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  DenseVector point;
  double objective = 0.0;
  /// Lagrange multipliers of the constraint rows (zero unless Optimal).
  DenseVector row_duals;
};

/// Two-phase dense primal simplex. Switches to Bland's rule after
/// 3*(rows+cols) iterations to break degenerate cycles; throws
/// IterationLimitError past tol.lp_max_iter.
LpSolution solve_lp(const LpProblem& p, const Tolerances& tol = {});

struct NnlsResult {
  DenseVector coeffs;      // beta >= 0
  double residual_norm;    // |G beta - y|
  double kkt_residual;     // max stationarity/complementarity violation
  DenseVector point;       // G beta
};

/// Lawson-Hanson active-set nonnegative least squares: min |G beta - y|, beta >= 0.
NnlsResult nnls(const DenseMatrix& g, const DenseVector& y, const Tolerances& tol = {});

/// Closed halfspace {x : normal.x >= offset}.
struct Halfspace {
  DenseVector normal;
  double offset = 0.0;
};

struct ProjectionResult {
  DenseVector point;
  double distance;
};

/// Dykstra's alternating projection onto an intersection of halfspaces;
/// converges to the exact Euclidean projection. Throws EmptyIntersectionError
/// if a feasibility LP reports the intersection empty.
ProjectionResult dykstra_project(const std::vector<Halfspace>& halfspaces, const DenseVector& y,
                                 const Tolerances& tol = {});

/// Deterministic splitmix64-based generator used by every sampling loop.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next_u64();
  double uniform();                    // [0, 1)
  double uniform(double lo, double hi);
  double normal();
  DenseVector unit_vector(std::size_t n);
  DenseVector ball_point(std::size_t n, double radius);  // uniform direction, uniform-ish radius

 private:
  std::uint64_t state_;
};

}  // namespace ige
