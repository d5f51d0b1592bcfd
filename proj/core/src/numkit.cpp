#include "ige/numkit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace ige {

void DenseVector::check_finite() const {
  for (double v : data_)
    if (!std::isfinite(v)) throw std::invalid_argument("DenseVector: non-finite entry");
}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows * cols) throw std::invalid_argument("DenseMatrix: size mismatch");
  for (double v : data_)
    if (!std::isfinite(v)) throw std::invalid_argument("DenseMatrix: non-finite entry");
}

DenseMatrix DenseMatrix::from_rows(const std::vector<DenseVector>& rows, std::size_t cols) {
  DenseMatrix m(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) throw std::invalid_argument("DenseMatrix: ragged rows");
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

DenseVector DenseMatrix::row(std::size_t i) const {
  DenseVector r(cols_);
  for (std::size_t j = 0; j < cols_; ++j) r[j] = (*this)(i, j);
  return r;
}

double dot(const DenseVector& a, const DenseVector& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(const DenseVector& a) { return std::sqrt(dot(a, a)); }

double norm_inf(const DenseVector& a) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s = std::max(s, std::abs(a[i]));
  return s;
}

DenseVector add(const DenseVector& a, const DenseVector& b) {
  DenseVector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

DenseVector sub(const DenseVector& a, const DenseVector& b) {
  DenseVector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

DenseVector scale(const DenseVector& a, double s) {
  DenseVector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] * s;
  return r;
}

DenseVector matvec(const DenseMatrix& m, const DenseVector& x) {
  DenseVector r(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    double s = 0;
    for (std::size_t j = 0; j < m.cols(); ++j) s += m(i, j) * x[j];
    r[i] = s;
  }
  return r;
}

DenseVector matvec_transposed(const DenseMatrix& m, const DenseVector& y) {
  DenseVector r(m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r[j] += m(i, j) * y[i];
  return r;
}

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
  DenseMatrix r(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      double v = a(i, k);
      if (v == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) r(i, j) += v * b(k, j);
    }
  return r;
}

DenseMatrix transpose(const DenseMatrix& m) {
  DenseMatrix r(m.cols(), m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r(j, i) = m(i, j);
  return r;
}

DenseMatrix identity(std::size_t n) {
  DenseMatrix r(n, n);
  for (std::size_t i = 0; i < n; ++i) r(i, i) = 1.0;
  return r;
}

DenseVector solve_linear(DenseMatrix a, DenseVector b) {
  const std::size_t n = a.rows();
  if (a.cols() != n || b.size() != n) throw std::invalid_argument("solve_linear: dims");
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    double best = std::abs(a(k, k));
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(a(i, k)) > best) { best = std::abs(a(i, k)); piv = i; }
    if (best < 1e-13) throw SingularMatrixError("solve_linear: singular pivot");
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
      std::swap(b[k], b[piv]);
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      double f = a(i, k) / a(k, k);
      if (f == 0) continue;
      for (std::size_t j = k; j < n; ++j) a(i, j) -= f * a(k, j);
      b[i] -= f * b[k];
    }
  }
  DenseVector x(n);
  for (std::size_t ii = n; ii-- > 0;) {
    double s = b[ii];
    for (std::size_t j = ii + 1; j < n; ++j) s -= a(ii, j) * x[j];
    x[ii] = s / a(ii, ii);
  }
  return x;
}

std::vector<double> jacobi_eigenvalues(DenseMatrix a) {
  const std::size_t n = a.rows();
  if (a.cols() != n) throw std::invalid_argument("jacobi_eigenvalues: square input required");
  double diag_scale = 1.0;
  for (std::size_t i = 0; i < n; ++i) diag_scale = std::max(diag_scale, std::abs(a(i, i)));
  for (int sweep = 0; sweep < 128; ++sweep) {
    double off = 0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (std::sqrt(off) < 1e-15 * diag_scale) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::abs(a(p, q)) < 1e-300) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
      }
    }
  }
  std::vector<double> eig(n);
  for (std::size_t i = 0; i < n; ++i) eig[i] = a(i, i);
  std::sort(eig.begin(), eig.end());
  return eig;
}

double smallest_singular_value(const DenseMatrix& m) {
  // Gram on the range side: openness of a map R^n -> R^m is governed by
  // the m x m matrix M M^T (zero exactly when the map is not onto).
  DenseMatrix gram = matmul(m, transpose(m));
  auto eig = jacobi_eigenvalues(gram);
  double lo = eig.empty() ? 0.0 : eig.front();
  return std::sqrt(std::max(0.0, lo));
}

double largest_singular_value(const DenseMatrix& m) {
  DenseMatrix gram = (m.rows() <= m.cols()) ? matmul(m, transpose(m))
                                            : matmul(transpose(m), m);
  auto eig = jacobi_eigenvalues(gram);
  double hi = eig.empty() ? 0.0 : eig.back();
  return std::sqrt(std::max(0.0, hi));
}

LpProblem LpProblem::maximize_free(DenseVector c, DenseMatrix a, std::vector<LpSense> s,
                                   DenseVector b) {
  LpProblem p;
  p.objective = std::move(c);
  p.constraint_matrix = std::move(a);
  p.senses = std::move(s);
  p.rhs = std::move(b);
  return p;
}

namespace {

// Dense tableau simplex over the standard-form system built in solve_lp.
struct Tableau {
  std::size_t nrows, ncols;      // ncols excludes the rhs column
  std::vector<std::vector<double>> t;  // nrows x (ncols+1)
  std::vector<std::size_t> basis;      // column basic in each row

  double& rhs(std::size_t i) { return t[i][ncols]; }
};

enum class CoreStatus { Optimal, Unbounded };

CoreStatus simplex_core(Tableau& tb, const std::vector<double>& cost,
                        const std::vector<char>& allowed, const Tolerances& tol,
                        int& iter_budget) {
  const double piv_tol = 1e-10;
  std::vector<double> zrow(tb.ncols, 0.0);
  auto recompute_zrow = [&] {
    for (std::size_t j = 0; j < tb.ncols; ++j) {
      double z = -cost[j];
      for (std::size_t i = 0; i < tb.nrows; ++i) z += cost[tb.basis[i]] * tb.t[i][j];
      zrow[j] = z;
    }
  };
  recompute_zrow();

  const long bland_after = 3 * static_cast<long>(tb.nrows + tb.ncols);
  long iters = 0;
  while (true) {
    if (--iter_budget <= 0) throw IterationLimitError("solve_lp: iteration cap exceeded");
    const bool bland = ++iters > bland_after;
    std::size_t enter = tb.ncols;
    double best = -piv_tol;
    for (std::size_t j = 0; j < tb.ncols; ++j) {
      if (!allowed[j]) continue;
      if (zrow[j] < best) {
        best = zrow[j];
        enter = j;
        if (bland) break;  // first eligible index
      }
    }
    if (enter == tb.ncols) return CoreStatus::Optimal;

    std::size_t leave = tb.nrows;
    double best_ratio = 0;
    for (std::size_t i = 0; i < tb.nrows; ++i) {
      const double a = tb.t[i][enter];
      if (a <= piv_tol) continue;
      const double ratio = tb.rhs(i) / a;
      if (leave == tb.nrows || ratio < best_ratio - 1e-12 ||
          (bland && std::abs(ratio - best_ratio) <= 1e-12 && tb.basis[i] < tb.basis[leave])) {
        leave = i;
        best_ratio = ratio;
      }
    }
    if (leave == tb.nrows) return CoreStatus::Unbounded;

    // Pivot.
    const double p = tb.t[leave][enter];
    for (std::size_t j = 0; j <= tb.ncols; ++j) tb.t[leave][j] /= p;
    for (std::size_t i = 0; i < tb.nrows; ++i) {
      if (i == leave) continue;
      const double f = tb.t[i][enter];
      if (f == 0) continue;
      for (std::size_t j = 0; j <= tb.ncols; ++j) tb.t[i][j] -= f * tb.t[leave][j];
    }
    {
      const double f = zrow[enter];
      for (std::size_t j = 0; j < tb.ncols; ++j) zrow[j] -= f * tb.t[leave][j];
    }
    tb.basis[leave] = enter;
  }
}

}  // namespace

LpSolution solve_lp(const LpProblem& p, const Tolerances& tol) {
  tol.validate();
  const std::size_t n = p.objective.size();
  const std::size_t m0 = p.constraint_matrix.rows();
  if (p.constraint_matrix.cols() != n && m0 > 0)
    throw std::invalid_argument("solve_lp: constraint matrix width mismatch");
  if (p.senses.size() != m0 || p.rhs.size() != m0)
    throw std::invalid_argument("solve_lp: senses/rhs size mismatch");
  if (!p.lower.empty() && p.lower.size() != n)
    throw std::invalid_argument("solve_lp: lower bounds size mismatch");
  if (!p.upper.empty() && p.upper.size() != n)
    throw std::invalid_argument("solve_lp: upper bounds size mismatch");

  auto lb = [&](std::size_t j) { return p.lower.empty() ? -kInf : p.lower[j]; };
  auto ub = [&](std::size_t j) { return p.upper.empty() ? kInf : p.upper[j]; };

  // Substitute every variable by nonnegative ones. col_of[j] lists the
  // transformed columns of original variable j as (column, sign); shift[j]
  // is the additive offset.
  struct VarMap {
    std::vector<std::pair<std::size_t, double>> cols;
    double shift = 0;
  };
  std::vector<VarMap> vmap(n);
  std::vector<double> cost_t;           // transformed costs
  std::vector<std::vector<double>> col_coeff;  // per transformed var: original-row coefficients
  std::vector<std::pair<std::size_t, double>> bound_rows;  // (transformed var, upper bound value)

  const double sgn_obj = p.maximize ? 1.0 : -1.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double l = lb(j), u = ub(j);
    std::vector<double> aj(m0);
    for (std::size_t i = 0; i < m0; ++i) aj[i] = p.constraint_matrix(i, j);
    if (std::isfinite(l)) {
      vmap[j].shift = l;
      vmap[j].cols.push_back({cost_t.size(), 1.0});
      cost_t.push_back(sgn_obj * p.objective[j]);
      col_coeff.push_back(aj);
      if (std::isfinite(u)) bound_rows.push_back({cost_t.size() - 1, u - l});
    } else if (std::isfinite(u)) {
      vmap[j].shift = u;
      vmap[j].cols.push_back({cost_t.size(), -1.0});
      cost_t.push_back(-sgn_obj * p.objective[j]);
      std::vector<double> neg(m0);
      for (std::size_t i = 0; i < m0; ++i) neg[i] = -aj[i];
      col_coeff.push_back(neg);
    } else {
      vmap[j].cols.push_back({cost_t.size(), 1.0});
      cost_t.push_back(sgn_obj * p.objective[j]);
      col_coeff.push_back(aj);
      vmap[j].cols.push_back({cost_t.size(), -1.0});
      cost_t.push_back(-sgn_obj * p.objective[j]);
      std::vector<double> neg(m0);
      for (std::size_t i = 0; i < m0; ++i) neg[i] = -aj[i];
      col_coeff.push_back(neg);
    }
  }

  const std::size_t nv = cost_t.size();
  const std::size_t mt = m0 + bound_rows.size();

  // Row data in transformed variables.
  std::vector<std::vector<double>> arow(mt, std::vector<double>(nv, 0.0));
  std::vector<double> brow(mt, 0.0);
  std::vector<LpSense> senses(mt, LpSense::LE);
  for (std::size_t i = 0; i < m0; ++i) {
    senses[i] = p.senses[i];
    double shift_total = 0;
    for (std::size_t j = 0; j < n; ++j) shift_total += p.constraint_matrix(i, j) * vmap[j].shift;
    brow[i] = p.rhs[i] - shift_total;
    for (std::size_t v = 0; v < nv; ++v) arow[i][v] = col_coeff[v][i];
  }
  for (std::size_t k = 0; k < bound_rows.size(); ++k) {
    arow[m0 + k][bound_rows[k].first] = 1.0;
    brow[m0 + k] = bound_rows[k].second;
    senses[m0 + k] = LpSense::LE;
  }

  // Standard form: slacks, row sign normalization, artificial per row.
  std::size_t nslack = 0;
  for (auto s : senses)
    if (s != LpSense::EQ) ++nslack;
  const std::size_t ncols = nv + nslack + mt;  // + artificials
  Tableau tb;
  tb.nrows = mt;
  tb.ncols = ncols;
  tb.t.assign(mt, std::vector<double>(ncols + 1, 0.0));
  tb.basis.assign(mt, 0);
  std::vector<double> sigma(mt, 1.0);
  {
    std::size_t slack_at = nv;
    for (std::size_t i = 0; i < mt; ++i) {
      for (std::size_t v = 0; v < nv; ++v) tb.t[i][v] = arow[i][v];
      if (senses[i] == LpSense::LE) tb.t[i][slack_at++] = 1.0;
      else if (senses[i] == LpSense::GE) tb.t[i][slack_at++] = -1.0;
      tb.t[i][ncols] = brow[i];
      if (tb.t[i][ncols] < 0) {
        sigma[i] = -1.0;
        for (std::size_t j = 0; j <= ncols; ++j) tb.t[i][j] = -tb.t[i][j];
      }
      tb.t[i][nv + nslack + i] = 1.0;  // artificial
      tb.basis[i] = nv + nslack + i;
    }
  }

  int iter_budget = tol.lp_max_iter;

  // Phase 1: drive artificials to zero.
  {
    std::vector<double> c1(ncols, 0.0);
    for (std::size_t i = 0; i < mt; ++i) c1[nv + nslack + i] = -1.0;
    std::vector<char> allowed(ncols, 1);
    simplex_core(tb, c1, allowed, tol, iter_budget);
    double art_sum = 0;
    for (std::size_t i = 0; i < mt; ++i)
      if (tb.basis[i] >= nv + nslack) art_sum += tb.rhs(i);
    double bscale = 1.0;
    for (std::size_t i = 0; i < mt; ++i) bscale = std::max(bscale, std::abs(brow[i]));
    if (art_sum > tol.feas_tol * bscale * 10) {
      LpSolution out;
      out.status = LpStatus::Infeasible;
      out.point = DenseVector(n);
      out.row_duals = DenseVector(m0);
      return out;
    }
    // Pivot remaining artificials out where possible; drop redundant rows.
    for (std::size_t i = 0; i < tb.nrows;) {
      if (tb.basis[i] < nv + nslack) { ++i; continue; }
      std::size_t piv = ncols;
      for (std::size_t j = 0; j < nv + nslack; ++j)
        if (std::abs(tb.t[i][j]) > 1e-9) { piv = j; break; }
      if (piv == ncols) {
        tb.t.erase(tb.t.begin() + static_cast<long>(i));
        tb.basis.erase(tb.basis.begin() + static_cast<long>(i));
        --tb.nrows;
        continue;
      }
      const double pv = tb.t[i][piv];
      for (std::size_t j = 0; j <= ncols; ++j) tb.t[i][j] /= pv;
      for (std::size_t r = 0; r < tb.nrows; ++r) {
        if (r == i) continue;
        const double f = tb.t[r][piv];
        if (f == 0) continue;
        for (std::size_t j = 0; j <= ncols; ++j) tb.t[r][j] -= f * tb.t[i][j];
      }
      tb.basis[i] = piv;
      ++i;
    }
  }

  // Phase 2: optimize the real objective with artificials locked out.
  std::vector<double> c2(ncols, 0.0);
  for (std::size_t v = 0; v < nv; ++v) c2[v] = cost_t[v];
  std::vector<char> allowed(ncols, 1);
  for (std::size_t j = nv + nslack; j < ncols; ++j) allowed[j] = 0;
  const CoreStatus st = simplex_core(tb, c2, allowed, tol, iter_budget);

  LpSolution out;
  out.point = DenseVector(n);
  out.row_duals = DenseVector(m0);
  if (st == CoreStatus::Unbounded) {
    out.status = LpStatus::Unbounded;
    return out;
  }

  std::vector<double> uvals(nv, 0.0);
  for (std::size_t i = 0; i < tb.nrows; ++i)
    if (tb.basis[i] < nv) uvals[tb.basis[i]] = tb.rhs(i);
  for (std::size_t j = 0; j < n; ++j) {
    double x = vmap[j].shift;
    for (auto [col, s] : vmap[j].cols) x += s * uvals[col];
    out.point[j] = x;
  }
  out.objective = dot(p.objective, out.point);
  out.status = LpStatus::Optimal;

  // Duals read off the artificial columns: z-row entry of artificial i equals
  // (c_B B^-1)_i in the sign-normalized system. Rows deleted as redundant
  // keep a zero multiplier.
  {
    std::vector<double> yhat(mt, 0.0);
    for (std::size_t i = 0; i < mt; ++i) {
      const std::size_t artcol = nv + nslack + i;
      double z = 0;
      for (std::size_t r = 0; r < tb.nrows; ++r) z += c2[tb.basis[r]] * tb.t[r][artcol];
      yhat[i] = z;
    }
    for (std::size_t i = 0; i < m0; ++i) out.row_duals[i] = sgn_obj * sigma[i] * yhat[i];
  }
  return out;
}

NnlsResult nnls(const DenseMatrix& g, const DenseVector& y, const Tolerances& tol) {
  const std::size_t m = g.rows(), k = g.cols();
  if (k == 0) throw std::invalid_argument("nnls: need at least one column");
  if (y.size() != m) throw std::invalid_argument("nnls: rhs size mismatch");

  DenseVector beta(k);
  std::vector<char> passive(k, 0);
  const double enter_tol = tol.kkt_tol * std::max(1.0, norm2(y));

  auto residual = [&] {
    DenseVector r = y;
    for (std::size_t j = 0; j < k; ++j) {
      if (beta[j] == 0) continue;
      for (std::size_t i = 0; i < m; ++i) r[i] -= g(i, j) * beta[j];
    }
    return r;
  };

  auto solve_passive = [&](const std::vector<std::size_t>& idx) -> DenseVector {
    const std::size_t np = idx.size();
    DenseMatrix gtg(np, np);
    DenseVector gty(np);
    for (std::size_t a = 0; a < np; ++a) {
      for (std::size_t b = a; b < np; ++b) {
        double s = 0;
        for (std::size_t i = 0; i < m; ++i) s += g(i, idx[a]) * g(i, idx[b]);
        gtg(a, b) = gtg(b, a) = s;
      }
      double s = 0;
      for (std::size_t i = 0; i < m; ++i) s += g(i, idx[a]) * y[i];
      gty[a] = s;
    }
    try {
      return solve_linear(gtg, gty);
    } catch (const SingularMatrixError&) {
      // Collinear columns: fall back to a ridge-regularized solve.
      double tr = 0;
      for (std::size_t a = 0; a < np; ++a) tr += gtg(a, a);
      for (std::size_t a = 0; a < np; ++a) gtg(a, a) += std::max(1e-12, 1e-12 * tr);
      return solve_linear(gtg, gty);
    }
  };

  int outer = tol.nnls_max_iter;
  while (true) {
    if (--outer <= 0) throw IterationLimitError("nnls: iteration cap exceeded");
    DenseVector r = residual();
    // w = G^T r, the negative gradient.
    double wbest = enter_tol;
    std::size_t jbest = k;
    for (std::size_t j = 0; j < k; ++j) {
      if (passive[j]) continue;
      double w = 0;
      for (std::size_t i = 0; i < m; ++i) w += g(i, j) * r[i];
      if (w > wbest) { wbest = w; jbest = j; }
    }
    if (jbest == k) break;
    passive[jbest] = 1;

    int inner = tol.nnls_max_iter;
    while (true) {
      if (--inner <= 0) throw IterationLimitError("nnls: inner iteration cap exceeded");
      std::vector<std::size_t> idx;
      for (std::size_t j = 0; j < k; ++j)
        if (passive[j]) idx.push_back(j);
      if (idx.empty()) break;
      DenseVector z = solve_passive(idx);
      bool all_pos = true;
      for (std::size_t a = 0; a < idx.size(); ++a)
        if (z[a] <= 0) { all_pos = false; break; }
      if (all_pos) {
        for (std::size_t j = 0; j < k; ++j) beta[j] = 0;
        for (std::size_t a = 0; a < idx.size(); ++a) beta[idx[a]] = z[a];
        break;
      }
      double alpha = 1.0;
      for (std::size_t a = 0; a < idx.size(); ++a) {
        if (z[a] > 0) continue;
        const double bj = beta[idx[a]];
        const double step = bj / (bj - z[a]);
        alpha = std::min(alpha, step);
      }
      for (std::size_t a = 0; a < idx.size(); ++a) {
        const std::size_t j = idx[a];
        beta[j] += alpha * (z[a] - beta[j]);
        if (beta[j] <= 1e-14) { beta[j] = 0; passive[j] = 0; }
      }
    }
  }

  NnlsResult res;
  res.coeffs = beta;
  DenseVector gb(m);
  for (std::size_t j = 0; j < k; ++j)
    for (std::size_t i = 0; i < m; ++i) gb[i] += g(i, j) * beta[j];
  res.point = gb;
  res.residual_norm = norm2(sub(gb, y));
  // KKT: gradient G^T(G beta - y) >= 0, complementary with beta.
  double kkt = 0;
  DenseVector grad = matvec_transposed(g, sub(gb, y));
  for (std::size_t j = 0; j < k; ++j) {
    kkt = std::max(kkt, -grad[j]);
    kkt = std::max(kkt, std::abs(beta[j] * grad[j]));
  }
  res.kkt_residual = std::max(0.0, kkt);
  return res;
}

ProjectionResult dykstra_project(const std::vector<Halfspace>& halfspaces, const DenseVector& y,
                                 const Tolerances& tol) {
  const std::size_t n = y.size();
  if (halfspaces.empty()) return {y, 0.0};
  for (const auto& h : halfspaces)
    if (h.normal.size() != n) throw std::invalid_argument("dykstra_project: dims");

  {
    // Feasibility probe before iterating.
    DenseMatrix a(halfspaces.size(), n);
    DenseVector b(halfspaces.size());
    std::vector<LpSense> s(halfspaces.size(), LpSense::GE);
    for (std::size_t i = 0; i < halfspaces.size(); ++i) {
      for (std::size_t j = 0; j < n; ++j) a(i, j) = halfspaces[i].normal[j];
      b[i] = halfspaces[i].offset;
    }
    LpProblem fp = LpProblem::maximize_free(DenseVector(n), std::move(a), std::move(s), std::move(b));
    if (solve_lp(fp, tol).status == LpStatus::Infeasible)
      throw EmptyIntersectionError("dykstra_project: empty intersection");
  }

  std::vector<double> nrm2(halfspaces.size());
  for (std::size_t i = 0; i < halfspaces.size(); ++i) {
    nrm2[i] = dot(halfspaces[i].normal, halfspaces[i].normal);
    if (nrm2[i] <= 0) throw std::invalid_argument("dykstra_project: zero normal");
  }

  DenseVector x = y;
  std::vector<DenseVector> corr(halfspaces.size(), DenseVector(n));
  DenseVector prev = x;
  auto feasible = [&](const DenseVector& z) {
    for (std::size_t i = 0; i < halfspaces.size(); ++i) {
      const double scale = std::sqrt(nrm2[i]) * std::max(1.0, norm2(z));
      if (dot(halfspaces[i].normal, z) < halfspaces[i].offset - tol.feas_tol * scale) return false;
    }
    return true;
  };

  for (int cycle = 0; cycle < tol.dykstra_max_iter; ++cycle) {
    for (std::size_t i = 0; i < halfspaces.size(); ++i) {
      DenseVector w = add(x, corr[i]);
      const double viol = halfspaces[i].offset - dot(halfspaces[i].normal, w);
      DenseVector xn = viol > 0 ? add(w, scale(halfspaces[i].normal, viol / nrm2[i])) : w;
      corr[i] = sub(w, xn);
      x = xn;
    }
    const double move = norm2(sub(x, prev));
    if (move < tol.kkt_tol && feasible(x)) return {x, norm2(sub(x, y))};
    prev = x;
  }
  throw IterationLimitError("dykstra_project: no convergence within iteration cap");
}

std::uint64_t Rng::next_u64() {
  state_ += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double Rng::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double Rng::normal() {
  double u1 = uniform();
  while (u1 <= 1e-300) u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
}

DenseVector Rng::unit_vector(std::size_t n) {
  while (true) {
    DenseVector v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = normal();
    const double nr = norm2(v);
    if (nr > 1e-12) return scale(v, 1.0 / nr);
  }
}

DenseVector Rng::ball_point(std::size_t n, double radius) {
  const double r = radius * std::pow(uniform(), 1.0 / static_cast<double>(std::max<std::size_t>(n, 1)));
  return scale(unit_vector(n), r);
}

}  // namespace ige
