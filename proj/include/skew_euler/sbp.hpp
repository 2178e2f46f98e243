#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "skew_euler/errors.hpp"
#include "skew_euler/grid.hpp"

namespace skew_euler {

/// Diagonal-norm first-derivative operator D = H^-1 Q on n nodes with spacing h.
///
/// H (the quadrature) already contains h, so Q is dimensionless. Bounded
/// operators satisfy Q + Q^T = diag(-1, 0, ..., 0, 1); periodic ones are skew.
/// Q is stored as a dense left closure block plus an interior stencil; the
/// right closure is the left one reflected with a sign flip.
class SbpOperator1D {
 public:
  SbpOperator1D() = default;

  int order() const { return order_; }
  std::size_t size() const { return n_; }
  double spacing() const { return h_; }
  Topology topology() const { return topo_; }
  const std::vector<double>& quadrature() const { return weights_; }
  /// Rows whose stencil differs from the interior one, at each end.
  std::size_t closure_rows() const { return topo_ == Topology::bounded ? rows_ : 0; }
  int stencil_half_width() const { return half_; }

  /// Entry Q(i, j).
  double q(std::size_t i, std::size_t j) const {
    if (topo_ == Topology::periodic) {
      double acc = 0.0;
      for (int k = -half_; k <= half_; ++k)
        if (wrap(static_cast<std::ptrdiff_t>(i) + k) == j) acc += stencil_[k + half_];
      return acc;
    }
    if (i < rows_) return j < cols_ ? closure_[i * cols_ + j] : 0.0;
    if (i >= n_ - rows_) {
      const std::size_t ii = n_ - 1 - i;
      const std::size_t jj = n_ - 1 - j;
      return (j <= n_ - 1 && jj < cols_) ? -closure_[ii * cols_ + jj] : 0.0;
    }
    const auto off = static_cast<std::ptrdiff_t>(j) - static_cast<std::ptrdiff_t>(i);
    return std::abs(off) <= half_ ? stencil_[off + half_] : 0.0;
  }

  /// Entry D(i, j) = Q(i, j) / H(i).
  double d(std::size_t i, std::size_t j) const { return q(i, j) / weights_[i]; }

  Eigen::MatrixXd dense_q() const {
    Eigen::MatrixXd m(n_, n_);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) m(i, j) = q(i, j);
    return m;
  }
  Eigen::MatrixXd dense_d() const {
    Eigen::MatrixXd m(n_, n_);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) m(i, j) = d(i, j);
    return m;
  }

  /// out[i * so] = sum_j D(i, j) in[j * si], summed in increasing j.
  void apply(const double* in, std::ptrdiff_t si, double* out, std::ptrdiff_t so) const {
    const auto n = static_cast<std::ptrdiff_t>(n_);
    if (topo_ == Topology::periodic) {
      for (std::ptrdiff_t i = 0; i < n; ++i) {
        double acc = 0.0;
        if (i >= half_ && i < n - half_) {
          for (int k = -half_; k <= half_; ++k) acc += dstencil_[k + half_] * in[(i + k) * si];
        } else {
          std::pair<std::ptrdiff_t, double> terms[16];
          int nt = 0;
          for (int k = -half_; k <= half_; ++k)
            terms[nt++] = {static_cast<std::ptrdiff_t>(wrap(i + k)), dstencil_[k + half_]};
          std::sort(terms, terms + nt);
          for (int t = 0; t < nt; ++t) acc += terms[t].second * in[terms[t].first * si];
        }
        out[i * so] = acc;
      }
      return;
    }
    const auto rows = static_cast<std::ptrdiff_t>(rows_);
    const auto cols = static_cast<std::ptrdiff_t>(cols_);
    for (std::ptrdiff_t i = 0; i < rows; ++i) {
      double acc = 0.0;
      for (std::ptrdiff_t j = 0; j < cols; ++j) acc += dclosure_[i * cols + j] * in[j * si];
      out[i * so] = acc;
    }
    for (std::ptrdiff_t i = rows; i < n - rows; ++i) {
      double acc = 0.0;
      for (int k = -half_; k <= half_; ++k) acc += dstencil_[k + half_] * in[(i + k) * si];
      out[i * so] = acc;
    }
    for (std::ptrdiff_t ii = rows - 1; ii >= 0; --ii) {
      // row n-1-ii, columns n-1-jj visited in increasing order
      double acc = 0.0;
      for (std::ptrdiff_t jj = cols - 1; jj >= 0; --jj)
        acc += -dclosure_[ii * cols + jj] * in[(n - 1 - jj) * si];
      out[(n - 1 - ii) * so] = acc;
    }
  }

  std::vector<double> apply(const std::vector<double>& in) const {
    if (in.size() != n_) throw ShapeError("SbpOperator1D::apply: length mismatch");
    std::vector<double> out(n_);
    apply(in.data(), 1, out.data(), 1);
    return out;
  }

  friend SbpOperator1D build_sbp(int order, std::size_t n, double h, Topology topology);

 private:
  std::size_t wrap(std::ptrdiff_t i) const {
    const auto n = static_cast<std::ptrdiff_t>(n_);
    return static_cast<std::size_t>(((i % n) + n) % n);
  }

  int order_ = 2;
  std::size_t n_ = 0;
  double h_ = 1.0;
  Topology topo_ = Topology::bounded;
  std::vector<double> weights_;
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<double> closure_;   // Q, rows_ x cols_
  std::vector<double> dclosure_;  // Q / H
  int half_ = 1;
  std::vector<double> stencil_;   // Q interior, offsets -half_..half_
  std::vector<double> dstencil_;  // stencil_ / h
};

inline std::size_t sbp_min_size(int order) { return order == 4 ? 12 : 3; }

/// Interior order 2 or 4. The order-4 bounded operator uses the standard
/// diagonal-norm closure H = h diag(17/48, 59/48, 43/48, 49/48, 1, ...).
inline SbpOperator1D build_sbp(int order, std::size_t n, double h, Topology topology) {
  if (order != 2 && order != 4)
    throw SizeError("build_sbp: supported interior orders are 2 and 4");
  if (n < sbp_min_size(order))
    throw SizeError("build_sbp: order " + std::to_string(order) + " needs n >= " +
                    std::to_string(sbp_min_size(order)) + ", got " + std::to_string(n));
  if (!(h > 0.0)) throw SizeError("build_sbp: spacing must be positive");

  SbpOperator1D op;
  op.order_ = order;
  op.n_ = n;
  op.h_ = h;
  op.topo_ = topology;
  op.weights_.assign(n, h);

  if (order == 2) {
    op.half_ = 1;
    op.stencil_ = {-0.5, 0.0, 0.5};
  } else {
    op.half_ = 2;
    op.stencil_ = {1.0 / 12.0, -2.0 / 3.0, 0.0, 2.0 / 3.0, -1.0 / 12.0};
  }

  if (topology == Topology::bounded) {
    if (order == 2) {
      op.rows_ = 1;
      op.cols_ = 2;
      op.closure_ = {-0.5, 0.5};
      op.weights_[0] = op.weights_[n - 1] = 0.5 * h;
    } else {
      const double a = 59.0 / 96.0;
      const double b = 1.0 / 12.0;
      const double c = 1.0 / 32.0;
      op.rows_ = 4;
      op.cols_ = 6;
      // clang-format off
      op.closure_ = {
          -0.5,  a,   -b,  -c,        0.0,        0.0,
          -a,    0.0,  a,   0.0,      0.0,        0.0,
           b,   -a,    0.0, a,       -b,          0.0,
           c,    0.0, -a,   0.0,      2.0 / 3.0, -b,
      };
      // clang-format on
      const double w[4] = {17.0 / 48.0, 59.0 / 48.0, 43.0 / 48.0, 49.0 / 48.0};
      for (std::size_t i = 0; i < 4; ++i) op.weights_[i] = op.weights_[n - 1 - i] = w[i] * h;
    }
    op.dclosure_.resize(op.closure_.size());
    for (std::size_t i = 0; i < op.rows_; ++i)
      for (std::size_t j = 0; j < op.cols_; ++j)
        op.dclosure_[i * op.cols_ + j] = op.closure_[i * op.cols_ + j] / op.weights_[i];
  }
  op.dstencil_.resize(op.stencil_.size());
  for (std::size_t k = 0; k < op.stencil_.size(); ++k) op.dstencil_[k] = op.stencil_[k] / h;
  return op;
}

/// ||Q + Q^T - B||_inf where B = diag(-1, 0, ..., 0, 1) (bounded) or 0 (periodic).
inline double verify_sbp_constraint(const Eigen::MatrixXd& q, Topology topology) {
  Eigen::MatrixXd m = q + q.transpose();
  if (topology == Topology::bounded && m.rows() > 0) {
    m(0, 0) += 1.0;
    m(m.rows() - 1, m.rows() - 1) -= 1.0;
  }
  return m.cwiseAbs().maxCoeff();
}

inline double verify_sbp_constraint(const SbpOperator1D& op) {
  return verify_sbp_constraint(op.dense_q(), op.topology());
}

/// Monomial differentiation residuals, split into closure rows and interior rows.
struct AccuracyReport {
  int interior_degree = 0;  // highest degree differentiated exactly in the interior
  int closure_degree = 0;   // same, for the boundary closure rows
  std::vector<double> interior_residual;  // index k: max |D x^k - k x^(k-1)| over interior rows
  std::vector<double> closure_residual;   // same over closure rows (empty for periodic)
  std::vector<double> scale;              // roundoff scale per degree
  double tolerance = 1e-12;

  bool passed() const {
    for (int k = 0; k <= interior_degree; ++k)
      if (interior_residual[k] > tolerance * scale[k]) return false;
    for (int k = 0; k <= closure_degree && k < static_cast<int>(closure_residual.size()); ++k)
      if (closure_residual[k] > tolerance * scale[k]) return false;
    return true;
  }
};

/// Applies the operator to x^k, k = 0..order+1, on nodes x_i = i h.
/// Periodic operators are checked on rows whose stencil does not wrap.
inline AccuracyReport verify_accuracy(const SbpOperator1D& op) {
  const std::size_t n = op.size();
  const double h = op.spacing();
  AccuracyReport rep;
  rep.interior_degree = op.order();
  rep.closure_degree = op.order() / 2;
  const int max_deg = op.order() + 1;
  const std::size_t edge = op.topology() == Topology::bounded
                               ? op.closure_rows()
                               : static_cast<std::size_t>(op.stencil_half_width());
  const double len = h * static_cast<double>(n - 1);
  std::vector<double> f(n), df(n);
  for (int k = 0; k <= max_deg; ++k) {
    for (std::size_t i = 0; i < n; ++i) f[i] = std::pow(h * static_cast<double>(i), k);
    op.apply(f.data(), 1, df.data(), 1);
    double r_int = 0.0, r_cl = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double x = h * static_cast<double>(i);
      const double exact = k == 0 ? 0.0 : k * std::pow(x, k - 1);
      const double r = std::abs(df[i] - exact);
      if (i < edge || i >= n - edge)
        r_cl = std::max(r_cl, r);
      else
        r_int = std::max(r_int, r);
    }
    rep.interior_residual.push_back(r_int);
    if (op.topology() == Topology::bounded) rep.closure_residual.push_back(r_cl);
    rep.scale.push_back(std::max(1.0, std::pow(std::max(len, 1.0), k) / h));
  }
  return rep;
}

/// CSV audit dump: `i,weight,q0,...,q{n-1}`.
inline void write_operator_csv(std::ostream& os, const SbpOperator1D& op) {
  os << "i,weight";
  for (std::size_t j = 0; j < op.size(); ++j) os << ",q" << j;
  os << '\n';
  for (std::size_t i = 0; i < op.size(); ++i) {
    os << i << ',' << format_double(op.quadrature()[i]);
    for (std::size_t j = 0; j < op.size(); ++j) os << ',' << format_double(op.q(i, j));
    os << '\n';
  }
}

/// Applies D_x = I_4 (x) D_x (x) I_y and D_y = I_4 (x) I_x (x) D_y to fields
/// stored x-major, without forming the Kronecker products.
class TensorApplicator {
 public:
  TensorApplicator(SbpOperator1D x_op, SbpOperator1D y_op)
      : x_(std::move(x_op)), y_(std::move(y_op)) {}

  const SbpOperator1D& x_op() const { return x_; }
  const SbpOperator1D& y_op() const { return y_; }
  std::size_t nx() const { return x_.size(); }
  std::size_t ny() const { return y_.size(); }

  void check(const Field& f, const char* where) const {
    if (f.nx() != nx() || f.ny() != ny())
      throw ShapeError(std::string(where) + ": field shape does not match operators");
  }

  /// Derivative of one scalar array of length nx * ny.
  void dx(const double* in, double* out) const {
    const auto ny_ = static_cast<std::ptrdiff_t>(ny());
    for (std::ptrdiff_t j = 0; j < ny_; ++j) x_.apply(in + j, ny_, out + j, ny_);
  }
  void dy(const double* in, double* out) const {
    const auto ny_ = ny();
    for (std::size_t i = 0; i < nx(); ++i) y_.apply(in + i * ny_, 1, out + i * ny_, 1);
  }

  double weight(std::size_t i, std::size_t j) const {
    return x_.quadrature()[i] * y_.quadrature()[j];
  }

 private:
  SbpOperator1D x_;
  SbpOperator1D y_;
};

inline TensorApplicator make_applicator(const Grid2D& g, int order) {
  return {build_sbp(order, g.nx, g.hx(), g.topo_x), build_sbp(order, g.ny, g.hy(), g.topo_y)};
}

inline Field apply_dx(const Field& f, const TensorApplicator& t) {
  t.check(f, "apply_dx");
  Field out(f.nx(), f.ny());
  for (int k = 0; k < 4; ++k) t.dx(f.component(k).data(), out.component(k).data());
  return out;
}

inline Field apply_dy(const Field& f, const TensorApplicator& t) {
  t.check(f, "apply_dy");
  Field out(f.nx(), f.ny());
  for (int k = 0; k < 4; ++k) t.dy(f.component(k).data(), out.component(k).data());
  return out;
}

/// f^T (I_4 (x) H_x (x) H_y) g.
inline double inner_product(const Field& f, const Field& g, const TensorApplicator& t) {
  t.check(f, "inner_product");
  t.check(g, "inner_product");
  double acc = 0.0;
  for (std::size_t i = 0; i < t.nx(); ++i)
    for (std::size_t j = 0; j < t.ny(); ++j) {
      const std::size_t n = f.index(i, j);
      double s = 0.0;
      for (int k = 0; k < 4; ++k) s += f.component(k)[n] * g.component(k)[n];
      acc += t.weight(i, j) * s;
    }
  return acc;
}

/// u^T (I_4 (x) B_x (x) H_y) v: the boundary term in x of discrete integration by parts.
inline double boundary_term_x(const Field& u, const Field& v, const TensorApplicator& t) {
  t.check(u, "boundary_term_x");
  t.check(v, "boundary_term_x");
  if (t.x_op().topology() == Topology::periodic) return 0.0;
  const std::size_t last = t.nx() - 1;
  double acc = 0.0;
  for (std::size_t j = 0; j < t.ny(); ++j) {
    double s = 0.0;
    for (int k = 0; k < 4; ++k)
      s += u.component(k)[u.index(last, j)] * v.component(k)[v.index(last, j)] -
           u.component(k)[u.index(0, j)] * v.component(k)[v.index(0, j)];
    acc += t.y_op().quadrature()[j] * s;
  }
  return acc;
}

/// u^T (I_4 (x) H_x (x) B_y) v.
inline double boundary_term_y(const Field& u, const Field& v, const TensorApplicator& t) {
  t.check(u, "boundary_term_y");
  t.check(v, "boundary_term_y");
  if (t.y_op().topology() == Topology::periodic) return 0.0;
  const std::size_t last = t.ny() - 1;
  double acc = 0.0;
  for (std::size_t i = 0; i < t.nx(); ++i) {
    double s = 0.0;
    for (int k = 0; k < 4; ++k)
      s += u.component(k)[u.index(i, last)] * v.component(k)[v.index(i, last)] -
           u.component(k)[u.index(i, 0)] * v.component(k)[v.index(i, 0)];
    acc += t.x_op().quadrature()[i] * s;
  }
  return acc;
}

}  // namespace skew_euler
