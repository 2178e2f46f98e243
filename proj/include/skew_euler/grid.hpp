#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "skew_euler/errors.hpp"
#include "skew_euler/state.hpp"

namespace skew_euler {

enum class Topology { bounded, periodic };

inline const char* to_string(Topology t) {
  return t == Topology::periodic ? "periodic" : "bounded";
}

/// Uniform tensor grid on [x_min, x_max] x [y_min, y_max].
///
/// Bounded directions include both end points (h = L / (n - 1)); periodic
/// directions omit the right end point (h = L / n).
struct Grid2D {
  std::size_t nx = 0;
  std::size_t ny = 0;
  double x_min = 0.0, x_max = 1.0;
  double y_min = 0.0, y_max = 1.0;
  Topology topo_x = Topology::bounded;
  Topology topo_y = Topology::bounded;

  static double spacing(std::size_t n, double lo, double hi, Topology t) {
    const double len = hi - lo;
    return t == Topology::periodic ? len / static_cast<double>(n)
                                   : len / static_cast<double>(n - 1);
  }

  double hx() const { return spacing(nx, x_min, x_max, topo_x); }
  double hy() const { return spacing(ny, y_min, y_max, topo_y); }
  double x(std::size_t i) const { return x_min + static_cast<double>(i) * hx(); }
  double y(std::size_t j) const { return y_min + static_cast<double>(j) * hy(); }

  std::size_t size() const { return nx * ny; }
  /// x-major: node (i, j) lives at i * ny + j.
  std::size_t index(std::size_t i, std::size_t j) const { return i * ny + j; }

  void validate() const {
    if (nx < 2 || ny < 2) throw SizeError("grid needs at least 2 nodes per direction");
    if (!(x_max > x_min) || !(y_max > y_min)) throw SizeError("grid extents must be increasing");
  }

  friend bool operator==(const Grid2D&, const Grid2D&) = default;
};

/// Four scalar arrays of length nx * ny, one per component of the skew state.
class Field {
 public:
  Field() = default;
  Field(std::size_t nx, std::size_t ny) : nx_(nx), ny_(ny) {
    for (auto& c : comp_) c.assign(nx * ny, 0.0);
  }
  explicit Field(const Grid2D& g) : Field(g.nx, g.ny) {}

  std::size_t nx() const { return nx_; }
  std::size_t ny() const { return ny_; }
  std::size_t size() const { return nx_ * ny_; }
  std::size_t index(std::size_t i, std::size_t j) const { return i * ny_ + j; }

  std::vector<double>& component(int k) { return comp_[static_cast<std::size_t>(k)]; }
  const std::vector<double>& component(int k) const { return comp_[static_cast<std::size_t>(k)]; }

  SkewState at(std::size_t node) const {
    return {comp_[0][node], comp_[1][node], comp_[2][node], comp_[3][node]};
  }
  SkewState at(std::size_t i, std::size_t j) const { return at(index(i, j)); }
  void set(std::size_t node, const SkewState& s) {
    comp_[0][node] = s.phi1;
    comp_[1][node] = s.phi2;
    comp_[2][node] = s.phi3;
    comp_[3][node] = s.phi4;
  }
  void set(std::size_t i, std::size_t j, const SkewState& s) { set(index(i, j), s); }

  bool same_shape(const Field& o) const { return nx_ == o.nx_ && ny_ == o.ny_; }
  void require_shape(const Field& o, const char* where) const {
    if (!same_shape(o)) throw ShapeError(std::string(where) + ": field shape mismatch");
  }

  /// this += a * o
  Field& axpy(double a, const Field& o) {
    require_shape(o, "axpy");
    for (int k = 0; k < 4; ++k) {
      auto& d = comp_[k];
      const auto& s = o.comp_[k];
      for (std::size_t n = 0; n < d.size(); ++n) d[n] += a * s[n];
    }
    return *this;
  }
  Field& scale(double a) {
    for (auto& c : comp_)
      for (auto& x : c) x *= a;
    return *this;
  }

  bool all_finite() const {
    for (const auto& c : comp_)
      for (double x : c)
        if (!std::isfinite(x)) return false;
    return true;
  }

  friend bool operator==(const Field&, const Field&) = default;

 private:
  std::size_t nx_ = 0;
  std::size_t ny_ = 0;
  std::array<std::vector<double>, 4> comp_;
};

template <class Fn>
Field sample_field(const Grid2D& g, Fn&& fn) {
  Field f(g);
  for (std::size_t i = 0; i < g.nx; ++i)
    for (std::size_t j = 0; j < g.ny; ++j) f.set(i, j, fn(g.x(i), g.y(j)));
  return f;
}

inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

/// CSV snapshot: header `x,y,phi1,phi2,phi3,phi4`, one row per node in storage order.
inline void write_field_csv(std::ostream& os, const Grid2D& g, const Field& f) {
  if (f.nx() != g.nx || f.ny() != g.ny) throw ShapeError("write_field_csv: grid/field mismatch");
  os << "x,y,phi1,phi2,phi3,phi4\n";
  for (std::size_t i = 0; i < g.nx; ++i)
    for (std::size_t j = 0; j < g.ny; ++j) {
      const auto s = f.at(i, j);
      os << format_double(g.x(i)) << ',' << format_double(g.y(j)) << ','
         << format_double(s.phi1) << ',' << format_double(s.phi2) << ','
         << format_double(s.phi3) << ',' << format_double(s.phi4) << '\n';
    }
}

inline void write_field_csv(const std::string& path, const Grid2D& g, const Field& f) {
  std::ofstream os(path);
  if (!os) throw Error("cannot open " + path + " for writing");
  write_field_csv(os, g, f);
}

/// Reads a snapshot written by write_field_csv. Coordinates are ignored; rows
/// must be in storage order and the row count must match the grid.
inline Field read_field_csv(std::istream& is, const Grid2D& g) {
  std::string line;
  if (!std::getline(is, line) || line.rfind("x,y,phi1,phi2,phi3,phi4", 0) != 0)
    throw ShapeError("read_field_csv: missing header x,y,phi1,phi2,phi3,phi4");
  Field f(g);
  std::size_t node = 0;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (node >= f.size()) throw ShapeError("read_field_csv: more rows than grid nodes");
    std::stringstream ss(line);
    std::array<double, 6> v{};
    for (auto& x : v) {
      std::string cell;
      if (!std::getline(ss, cell, ',')) throw ShapeError("read_field_csv: short row");
      x = std::stod(cell);
    }
    f.set(node++, {v[2], v[3], v[4], v[5]});
  }
  if (node != f.size()) throw ShapeError("read_field_csv: fewer rows than grid nodes");
  return f;
}

inline Field read_field_csv(const std::string& path, const Grid2D& g) {
  std::ifstream is(path);
  if (!is) throw Error("cannot open " + path);
  return read_field_csv(is, g);
}

}  // namespace skew_euler
