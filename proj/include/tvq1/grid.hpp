#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace tvq1 {

enum class Domain { PeriodicTorus, UnitSquare };

// Uniform Cartesian mesh of the unit torus or the unit square. Cell counts
// are stored and mesh sizes derived as 1/N, so h*N == 1 holds exactly.
struct DomainSpec {
  Domain kind = Domain::PeriodicTorus;
  int n1 = 1; // cells along x1
  int n2 = 1; // cells along x2

  static DomainSpec torus(int n1, int n2);
  static DomainSpec square(int n1, int n2);

  bool periodic() const { return kind == Domain::PeriodicTorus; }
  double h1() const { return 1.0 / n1; }
  double h2() const { return 1.0 / n2; }
  double max_h() const { return h1() > h2() ? h1() : h2(); }
  int nodes1() const { return periodic() ? n1 : n1 + 1; }
  int nodes2() const { return periodic() ? n2 : n2 + 1; }
  std::size_t node_count() const {
    return static_cast<std::size_t>(nodes1()) * static_cast<std::size_t>(nodes2());
  }
  std::size_t cell_count() const {
    return static_cast<std::size_t>(n1) * static_cast<std::size_t>(n2);
  }

  friend bool operator==(const DomainSpec&, const DomainSpec&) = default;
};

struct NodeIndex {
  int k = 0;
  int l = 0;
};

inline int wrap_index(int i, int n) {
  const int r = i % n;
  return r < 0 ? r + n : r;
}

// Nodal coefficients of a continuous piecewise-bilinear (Q1) function.
// Storage is row-major with the x2 index as the slow dimension; on the torus
// every node is stored exactly once and index arithmetic wraps.
class GridFunction {
 public:
  GridFunction() = default;
  explicit GridFunction(const DomainSpec& d, double fill = 0.0);
  GridFunction(const DomainSpec& d, std::vector<double> values);

  const DomainSpec& domain() const { return domain_; }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }
  std::size_t size() const { return values_.size(); }

  // Nodal value; wraps on the torus, asserts range on the square.
  double operator()(int k, int l) const { return values_[flat(k, l)]; }
  double& node(int k, int l) { return values_[flat(k, l)]; }

  // Checked variant used by the public index-based API.
  double value_at(NodeIndex idx) const;

  double min_value() const;
  double max_value() const;
  double mean_value() const;

  // Throws if any nodal value is NaN or infinite.
  void ensure_finite(const char* context) const;

  std::size_t flat(int k, int l) const;

 private:
  DomainSpec domain_{};
  std::vector<double> values_{};
};

// Coordinates of a mesh node; torus indices are reduced modulo N first.
std::array<double, 2> node_coords(const DomainSpec& d, NodeIndex idx);

// Containing cell and local coordinates of a point. Points on a cell edge
// belong to the lower-index cell; torus coordinates wrap into [0,1).
struct CellRef {
  int k = 0;
  int l = 0;
  double s = 0; // local coordinate in [0,1] along x1
  double t = 0; // local coordinate in [0,1] along x2
};
CellRef locate(const DomainSpec& d, double x, double y);

// Point value of the Q1 function (bilinear within the containing cell).
double eval(const GridFunction& u, double x, double y);

// Exact L^p(Omega) norm of the Q1 function for p in {1, 2, inf}. The L1 norm
// of a sign-changing cell is evaluated with a fixed 3x3 Gauss rule (the zero
// set of a bilinear is a hyperbola, so that cell has no elementary closed
// form); everything else is closed-form.
double lp_norm(const GridFunction& u, double p);

// Exact integral of u over [x0,x1] x [y0,y1], which must lie within [0,1]^2.
double integrate_on_rect(const GridFunction& u, double x0, double x1, double y0, double y1);

// The same function re-expressed on the mesh refined `factor` times per axis
// (exact Q1 re-representation).
GridFunction refine(const GridFunction& u, int factor);

GridFunction operator-(const GridFunction& a, const GridFunction& b);
GridFunction operator+(const GridFunction& a, const GridFunction& b);
GridFunction operator*(double c, const GridFunction& u);

} // namespace tvq1
