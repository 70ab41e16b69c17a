#pragma once

#include "tvq1/field.hpp"

namespace tvq1 {

// The averaging kernel: a constant weight on the box of one cell footprint
// centered at the node. Unit mass by construction.
struct Kernel {
  double half1 = 0; // h1 / 2
  double half2 = 0; // h2 / 2

  static Kernel for_mesh(const DomainSpec& d) { return {d.h1() / 2, d.h2() / 2}; }
  double area() const { return 4 * half1 * half2; }
  double weight_height() const { return 1.0 / area(); }
};

// Dilation parameter of the homothetic interpolant.
struct HomotheticParams {
  double epsilon = 0;
  static HomotheticParams for_mesh(const DomainSpec& d) { return {d.max_h() / 2}; }
};

// Mean of w over the kernel box centered at node idx. Torus boxes wrap
// periodically; on the unit square the node must be interior (boundary nodes
// are the business of the clipped and homothetic interpolants).
double averaged_nodal_value(const InputField& w, const DomainSpec& d, NodeIndex idx);

// TVD interpolant on the torus: every nodal value is the kernel box mean.
GridFunction box_average_interpolant(const InputField& w, const DomainSpec& d);

// TVD interpolant on the unit square via a homothetic dilation of the domain:
// the input is rescaled onto a slightly larger square so every kernel box is
// interior. Does not preserve constants (a constant c maps to c/(1+2*eps)).
GridFunction homothetic_interpolant(const InputField& w, const DomainSpec& d,
                                    HomotheticParams p);
GridFunction homothetic_interpolant(const InputField& w, const DomainSpec& d);

// TVD interpolant on the unit square with rescaled boundary averages: interior
// nodes take the kernel box mean, boundary nodes the mean over the box clipped
// to the square. Preserves constants.
GridFunction clipped_average_interpolant(const InputField& w, const DomainSpec& d);

} // namespace tvq1
