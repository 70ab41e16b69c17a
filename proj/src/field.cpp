#include "tvq1/field.hpp"

#include <stdexcept>

#include "tvq1/parallel.hpp"

namespace tvq1 {

InputField InputField::analytic(Callable f, int quad_res) {
  if (!f) throw std::invalid_argument("InputField: null callable");
  if (quad_res < 1) throw std::invalid_argument("InputField: quad_res must be >= 1");
  InputField w;
  w.f_ = std::move(f);
  w.quad_res_ = quad_res;
  return w;
}

InputField InputField::fine_grid(GridFunction u) {
  InputField w;
  w.grid_ = std::move(u);
  w.has_grid_ = true;
  return w;
}

const InputField::Callable& InputField::callable() const {
  if (!f_) throw std::logic_error("InputField: not an analytic field");
  return f_;
}

const GridFunction& InputField::grid() const {
  if (!has_grid_) throw std::logic_error("InputField: not a fine-grid field");
  return grid_;
}

double InputField::operator()(double x, double y) const {
  return f_ ? f_(x, y) : eval(grid_, x, y);
}

void InputField::require_compatible(const DomainSpec& target) const {
  if (is_analytic()) return;
  const DomainSpec& fine = grid_.domain();
  if (fine.kind != target.kind)
    throw std::invalid_argument("InputField: fine grid and target mesh differ in kind");
  if (fine.n1 % target.n1 != 0 || fine.n2 % target.n2 != 0 ||
      fine.n1 < target.n1 || fine.n2 < target.n2)
    throw std::invalid_argument(
        "InputField: fine cell counts must be integer multiples of the target's");
}

GridFunction lagrange_interpolate(const InputField& w, const DomainSpec& d) {
  w.require_compatible(d);
  GridFunction out(d);
#pragma omp parallel for schedule(static) num_threads(worker_count())
  for (int l = 0; l < d.nodes2(); ++l)
    for (int k = 0; k < d.nodes1(); ++k) out.node(k, l) = w(k * d.h1(), l * d.h2());
  out.ensure_finite("lagrange_interpolate");
  return out;
}

} // namespace tvq1
