#include "crzero/sampling.hpp"

#include <stdexcept>

namespace crzero {

Eigen::VectorXcd sample_unit_sphere(int dim, const SeededStream& stream) {
  if (dim < 1) throw std::invalid_argument("dimension must be positive");
  Rng rng = stream.rng();
  Eigen::VectorXcd v(dim);
  double n2 = 0.0;
  do {
    for (int j = 0; j < dim; ++j) v[j] = rng.next_cgaussian();
    n2 = v.squaredNorm();
  } while (n2 < 1e-280);  // resample the (measure zero) degenerate draw
  return v / std::sqrt(n2);
}

CRSection sample_section(const std::vector<BasisPtr>& bases, const SeededStream& stream) {
  if (bases.empty()) throw std::invalid_argument("no basis components");
  int total = 0;
  for (const auto& b : bases) total += b->dim();
  if (total == 0) throw std::invalid_argument("empty coefficient space");
  Eigen::VectorXcd lambda = sample_unit_sphere(total, stream);
  CRSection u;
  int off = 0;
  for (const auto& b : bases) {
    CRSection::Component c;
    c.basis = b;
    c.coeffs = lambda.segment(off, b->dim());
    off += b->dim();
    u.components.push_back(std::move(c));
  }
  return u;
}

}  // namespace crzero
