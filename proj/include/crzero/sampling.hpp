#pragma once

// Deterministic Gaussian/sphere ensembles.  A stream is addressed by
// (master seed, m index, trial index); the draw for a given address never
// depends on other trials, so runs parallelize and replay exactly.

#include <cstdint>

#include "crzero/crspace.hpp"
#include "crzero/numerics.hpp"

namespace crzero {

struct SeededStream {
  std::uint64_t master_seed = 0;
  std::uint64_t m_index = 0;
  std::uint64_t trial_index = 0;

  Rng rng() const { return Rng(master_seed, m_index, trial_index); }
};

// uniform draw on the unit sphere of C^dim (Gaussian then normalize)
Eigen::VectorXcd sample_unit_sphere(int dim, const SeededStream& stream);

// one sphere draw over the concatenated coefficient space of all components
CRSection sample_section(const std::vector<BasisPtr>& bases, const SeededStream& stream);

}  // namespace crzero
