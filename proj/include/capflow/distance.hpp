#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "capflow/domain.hpp"
#include "capflow/parallel.hpp"

namespace capflow {

// One real value per cell (length units).
struct ScalarField {
  GridSpec grid;
  std::vector<double> values;

  double at(std::size_t idx) const { return values[idx]; }
};

class DegenerateSet : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::int64_t kNoSite = std::numeric_limits<std::int64_t>::max();

// Exact squared Euclidean distance, in units of cells squared, from every cell
// center to the nearest cell center flagged in `sites`; kNoSite where there is
// no site at all. Separable lower envelope of parabolas with integer
// arithmetic throughout.
std::vector<std::int64_t> squared_distance_transform(
    const GridSpec& grid, std::span<const std::uint8_t> sites,
    Exec exec = Exec::parallel);

// sd_F at cell centers with the half-cell convention: +(D - dx/2) outside F,
// -(D - dx/2) inside, D the center-to-center distance to the opposite phase.
// Throws DegenerateSet for empty or full F.
ScalarField signed_distance(const IndicatorSet& f, Exec exec = Exec::parallel);

}  // namespace capflow
