#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>

#include "molgate/linalg.hpp"

namespace molgate {

// Single-molecule levels: two qubit states and the ancillary state that the
// microwave couples to |down>.
enum class Level : std::uint8_t { Up, Down, Excited };

// Molecule i and molecule ii.
enum class Molecule : std::uint8_t { First, Second };

struct PairState {
  Level first;
  Level second;
  friend constexpr bool operator==(PairState, PairState) = default;
};

// The 9 two-molecule product states in canonical order. The computational
// states |up,up>, |up,down>, |down,up>, |down,down> occupy indices 0..3 so
// the computational projector is the leading 4x4 block.
class InternalBasis {
 public:
  static constexpr std::size_t kDimension = 9;
  static constexpr std::size_t kComputationalDimension = 4;

  static constexpr std::array<PairState, kDimension> kStates{{
      {Level::Up, Level::Up},
      {Level::Up, Level::Down},
      {Level::Down, Level::Up},
      {Level::Down, Level::Down},
      {Level::Up, Level::Excited},
      {Level::Excited, Level::Up},
      {Level::Down, Level::Excited},
      {Level::Excited, Level::Down},
      {Level::Excited, Level::Excited},
  }};

  static constexpr std::size_t index(PairState s) {
    for (std::size_t i = 0; i < kDimension; ++i) {
      if (kStates[i] == s) return i;
    }
    return kDimension;  // unreachable for valid levels
  }

  static PairState state(std::size_t i);
  static CVector ket(PairState s);
  static CMatrix computational_projector();
  static bool is_computational(std::size_t i) {
    return i < kComputationalDimension;
  }
  static std::string label(std::size_t i);  // e.g. "up,down"
  static std::string label(PairState s);
};

inline constexpr std::size_t kUpUp =
    InternalBasis::index({Level::Up, Level::Up});
inline constexpr std::size_t kUpDown =
    InternalBasis::index({Level::Up, Level::Down});
inline constexpr std::size_t kDownUp =
    InternalBasis::index({Level::Down, Level::Up});
inline constexpr std::size_t kDownDown =
    InternalBasis::index({Level::Down, Level::Down});
inline constexpr std::size_t kUpExcited =
    InternalBasis::index({Level::Up, Level::Excited});
inline constexpr std::size_t kExcitedUp =
    InternalBasis::index({Level::Excited, Level::Up});

}  // namespace molgate
