#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "credo/core.hpp"

namespace credo {

/// Index of a credo channel inside the vector <psi, phi, omega>.
enum class Channel : int { self = 0, team = 1, system = 2 };

inline const char* channel_name(Channel c) {
  switch (c) {
    case Channel::self: return "self";
    case Channel::team: return "team";
    default: return "system";
  }
}

/// A credo vector held as integer step counts over a fixed resolution, so
/// simplex arithmetic is exact: steps sum to denominator = 1/resolution.
struct CredoLatticePoint {
  std::array<int, 3> steps{0, 0, 0};
  int denominator = 5;  // resolution 0.2

  double resolution() const { return 1.0 / static_cast<double>(denominator); }

  CredoVector to_credo() const {
    const double d = static_cast<double>(denominator);
    return CredoVector{steps[0] / d, steps[1] / d, steps[2] / d};
  }

  bool operator==(const CredoLatticePoint&) const = default;
};

inline int lattice_denominator(double resolution) {
  if (resolution <= 0.0) {
    throw std::invalid_argument("lattice: resolution must be positive");
  }
  const double inv = 1.0 / resolution;
  const int denom = static_cast<int>(std::llround(inv));
  if (denom < 1 || std::abs(inv - static_cast<double>(denom)) > 1e-9) {
    throw std::invalid_argument("lattice: 1/resolution must be an integer, got 1/" +
                                std::to_string(resolution));
  }
  return denom;
}

/// All integer compositions of 1/resolution into three parts, in lexicographic
/// order of (self, team, system) steps. C(1/resolution + 2, 2) points; 21 at
/// the default resolution 0.2.
inline std::vector<CredoLatticePoint> enumerate_lattice(double resolution) {
  const int denom = lattice_denominator(resolution);
  std::vector<CredoLatticePoint> points;
  points.reserve(static_cast<std::size_t>((denom + 1) * (denom + 2) / 2));
  for (int s0 = 0; s0 <= denom; ++s0) {
    for (int s1 = 0; s1 + s0 <= denom; ++s1) {
      points.push_back(CredoLatticePoint{{s0, s1, denom - s0 - s1}, denom});
    }
  }
  return points;
}

/// Lexicographic rank of a point within enumerate_lattice(resolution).
inline int lattice_index(const CredoLatticePoint& p) {
  const int d = p.denominator;
  const int s0 = p.steps[0];
  // points with first component a < s0: (d - a + 1) each
  const int offset = s0 * (d + 1) - s0 * (s0 - 1) / 2;
  return offset + p.steps[1];
}

inline int lattice_size(int denominator) {
  return (denominator + 1) * (denominator + 2) / 2;
}

/// Snaps a CredoVector onto the lattice; throws if it is not a lattice point
/// within the simplex tolerance.
inline CredoLatticePoint lattice_point_from_credo(const CredoVector& cr,
                                                  double resolution) {
  const int denom = lattice_denominator(resolution);
  const double d = static_cast<double>(denom);
  std::array<double, 3> comps{cr.self_weight, cr.team_weight, cr.system_weight};
  CredoLatticePoint p;
  p.denominator = denom;
  int total = 0;
  for (int c = 0; c < 3; ++c) {
    const int s = static_cast<int>(std::llround(comps[static_cast<std::size_t>(c)] * d));
    if (std::abs(comps[static_cast<std::size_t>(c)] - static_cast<double>(s) / d) > 1e-9) {
      throw std::invalid_argument(
          std::string("credo component ") + channel_name(static_cast<Channel>(c)) +
          " = " + std::to_string(comps[static_cast<std::size_t>(c)]) +
          " is not a multiple of resolution " + std::to_string(resolution));
    }
    p.steps[static_cast<std::size_t>(c)] = s;
    total += s;
  }
  if (total != denom) {
    throw std::invalid_argument("credo does not lie on the lattice: steps sum to " +
                                std::to_string(total) + "/" + std::to_string(denom));
  }
  return p;
}

/// High-level action: shift one resolution step between two channels, or hold.
/// Seven distinct moves for three channels. no_op is move 0 so that a greedy
/// tie-break over a zero-initialized table keeps the credo unchanged.
struct CredoMove {
  bool is_no_op = true;
  Channel source = Channel::self;
  Channel dest = Channel::self;

  bool operator==(const CredoMove&) const = default;
};

inline const std::array<CredoMove, 7>& credo_moves() {
  static const std::array<CredoMove, 7> moves{{
      {true, Channel::self, Channel::self},
      {false, Channel::self, Channel::team},
      {false, Channel::self, Channel::system},
      {false, Channel::team, Channel::self},
      {false, Channel::team, Channel::system},
      {false, Channel::system, Channel::self},
      {false, Channel::system, Channel::team},
  }};
  return moves;
}

inline constexpr int kNumCredoMoves = 7;

inline std::string move_name(const CredoMove& m) {
  if (m.is_no_op) return "no_op";
  return std::string(channel_name(m.source)) + "->" + channel_name(m.dest);
}

/// Applies a move with boundary clamping: a transfer that would push the
/// source below 0 or the destination above 1 leaves the point unchanged.
/// Total on the lattice and closed over it.
inline CredoLatticePoint apply_move(const CredoLatticePoint& point, const CredoMove& move) {
  if (move.is_no_op) return point;
  const auto src = static_cast<std::size_t>(move.source);
  const auto dst = static_cast<std::size_t>(move.dest);
  if (src == dst) return point;
  if (point.steps[src] == 0 || point.steps[dst] == point.denominator) return point;
  CredoLatticePoint next = point;
  next.steps[src] -= 1;
  next.steps[dst] += 1;
  return next;
}

}  // namespace credo
