#include <catch2/catch_amalgamated.hpp>

#include <queue>
#include <set>
#include <vector>

#include "credo/lattice.hpp"

using credo::apply_move;
using credo::Channel;
using credo::CredoLatticePoint;
using credo::CredoMove;
using credo::credo_moves;
using credo::enumerate_lattice;
using credo::lattice_index;
using credo::lattice_point_from_credo;

TEST_CASE("enumerate_lattice counts compositions") {
  CHECK(enumerate_lattice(0.2).size() == 21);
  CHECK(enumerate_lattice(1.0).size() == 3);
  CHECK(enumerate_lattice(0.5).size() == 6);
  CHECK_THROWS_AS(enumerate_lattice(0.3), std::invalid_argument);
  CHECK_THROWS_AS(enumerate_lattice(-0.2), std::invalid_argument);
}

TEST_CASE("lattice enumeration is lexicographic and indexable") {
  const auto points = enumerate_lattice(0.2);
  for (std::size_t i = 0; i < points.size(); ++i) {
    CHECK(lattice_index(points[i]) == static_cast<int>(i));
    if (i > 0) CHECK(points[i - 1].steps < points[i].steps);
  }
}

TEST_CASE("lattice points reconstruct exact simplex credos") {
  for (double resolution : {1.0, 0.5, 0.25, 0.2}) {
    for (const auto& p : enumerate_lattice(resolution)) {
      const credo::CredoVector cr = p.to_credo();
      REQUIRE(cr.sum() == 1.0);  // exact, not tolerance-based
      REQUIRE(!credo::validate_credo(cr));
    }
  }
}

TEST_CASE("move set has seven distinct moves with no_op first") {
  const auto& moves = credo_moves();
  CHECK(moves.size() == 7);
  CHECK(moves[0].is_no_op);
  std::set<std::pair<int, int>> transfers;
  for (std::size_t i = 1; i < moves.size(); ++i) {
    CHECK(!moves[i].is_no_op);
    CHECK(moves[i].source != moves[i].dest);
    transfers.insert({static_cast<int>(moves[i].source), static_cast<int>(moves[i].dest)});
  }
  CHECK(transfers.size() == 6);
}

TEST_CASE("apply_move worked examples") {
  const CredoLatticePoint start{{1, 0, 4}, 5};  // <0.2, 0.0, 0.8>
  const CredoMove self_to_system{false, Channel::self, Channel::system};

  const auto moved = apply_move(start, self_to_system);
  CHECK(moved == CredoLatticePoint{{0, 0, 5}, 5});  // <0.0, 0.0, 1.0>

  // clamped: self is already empty
  CHECK(apply_move(moved, self_to_system) == moved);

  const CredoMove no_op{};
  CHECK(apply_move(start, no_op) == start);
}

TEST_CASE("apply_move is closed over the lattice") {
  const auto points = enumerate_lattice(0.2);
  const std::set<std::array<int, 3>> lattice_set = [&] {
    std::set<std::array<int, 3>> s;
    for (const auto& p : points) s.insert(p.steps);
    return s;
  }();
  for (const auto& p : points) {
    for (const auto& m : credo_moves()) {
      const auto next = apply_move(p, m);
      REQUIRE(lattice_set.count(next.steps) == 1);
      REQUIRE(next.steps[0] + next.steps[1] + next.steps[2] == 5);
    }
  }
}

TEST_CASE("the move graph connects the lattice") {
  const auto points = enumerate_lattice(0.2);
  std::vector<bool> visited(points.size(), false);
  std::queue<int> frontier;
  frontier.push(0);
  visited[0] = true;
  int reached = 1;
  while (!frontier.empty()) {
    const auto p = points[static_cast<std::size_t>(frontier.front())];
    frontier.pop();
    for (const auto& m : credo_moves()) {
      const int next = lattice_index(apply_move(p, m));
      if (!visited[static_cast<std::size_t>(next)]) {
        visited[static_cast<std::size_t>(next)] = true;
        ++reached;
        frontier.push(next);
      }
    }
  }
  CHECK(reached == 21);
}

TEST_CASE("lattice_point_from_credo snaps on-lattice vectors and rejects others") {
  const auto p = lattice_point_from_credo(credo::CredoVector{0.2, 0.0, 0.8}, 0.2);
  CHECK(p == CredoLatticePoint{{1, 0, 4}, 5});
  CHECK_THROWS_AS(lattice_point_from_credo(credo::CredoVector{0.3, 0.3, 0.4}, 0.2),
                  std::invalid_argument);
}
