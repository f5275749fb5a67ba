#pragma once

#include <algorithm>
#include <utility>
#include <vector>

#include "lfcbf/errors.hpp"

namespace lfcbf::net {

/// Undirected communication graph over agents 1..n. Followers are
/// 1..n-1, the single leader is agent n.
class Graph {
 public:
  Graph(int n, std::vector<std::pair<int, int>> edges, int leader);

  int n() const { return n_; }
  int leader() const { return leader_; }
  int follower_count() const { return n_ - 1; }

  const std::vector<int>& neighbors(int i) const {
    return adjacency_.at(static_cast<std::size_t>(i - 1));
  }
  bool adjacent(int i, int j) const {
    const auto& nb = neighbors(i);
    return std::find(nb.begin(), nb.end(), j) != nb.end();
  }

  /// Followers that are not neighbors of the leader.
  std::vector<int> leader_non_neighbors() const;

  /// True when every follower is a leader neighbor (the full-information
  /// special case, e.g. a star with the leader in the middle).
  bool leader_sees_all() const { return leader_non_neighbors().empty(); }

  bool connected() const;

  const std::vector<std::pair<int, int>>& edges() const { return edges_; }

 private:
  int n_;
  int leader_;
  std::vector<std::pair<int, int>> edges_;
  std::vector<std::vector<int>> adjacency_;
};

}  // namespace lfcbf::net
