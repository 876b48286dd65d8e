#pragma once

// Reduction of a ray population to an axial map: global longest-first greedy,
// BFS/DFS search over lines crossing the selection, and the line-seeded
// pipeline.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "axialgen/bucket.hpp"
#include "axialgen/ridge.hpp"

namespace axialgen {

enum class Strategy { Global, Bfs, Dfs, LineSeeded };

std::string to_string(Strategy s);
// Accepts global, bfs, dfs, line_seeded and line-seeded. Throws InvalidStrategy.
Strategy parse_strategy(std::string_view name);

struct ReduceConfig {
  double overlap_threshold = 0.85;
  Strategy strategy = Strategy::Global;
  double coverage_target = 0.99;
  bool connectivity_tiebreak = true;

  void validate() const;  // throws InvalidConfig
};

struct AxialStats {
  std::size_t input_ray_count = 0;
  double coverage_fraction = 0.0;
  double total_length = 0.0;
};

struct AxialMap {
  std::vector<Ray> lines;  // selection order
  std::vector<Bucket> buckets;
  ReduceConfig config;
  AxialStats stats;
};

struct StepResult {
  Ray line;
  Bucket bucket;
  std::vector<int> removed;  // ray ids, ascending; includes the line itself
  std::size_t remaining = 0;
};

// One selection per step(). Holds references to graph and map.
class Reducer {
 public:
  // strategy must be global, bfs or dfs.
  Reducer(std::vector<Ray> rays, const MedialAxisGraph& graph, const FreeSpaceMap& map,
          const ReduceConfig& cfg);

  // Empty once no ray survives.
  std::optional<StepResult> step();
  std::size_t remaining() const { return remaining_; }
  std::size_t steps() const { return lines_.size(); }
  const std::vector<Ray>& rays() const { return rays_; }
  const ReduceConfig& config() const { return cfg_; }
  bool alive(std::size_t i) const { return alive_[i]; }

  // Coverage is computed on demand.
  AxialMap result() const;

 private:
  std::optional<std::size_t> longest(const std::vector<std::size_t>& pool) const;
  std::optional<std::size_t> best_child(std::size_t parent) const;
  std::size_t connectivity(std::size_t i) const;
  StepResult select(std::size_t i);

  std::vector<Ray> rays_;
  const MedialAxisGraph& graph_;
  const FreeSpaceMap& map_;
  ReduceConfig cfg_;
  std::vector<char> alive_;
  std::size_t remaining_ = 0;
  std::vector<std::size_t> open_;  // selected lines still to expand (bfs/dfs)
  std::vector<Ray> lines_;
  std::vector<Bucket> buckets_;
};

AxialMap reduce_global(const std::vector<Ray>& rays, const MedialAxisGraph& graph,
                       const FreeSpaceMap& map, const ReduceConfig& cfg);

// cfg.strategy must be bfs or dfs, else InvalidStrategy.
AxialMap reduce_search(const std::vector<Ray>& rays, const MedialAxisGraph& graph,
                       const FreeSpaceMap& map, const ReduceConfig& cfg);

AxialMap axialgen_line_seeded(const FreeSpaceMap& map, const Segment& seed,
                              const MedialAxisGraph& graph, const RidgeConfig& rcfg,
                              const ReduceConfig& cfg);

// Area of the union of the buckets inside free space over the free area.
double coverage_fraction(const AxialMap& axial, const FreeSpaceMap& map);
double coverage_fraction(const std::vector<Bucket>& buckets, const FreeSpaceMap& map);

}  // namespace axialgen
