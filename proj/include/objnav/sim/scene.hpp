#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "objnav/core/geometry.hpp"
#include "objnav/map/feature_map.hpp"

namespace objnav {

// Deterministic counter-based RNG (splitmix64 core) so episode traces are
// stable across platforms and standard-library versions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64();
  double next_unit();      // [0, 1)
  double next_gaussian();  // Box-Muller, one draw per call

  static Rng for_stream(std::uint64_t seed, std::uint64_t step, std::uint64_t tag);

 private:
  std::uint64_t state_;
};

// Unit embeddings per surface name, drawn from a seeded construction with
// pairwise |cos| kept small so cosine matching is discriminative.
class EmbeddingTable {
 public:
  EmbeddingTable() = default;
  EmbeddingTable(std::span<const std::string> names, std::uint64_t seed, int dim,
                 double max_abs_cos = 0.3);

  int dim() const { return dim_; }
  std::span<const double> get(const std::string& name) const;
  bool has(const std::string& name) const { return table_.count(name) > 0; }

 private:
  int dim_ = 0;
  std::map<std::string, std::vector<double>> table_;
};

struct SceneObject {
  std::string id;
  std::string category;
  Vec2 xy;
  double z0 = 0.0;
  double z1 = 1.0;
  bool detectable = true;
  // Scripted false-positive: reports decoy_category at decoy_first confidence
  // once, decoy_rest afterwards.
  std::string decoy_category;
  double decoy_first = 0.0;
  double decoy_rest = 0.0;
  bool is_decoy() const { return !decoy_category.empty(); }
};

// Ground-truth world: walls and regions as character art, objects with height
// intervals, affinity tables standing in for VLM similarity, and a seeded
// embedding table. Immutable after load.
class Scene {
 public:
  static Scene load(std::istream& is);
  static Scene load_file(const std::string& path);
  void save(std::ostream& os) const;

  // Construction from parts (the world generator uses this).
  static Scene build(std::string name, GridFrame frame, double wall_height,
                     std::vector<std::string> art, std::vector<std::string> region_art,
                     std::map<char, std::string> region_key, std::vector<SceneObject> objects,
                     std::map<std::pair<std::string, std::string>, double> region_affinity,
                     std::map<std::pair<std::string, std::string>, double> object_affinity,
                     std::uint64_t embedding_seed, int embedding_dim);

  const std::string& name() const { return name_; }
  const GridFrame& frame() const { return frame_; }
  double wall_height() const { return wall_height_; }
  const std::vector<SceneObject>& objects() const { return objects_; }
  const EmbeddingTable& embeddings() const { return embeddings_; }
  std::uint64_t embedding_seed() const { return embedding_seed_; }
  int embedding_dim() const { return embedding_dim_; }

  bool is_wall(const CellIndex& c) const { return wall_[frame_.linear_index(c)] != 0; }
  // wall or holding at least one object
  bool blocks_ray(const CellIndex& c) const;
  std::span<const int> objects_at(const CellIndex& c) const;
  const std::string& region_name(const CellIndex& c) const;  // empty when unlabeled

  double region_affinity(const std::string& query, const std::string& region) const;
  double object_affinity(const std::string& query, const std::string& category) const;

  // Surface name seen at height z in a cell: the covering detectable object's
  // category, else the cell's region name (empty when unlabeled).
  std::string surface_at(const CellIndex& c, double z) const;

  // True line of sight between two world points: no wall or object cell
  // strictly between them.
  bool line_of_sight(const Vec2& a, const Vec2& b) const;

 private:
  void finalize();

  std::string name_;
  GridFrame frame_;
  double wall_height_ = 2.0;
  std::vector<std::uint8_t> wall_;
  std::vector<std::int16_t> region_;  // -1 = unlabeled
  std::vector<std::string> region_names_;
  std::vector<SceneObject> objects_;
  std::vector<std::vector<int>> objects_by_cell_;
  std::map<std::pair<std::string, std::string>, double> region_affinity_;
  std::map<std::pair<std::string, std::string>, double> object_affinity_;
  std::uint64_t embedding_seed_ = 1;
  int embedding_dim_ = 32;
  EmbeddingTable embeddings_;
  std::vector<std::string> art_;
  std::vector<std::string> region_art_;
  std::map<char, std::string> region_key_;
};

}  // namespace objnav
