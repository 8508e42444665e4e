#include "objnav/sim/scene.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "objnav/kernels/vecops.hpp"

namespace objnav {

std::uint64_t Rng::next_u64() {
  state_ += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double Rng::next_unit() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::next_gaussian() {
  // Box-Muller; one value per call keeps the stream layout simple.
  double u1 = next_unit();
  const double u2 = next_unit();
  if (u1 < 1e-300) u1 = 1e-300;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
}

Rng Rng::for_stream(std::uint64_t seed, std::uint64_t step, std::uint64_t tag) {
  // Mix the three identifiers through one splitmix pass each.
  Rng mixer(seed * 0x9e3779b97f4a7c15ULL + step);
  const std::uint64_t a = mixer.next_u64();
  Rng mixer2(a ^ (tag * 0xbf58476d1ce4e5b9ULL));
  return Rng(mixer2.next_u64());
}

EmbeddingTable::EmbeddingTable(std::span<const std::string> names, std::uint64_t seed, int dim,
                               double max_abs_cos)
    : dim_(dim) {
  Rng rng(seed ^ 0x5851f42d4c957f2dULL);
  std::vector<std::string> sorted(names.begin(), names.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  for (const std::string& name : sorted) {
    std::vector<double> best;
    double best_worst = 2.0;
    for (int attempt = 0; attempt < 1000; ++attempt) {
      std::vector<double> v(dim);
      for (double& x : v) x = rng.next_gaussian();
      if (!vecops::normalize(v)) continue;
      double worst = 0.0;
      for (const auto& [other_name, other] : table_) {
        worst = std::max(worst, std::abs(vecops::dot(v, other)));
      }
      if (worst < best_worst) {
        best_worst = worst;
        best = v;
      }
      if (worst <= max_abs_cos) break;
    }
    table_.emplace(name, std::move(best));
  }
}

std::span<const double> EmbeddingTable::get(const std::string& name) const {
  auto it = table_.find(name);
  if (it == table_.end()) throw DataError("no embedding for surface: " + name);
  return it->second;
}

namespace {

std::string read_art_line(std::istream& is, int width) {
  std::string line;
  if (!std::getline(is, line)) throw DataError("truncated scene art");
  if (static_cast<int>(line.size()) < width) throw DataError("scene art line too short");
  return line.substr(0, width);
}

}  // namespace

Scene Scene::build(std::string name, GridFrame frame, double wall_height,
                   std::vector<std::string> art, std::vector<std::string> region_art,
                   std::map<char, std::string> region_key, std::vector<SceneObject> objects,
                   std::map<std::pair<std::string, std::string>, double> region_affinity,
                   std::map<std::pair<std::string, std::string>, double> object_affinity,
                   std::uint64_t embedding_seed, int embedding_dim) {
  Scene s;
  s.name_ = std::move(name);
  s.frame_ = frame;
  s.wall_height_ = wall_height;
  s.art_ = std::move(art);
  s.region_art_ = std::move(region_art);
  s.region_key_ = std::move(region_key);
  s.objects_ = std::move(objects);
  s.region_affinity_ = std::move(region_affinity);
  s.object_affinity_ = std::move(object_affinity);
  s.embedding_seed_ = embedding_seed;
  s.embedding_dim_ = embedding_dim;
  s.finalize();
  return s;
}

void Scene::finalize() {
  const int w = frame_.width(), h = frame_.height();
  if (static_cast<int>(art_.size()) != h) throw DataError("scene art height mismatch");
  if (static_cast<int>(region_art_.size()) != h) throw DataError("scene region art height mismatch");

  wall_.assign(frame_.cell_count(), 0);
  region_.assign(frame_.cell_count(), -1);
  region_names_.clear();
  std::map<std::string, int> region_index;
  for (const auto& [ch, rname] : region_key_) {
    if (!region_index.count(rname)) {
      region_index[rname] = static_cast<int>(region_names_.size());
      region_names_.push_back(rname);
    }
  }

  for (int row = 0; row < h; ++row) {
    // art line 0 is the visual top, i.e. the highest row index
    const std::string& wall_line = art_[h - 1 - row];
    const std::string& region_line = region_art_[h - 1 - row];
    if (static_cast<int>(wall_line.size()) < w || static_cast<int>(region_line.size()) < w)
      throw DataError("scene art line too short");
    for (int col = 0; col < w; ++col) {
      const std::size_t idx = frame_.linear_index({col, row});
      wall_[idx] = wall_line[col] == '#' ? 1 : 0;
      const char rc = region_line[col];
      if (rc != '.' && rc != '#' && rc != ' ') {
        auto it = region_key_.find(rc);
        if (it == region_key_.end()) throw DataError(std::string("unknown region char: ") + rc);
        region_[idx] = static_cast<std::int16_t>(region_index[it->second]);
      }
    }
  }

  objects_by_cell_.assign(frame_.cell_count(), {});
  for (std::size_t i = 0; i < objects_.size(); ++i) {
    const SceneObject& o = objects_[i];
    if (!frame_.contains(o.xy)) throw DataError("object outside scene: " + o.id);
    const CellIndex c = frame_.world_to_grid(o.xy);
    if (is_wall(c)) throw DataError("object inside wall: " + o.id);
    if (o.z0 >= o.z1) throw DataError("object height interval empty: " + o.id);
    objects_by_cell_[frame_.linear_index(c)].push_back(static_cast<int>(i));
  }

  std::set<std::string> names;
  names.insert("__void__");
  for (const SceneObject& o : objects_) names.insert(o.category);
  for (const std::string& r : region_names_) names.insert(r);
  std::vector<std::string> name_list(names.begin(), names.end());
  embeddings_ = EmbeddingTable(name_list, embedding_seed_, embedding_dim_);
}

bool Scene::blocks_ray(const CellIndex& c) const {
  return is_wall(c) || !objects_by_cell_[frame_.linear_index(c)].empty();
}

std::span<const int> Scene::objects_at(const CellIndex& c) const {
  return objects_by_cell_[frame_.linear_index(c)];
}

const std::string& Scene::region_name(const CellIndex& c) const {
  static const std::string empty;
  const std::int16_t r = region_[frame_.linear_index(c)];
  return r < 0 ? empty : region_names_[r];
}

double Scene::region_affinity(const std::string& query, const std::string& region) const {
  auto it = region_affinity_.find({query, region});
  return it == region_affinity_.end() ? 0.0 : it->second;
}

double Scene::object_affinity(const std::string& query, const std::string& category) const {
  auto it = object_affinity_.find({query, category});
  return it == object_affinity_.end() ? 0.0 : it->second;
}

std::string Scene::surface_at(const CellIndex& c, double z) const {
  for (int idx : objects_at(c)) {
    const SceneObject& o = objects_[idx];
    if (o.detectable && z >= o.z0 && z <= o.z1) return o.category;
  }
  return region_name(c);
}

bool Scene::line_of_sight(const Vec2& a, const Vec2& b) const {
  if (!frame_.contains(a) || !frame_.contains(b)) return false;
  const auto cells = raycast_cells(frame_, a, b);
  for (std::size_t i = 1; i + 1 < cells.size(); ++i) {
    if (blocks_ray(cells[i])) return false;
  }
  return true;
}

Scene Scene::load_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw DataError("cannot open scene file: " + path);
  return load(is);
}

Scene Scene::load(std::istream& is) {
  std::string tag, version;
  is >> tag >> version;
  if (tag != "objnav-scene" || version != "v1") throw DataError("not a scene file");

  std::string name;
  double resolution = 0.0, wall_height = 2.0;
  int width = 0, height = 0, embedding_dim = 32;
  std::uint64_t embedding_seed = 1;
  std::vector<std::string> art, region_art;
  std::map<char, std::string> region_key;
  std::vector<SceneObject> objects;
  std::map<std::pair<std::string, std::string>, double> region_affinity, object_affinity;

  std::string word;
  while (is >> word) {
    if (word == "name") {
      is >> name;
    } else if (word == "resolution") {
      is >> resolution;
    } else if (word == "width") {
      is >> width;
    } else if (word == "height") {
      is >> height;
    } else if (word == "wall_height") {
      is >> wall_height;
    } else if (word == "embedding_seed") {
      is >> embedding_seed;
    } else if (word == "embedding_dim") {
      is >> embedding_dim;
    } else if (word == "map") {
      is.ignore();  // end of line
      for (int i = 0; i < height; ++i) art.push_back(read_art_line(is, width));
    } else if (word == "regions") {
      is.ignore();
      for (int i = 0; i < height; ++i) region_art.push_back(read_art_line(is, width));
    } else if (word == "region_key") {
      int count;
      is >> count;
      for (int i = 0; i < count; ++i) {
        char c;
        std::string rname;
        is >> c >> rname;
        region_key[c] = rname;
      }
    } else if (word == "objects") {
      int count;
      is >> count;
      for (int i = 0; i < count; ++i) {
        SceneObject o;
        int detectable;
        is >> o.id >> o.category >> o.xy.x >> o.xy.y >> o.z0 >> o.z1 >> detectable;
        o.detectable = detectable != 0;
        std::string marker;
        is >> marker;
        if (marker == "decoy") {
          is >> o.decoy_category >> o.decoy_first >> o.decoy_rest;
        } else if (marker != "-") {
          throw DataError("bad object decoy marker: " + marker);
        }
        objects.push_back(std::move(o));
      }
    } else if (word == "region_affinity" || word == "object_affinity") {
      int count;
      is >> count;
      auto& table = word == "region_affinity" ? region_affinity : object_affinity;
      for (int i = 0; i < count; ++i) {
        std::string q, k;
        double v;
        is >> q >> k >> v;
        table[{q, k}] = v;
      }
    } else if (word == "end") {
      break;
    } else {
      throw DataError("unknown scene field: " + word);
    }
    if (!is) throw DataError("truncated scene file");
  }
  if (resolution <= 0.0 || width <= 0 || height <= 0) throw DataError("scene grid missing");

  return build(name, GridFrame(resolution, {0.0, 0.0}, width, height), wall_height,
               std::move(art), std::move(region_art), std::move(region_key), std::move(objects),
               std::move(region_affinity), std::move(object_affinity), embedding_seed,
               embedding_dim);
}

void Scene::save(std::ostream& os) const {
  char buf[256];
  os << "objnav-scene v1\n";
  os << "name " << name_ << "\n";
  std::snprintf(buf, sizeof(buf), "resolution %.17g\nwidth %d\nheight %d\nwall_height %.17g\n",
                frame_.resolution(), frame_.width(), frame_.height(), wall_height_);
  os << buf;
  os << "embedding_seed " << embedding_seed_ << "\nembedding_dim " << embedding_dim_ << "\n";
  os << "map\n";
  for (const std::string& line : art_) os << line << "\n";
  os << "regions\n";
  for (const std::string& line : region_art_) os << line << "\n";
  os << "region_key " << region_key_.size() << "\n";
  for (const auto& [c, rname] : region_key_) os << c << ' ' << rname << "\n";
  os << "objects " << objects_.size() << "\n";
  for (const SceneObject& o : objects_) {
    std::snprintf(buf, sizeof(buf), "%s %s %.17g %.17g %.17g %.17g %d", o.id.c_str(),
                  o.category.c_str(), o.xy.x, o.xy.y, o.z0, o.z1, o.detectable ? 1 : 0);
    os << buf;
    if (o.is_decoy()) {
      std::snprintf(buf, sizeof(buf), " decoy %s %.17g %.17g", o.decoy_category.c_str(),
                    o.decoy_first, o.decoy_rest);
      os << buf << "\n";
    } else {
      os << " -\n";
    }
  }
  os << "region_affinity " << region_affinity_.size() << "\n";
  for (const auto& [key, v] : region_affinity_) {
    std::snprintf(buf, sizeof(buf), "%s %s %.17g\n", key.first.c_str(), key.second.c_str(), v);
    os << buf;
  }
  os << "object_affinity " << object_affinity_.size() << "\n";
  for (const auto& [key, v] : object_affinity_) {
    std::snprintf(buf, sizeof(buf), "%s %s %.17g\n", key.first.c_str(), key.second.c_str(), v);
    os << buf;
  }
  os << "end\n";
}

}  // namespace objnav
