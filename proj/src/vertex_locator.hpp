#pragma once

#include <cmath>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "sdg/geometry.hpp"

namespace sdg::detail {

/// Identifies points up to a fixed quantum (the mesh tolerance).
class VertexLocator {
 public:
  explicit VertexLocator(double quantum) : quantum_(quantum) {}

  int find(Point p) const {
    auto it = map_.find(key(p));
    return it == map_.end() ? -1 : it->second;
  }

  bool contains(Point p) const { return map_.count(key(p)) != 0; }

  /// Returns the id of p, appending it to `points` if it is new.
  int insert(Point p, std::vector<Point>& points) {
    auto [it, inserted] = map_.try_emplace(key(p), static_cast<int>(points.size()));
    if (inserted) points.push_back(p);
    return it->second;
  }

  void add(Point p, int id) { map_.try_emplace(key(p), id); }

 private:
  struct Key {
    std::int64_t x;
    std::int64_t y;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const noexcept {
      return std::hash<std::int64_t>{}(k.x) ^ (std::hash<std::int64_t>{}(k.y) * 0x9e3779b97f4a7c15ULL);
    }
  };

  Key key(Point p) const { return {std::llround(p.x / quantum_), std::llround(p.y / quantum_)}; }

  double quantum_;
  std::unordered_map<Key, int, KeyHash> map_;
};

}  // namespace sdg::detail
