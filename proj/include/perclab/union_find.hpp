#pragma once

#include <numeric>
#include <vector>

namespace perclab {

// Disjoint sets with path halving and union by size.
class DisjointSets {
 public:
  explicit DisjointSets(int n) : parent_(n), size_(n, 1) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }

  int find(int x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    return true;
  }

  bool same(int a, int b) { return find(a) == find(b); }

  int size_of(int x) { return size_[find(x)]; }

  int count() const { return component_count_impl(); }

 private:
  int component_count_impl() const {
    int c = 0;
    for (int i = 0; i < static_cast<int>(parent_.size()); ++i)
      if (parent_[i] == i) ++c;
    return c;
  }

  std::vector<int> parent_;
  std::vector<int> size_;
};

}  // namespace perclab
