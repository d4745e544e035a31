#pragma once
// Finite sparse vectors over the index lattice.  Absent indices read as zero;
// iteration and serialization follow the deterministic Index order.

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "tomotest/lattice.hpp"

namespace tomotest {

class SequenceVector {
 public:
  using Map = std::map<Index, double>;

  SequenceVector() = default;

  double at(Index nu) const {
    auto it = entries_.find(nu);
    return it == entries_.end() ? 0.0 : it->second;
  }
  bool contains(Index nu) const { return entries_.count(nu) != 0; }
  void set(Index nu, double value) { entries_[nu] = value; }

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const Map& entries() const { return entries_; }

  // Indices carrying an explicit entry, in order.
  std::vector<Index> support() const;

  // Dense view aligned with a caller-supplied index order; absent reads 0.
  Eigen::ArrayXd values_on(const std::vector<Index>& order) const;

  // CSV with header "j,l,value", one entry per line, 17 significant digits so
  // round trips are exact.
  std::string to_csv() const;
  static SequenceVector from_csv(const std::string& text);

  // JSON array of [j, l, value] triples in the same order.
  std::string to_json() const;
  static SequenceVector from_json(const std::string& text);

 private:
  Map entries_;
};

}  // namespace tomotest
