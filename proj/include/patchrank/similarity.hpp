#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "patchrank/formulas.hpp"
#include "patchrank/model.hpp"
#include "patchrank/quality.hpp"

namespace patchrank {

// |a ∩ b| for two ascending, duplicate-free ranges.
template <class RangeA, class RangeB>
std::size_t sorted_match_count(const RangeA &a, const RangeB &b) {
  std::size_t n = 0;
  auto ia = std::begin(a);
  auto ib = std::begin(b);
  while (ia != std::end(a) && ib != std::end(b)) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      ++n;
      ++ia;
      ++ib;
    }
  }
  return n;
}

template <class T>
std::size_t match_count(const std::set<T> &a, const std::set<T> &b) {
  return sorted_match_count(a, b);
}

// Size of the symmetric difference (A - B) ∪ (B - A).
template <class T>
std::size_t differ_count(const std::set<T> &a, const std::set<T> &b) {
  return a.size() + b.size() - 2 * match_count(a, b);
}

// Patches are grouped by their modified-element set at the run granularity
// (plus their pattern set when patterns are part of the similarity). Every
// member of a cluster has the same tuple at all times.
struct ClusterKey {
  std::vector<ElementId> elements;
  std::vector<PatternId> patterns;
  auto operator<=>(const ClusterKey &) const = default;
};

struct StoreOptions {
  Granularity granularity = Granularity::Method;
  bool pattern_augmented = false;
};

class TupleStore {
 public:
  // Groups `patches` into clusters, each member list ordered by
  // original_index, every tuple at (1,1,1,1). Patch positions used by the
  // rest of the API are indices into `patches`.
  TupleStore(std::span<const PatchRecord> patches, StoreOptions options);

  const StoreOptions &options() const { return options_; }

  // Adds the evidence of one validated patch to every cluster that still has
  // remaining members. `elements` are taken at options().granularity; names
  // outside the local pool only contribute to the symmetric difference.
  void update(const ElementSet &elements, const PatternSet &patterns,
              Quality quality);
  // Same, for a patch of this pool (already popped or not).
  void update_from_patch(std::size_t patch_pos, Quality quality);

  // Removes and returns the remaining patch with the highest score; ties go
  // to the smallest original_index. Throws EmptyPool.
  std::size_t pop_highest(FormulaId formula, double *score_at_pop = nullptr);

  std::size_t remaining() const { return remaining_; }
  bool is_remaining(std::size_t patch_pos) const;
  std::size_t patch_count() const { return patch_cluster_.size(); }

  // Clusters that still hold at least one remaining patch.
  std::size_t active_cluster_count() const { return active_.size(); }
  std::size_t total_cluster_count() const { return clusters_.size(); }

  const SimilarityTuple &tuple_of(std::size_t patch_pos) const;
  ClusterKey cluster_key_of(std::size_t patch_pos) const;
  // Remaining members of the cluster holding `patch_pos`, by original_index.
  std::vector<std::size_t> remaining_members_of(std::size_t patch_pos) const;

 private:
  struct Cluster {
    std::vector<std::uint32_t> elements;  // interned, ascending
    std::vector<std::uint32_t> patterns;  // interned, ascending
    SimilarityTuple tuple;
    std::vector<std::size_t> members;  // patch positions by original_index
    std::size_t head = 0;              // members before head are popped
  };

  void apply(std::span<const std::uint32_t> elements, std::size_t element_count,
             std::span<const std::uint32_t> patterns, std::size_t pattern_count,
             Quality quality);

  StoreOptions options_;
  std::vector<Cluster> clusters_;
  std::vector<std::uint32_t> active_;
  std::vector<std::uint32_t> patch_cluster_;
  std::vector<std::size_t> original_index_;
  std::vector<bool> popped_;
  std::size_t remaining_ = 0;
  std::unordered_map<std::string, std::uint32_t> element_ids_;
  std::unordered_map<std::string, std::uint32_t> pattern_ids_;
  std::vector<std::string> element_names_;
  std::vector<std::string> pattern_names_;
};

// Builds the store for `patches` under the given options.
TupleStore cluster_patches(std::span<const PatchRecord> patches,
                           StoreOptions options);

// Applies the evidence of an executed patch (already popped) to `store`.
void update_tuples(TupleStore &store, const PatchRecord &executed,
                   Quality quality);

}  // namespace patchrank
