#include "patchrank/similarity.hpp"

#include <numeric>

#include "patchrank/errors.hpp"

namespace patchrank {

namespace {

std::uint32_t intern(std::unordered_map<std::string, std::uint32_t> &ids,
                     std::vector<std::string> &names, const std::string &name) {
  const auto [it, inserted] =
      ids.try_emplace(name, static_cast<std::uint32_t>(names.size()));
  if (inserted) names.push_back(name);
  return it->second;
}

// Interned ids of the names known to `ids`, ascending; unknown names are only
// counted.
template <class Set, class NameOf>
std::vector<std::uint32_t> lookup(
    const std::unordered_map<std::string, std::uint32_t> &ids, const Set &set,
    NameOf name_of) {
  std::vector<std::uint32_t> out;
  out.reserve(set.size());
  for (const auto &item : set) {
    const auto it = ids.find(name_of(item));
    if (it != ids.end()) out.push_back(it->second);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TupleStore::TupleStore(std::span<const PatchRecord> patches,
                       StoreOptions options)
    : options_(options) {
  const std::size_t n = patches.size();
  patch_cluster_.resize(n);
  original_index_.resize(n);
  popped_.assign(n, false);
  remaining_ = n;

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return patches[a].original_index < patches[b].original_index;
  });

  std::map<std::pair<std::vector<std::uint32_t>, std::vector<std::uint32_t>>,
           std::uint32_t>
      by_key;
  for (std::size_t pos : order) {
    const PatchRecord &patch = patches[pos];
    original_index_[pos] = patch.original_index;

    std::vector<std::uint32_t> elems;
    for (const ElementId &e : elements_of(patch, options_.granularity)) {
      elems.push_back(intern(element_ids_, element_names_, e.name));
    }
    std::sort(elems.begin(), elems.end());

    std::vector<std::uint32_t> pats;
    if (options_.pattern_augmented) {
      for (const PatternId &p : patch.patterns) {
        pats.push_back(intern(pattern_ids_, pattern_names_, p.name));
      }
      std::sort(pats.begin(), pats.end());
    }

    auto key = std::make_pair(std::move(elems), std::move(pats));
    auto it = by_key.find(key);
    if (it == by_key.end()) {
      const auto id = static_cast<std::uint32_t>(clusters_.size());
      Cluster c;
      c.elements = key.first;
      c.patterns = key.second;
      clusters_.push_back(std::move(c));
      active_.push_back(id);
      it = by_key.emplace(std::move(key), id).first;
    }
    clusters_[it->second].members.push_back(pos);
    patch_cluster_[pos] = it->second;
  }
}

void TupleStore::apply(std::span<const std::uint32_t> elements,
                       std::size_t element_count,
                       std::span<const std::uint32_t> patterns,
                       std::size_t pattern_count, Quality quality) {
  for (std::uint32_t id : active_) {
    Cluster &c = clusters_[id];
    std::uint64_t match = sorted_match_count(c.elements, elements);
    std::uint64_t differ = c.elements.size() + element_count - 2 * match;
    if (options_.pattern_augmented) {
      const std::uint64_t pmatch = sorted_match_count(c.patterns, patterns);
      match += pmatch;
      differ += c.patterns.size() + pattern_count - 2 * pmatch;
    }
    if (quality == Quality::High) {
      c.tuple.ef += match;
      c.tuple.nf += differ;
    } else {
      c.tuple.ep += match;
      c.tuple.np += differ;
    }
  }
}

void TupleStore::update(const ElementSet &elements, const PatternSet &patterns,
                        Quality quality) {
  const auto elems = lookup(element_ids_, elements,
                            [](const ElementId &e) -> const std::string & { return e.name; });
  std::vector<std::uint32_t> pats;
  if (options_.pattern_augmented) {
    pats = lookup(pattern_ids_, patterns,
                  [](const PatternId &p) -> const std::string & { return p.name; });
  }
  apply(elems, elements.size(), pats, patterns.size(), quality);
}

void TupleStore::update_from_patch(std::size_t patch_pos, Quality quality) {
  const Cluster &c = clusters_.at(patch_cluster_.at(patch_pos));
  // Copies: apply() mutates clusters_, which may include c itself.
  const std::vector<std::uint32_t> elems = c.elements;
  const std::vector<std::uint32_t> pats = c.patterns;
  apply(elems, elems.size(), pats, pats.size(), quality);
}

std::size_t TupleStore::pop_highest(FormulaId formula, double *score_at_pop) {
  if (active_.empty()) throw EmptyPool();

  std::size_t best = 0;
  double best_score = 0.0;
  std::size_t best_index = 0;
  for (std::size_t i = 0; i < active_.size(); ++i) {
    const Cluster &c = clusters_[active_[i]];
    const double s = score(formula, c.tuple);
    const std::size_t head_index = original_index_[c.members[c.head]];
    const bool take =
        i == 0 || (scores_tied(s, best_score) ? head_index < best_index
                                              : s > best_score);
    if (take) {
      best = i;
      best_score = s;
      best_index = head_index;
    }
  }

  Cluster &c = clusters_[active_[best]];
  const std::size_t pos = c.members[c.head++];
  popped_[pos] = true;
  --remaining_;
  if (c.head == c.members.size()) {
    active_.erase(active_.begin() + static_cast<std::ptrdiff_t>(best));
  }
  if (score_at_pop) *score_at_pop = best_score;
  return pos;
}

bool TupleStore::is_remaining(std::size_t patch_pos) const {
  return !popped_.at(patch_pos);
}

const SimilarityTuple &TupleStore::tuple_of(std::size_t patch_pos) const {
  return clusters_.at(patch_cluster_.at(patch_pos)).tuple;
}

ClusterKey TupleStore::cluster_key_of(std::size_t patch_pos) const {
  const Cluster &c = clusters_.at(patch_cluster_.at(patch_pos));
  ClusterKey key;
  for (std::uint32_t id : c.elements) {
    key.elements.push_back({options_.granularity, element_names_[id]});
  }
  for (std::uint32_t id : c.patterns) key.patterns.push_back({pattern_names_[id]});
  std::sort(key.elements.begin(), key.elements.end());
  std::sort(key.patterns.begin(), key.patterns.end());
  return key;
}

std::vector<std::size_t> TupleStore::remaining_members_of(
    std::size_t patch_pos) const {
  const Cluster &c = clusters_.at(patch_cluster_.at(patch_pos));
  return {c.members.begin() + static_cast<std::ptrdiff_t>(c.head),
          c.members.end()};
}

TupleStore cluster_patches(std::span<const PatchRecord> patches,
                           StoreOptions options) {
  return TupleStore(patches, options);
}

void update_tuples(TupleStore &store, const PatchRecord &executed,
                   Quality quality) {
  store.update(elements_of(executed, store.options().granularity),
               executed.patterns, quality);
}

}  // namespace patchrank
