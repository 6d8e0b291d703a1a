#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace benchkit::splits {

struct ManifestEntry {
    std::string sample_id;
    std::string label;
};

/// Sample ids must be unique.
class DatasetManifest {
public:
    DatasetManifest() = default;
    explicit DatasetManifest(std::vector<ManifestEntry> entries);

    const std::vector<ManifestEntry>& entries() const { return entries_; }
    bool empty() const { return entries_.empty(); }
    std::size_t size() const { return entries_.size(); }

    /// Sample ids per class label, ids sorted; classes in label order.
    std::map<std::string, std::vector<std::string>> by_class() const;

private:
    std::vector<ManifestEntry> entries_;
};

/// Reads manifest.csv (`sample_id,label`).
DatasetManifest parse_manifest_csv(std::string_view text);

/// splitmix64 step: returns (value, next state).
std::pair<std::uint64_t, std::uint64_t> splitmix64_next(std::uint64_t state);

/// splitmix64 output finalizer applied to `x` without the increment.
std::uint64_t splitmix64_mix(std::uint64_t x);

std::uint64_t fnv1a64(std::string_view bytes);

class RngStream {
public:
    explicit RngStream(std::uint64_t state) : state_(state) {}

    /// Stream for (seed, tag): state = splitmix64_mix(seed) ^ fnv1a64(tag).
    static RngStream for_tag(std::uint64_t seed, std::string_view tag);

    std::uint64_t next();
    std::uint64_t state() const { return state_; }

private:
    std::uint64_t state_;
};

/// Fisher–Yates from the last index down to 1 with j = next() % (i + 1).
/// The modulo draw is slightly biased; accepted for bit-exact reproducibility.
std::vector<std::string> seeded_shuffle(std::vector<std::string> ids, std::uint64_t seed, std::string_view stream_tag);

struct SplitPlan {
    std::vector<std::string> train_ids;
    std::vector<std::string> test_ids;
};

/// Per class: shuffle the sorted ids with tag = label, first
/// floor(train_fraction * n) go to train.
SplitPlan stratified_holdout(const DatasetManifest& manifest, double train_fraction, std::uint64_t seed);

struct FoldPlan {
    int k = 0;
    std::map<std::string, int> fold_of;
    /// One entry per class with fewer than k samples.
    std::vector<std::string> warnings;
};

/// Per class: shuffle with tag = label, deal round-robin (t-th id to fold t mod k).
FoldPlan stratified_kfold(const DatasetManifest& manifest, int k, std::uint64_t seed);

struct Episode {
    std::vector<std::string> classes;
    /// Indexed like `classes`.
    std::vector<std::vector<std::string>> support;
    std::vector<std::vector<std::string>> query;
};

/// Draws a `ways`-way `shots`-shot episode with `queries` query samples per class.
Episode sample_episode(const DatasetManifest& manifest, int ways, int shots, int queries, std::uint64_t seed,
                       int episode_index);

}  // namespace benchkit::splits
