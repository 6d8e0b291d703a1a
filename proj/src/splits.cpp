#include "benchkit/splits.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "benchkit/csv.hpp"
#include "benchkit/error.hpp"

namespace benchkit::splits {

DatasetManifest::DatasetManifest(std::vector<ManifestEntry> entries) : entries_(std::move(entries)) {
    std::set<std::string> seen;
    for (const auto& e : entries_) {
        if (e.sample_id.empty() || e.label.empty()) {
            throw ValidationError("manifest entries need a non-empty sample_id and label");
        }
        if (!seen.insert(e.sample_id).second) {
            throw ValidationError("duplicate sample_id '" + e.sample_id + "' in manifest");
        }
    }
}

std::map<std::string, std::vector<std::string>> DatasetManifest::by_class() const {
    std::map<std::string, std::vector<std::string>> groups;
    for (const auto& e : entries_) {
        groups[e.label].push_back(e.sample_id);
    }
    for (auto& [_, ids] : groups) {
        std::sort(ids.begin(), ids.end());
    }
    return groups;
}

DatasetManifest parse_manifest_csv(std::string_view text) {
    auto rows = csv::parse(text);
    if (rows.empty()) {
        throw ParseError("manifest: missing header");
    }
    csv::Header header(rows.front());
    const auto id_col = header.index("sample_id");
    const auto label_col = header.index("label");
    std::vector<ManifestEntry> entries;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.fields.size() != header.names().size()) {
            throw ParseError("expected " + std::to_string(header.names().size()) + " fields", row.line);
        }
        entries.push_back({row.fields[id_col], row.fields[label_col]});
    }
    return DatasetManifest(std::move(entries));
}

std::pair<std::uint64_t, std::uint64_t> splitmix64_next(std::uint64_t state) {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return {z ^ (z >> 31), state};
}

std::uint64_t splitmix64_mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

RngStream RngStream::for_tag(std::uint64_t seed, std::string_view tag) {
    return RngStream(splitmix64_mix(seed) ^ fnv1a64(tag));
}

std::uint64_t RngStream::next() {
    auto [value, state] = splitmix64_next(state_);
    state_ = state;
    return value;
}

std::vector<std::string> seeded_shuffle(std::vector<std::string> ids, std::uint64_t seed, std::string_view stream_tag) {
    auto rng = RngStream::for_tag(seed, stream_tag);
    for (std::size_t i = ids.size(); i-- > 1;) {
        const auto j = static_cast<std::size_t>(rng.next() % (static_cast<std::uint64_t>(i) + 1));
        std::swap(ids[i], ids[j]);
    }
    return ids;
}

SplitPlan stratified_holdout(const DatasetManifest& manifest, double train_fraction, std::uint64_t seed) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
        throw InvalidArgument("train fraction must lie strictly between 0 and 1");
    }
    if (manifest.empty()) {
        throw InvalidArgument("cannot split an empty manifest");
    }
    SplitPlan plan;
    for (const auto& [label, ids] : manifest.by_class()) {
        auto shuffled = seeded_shuffle(ids, seed, label);
        // The epsilon keeps products such as 0.7 * 10 from flooring to 6.
        const auto n_train = static_cast<std::size_t>(std::floor(train_fraction * static_cast<double>(ids.size()) + 1e-9));
        plan.train_ids.insert(plan.train_ids.end(), shuffled.begin(), shuffled.begin() + n_train);
        plan.test_ids.insert(plan.test_ids.end(), shuffled.begin() + n_train, shuffled.end());
    }
    return plan;
}

FoldPlan stratified_kfold(const DatasetManifest& manifest, int k, std::uint64_t seed) {
    if (k < 2) {
        throw InvalidArgument("K must be at least 2, got " + std::to_string(k));
    }
    FoldPlan plan;
    plan.k = k;
    for (const auto& [label, ids] : manifest.by_class()) {
        if (ids.size() < static_cast<std::size_t>(k)) {
            plan.warnings.push_back("class '" + label + "' has " + std::to_string(ids.size()) +
                                    " samples, fewer than K=" + std::to_string(k));
        }
        auto shuffled = seeded_shuffle(ids, seed, label);
        for (std::size_t t = 0; t < shuffled.size(); ++t) {
            plan.fold_of.emplace(std::move(shuffled[t]), static_cast<int>(t % static_cast<std::size_t>(k)));
        }
    }
    return plan;
}

Episode sample_episode(const DatasetManifest& manifest, int ways, int shots, int queries, std::uint64_t seed,
                       int episode_index) {
    if (ways < 1 || shots < 1 || queries < 0) {
        throw InvalidArgument("episode needs ways >= 1, shots >= 1 and queries >= 0");
    }
    const auto per_class = static_cast<std::size_t>(shots) + static_cast<std::size_t>(queries);
    const auto groups = manifest.by_class();

    std::vector<std::string> eligible;
    for (const auto& [label, ids] : groups) {
        if (ids.size() >= per_class) {
            eligible.push_back(label);
        }
    }
    if (eligible.size() < static_cast<std::size_t>(ways)) {
        throw InvalidArgument("episode needs " + std::to_string(ways) + " classes with at least " +
                              std::to_string(per_class) + " samples, only " + std::to_string(eligible.size()) +
                              " qualify");
    }

    const auto tag = "episode/" + std::to_string(episode_index);
    auto chosen = seeded_shuffle(std::move(eligible), seed, tag);
    chosen.resize(static_cast<std::size_t>(ways));

    Episode ep;
    for (const auto& label : chosen) {
        auto ids = seeded_shuffle(groups.at(label), seed, tag + "/" + label);
        ep.classes.push_back(label);
        ep.support.emplace_back(ids.begin(), ids.begin() + shots);
        ep.query.emplace_back(ids.begin() + shots, ids.begin() + static_cast<std::ptrdiff_t>(per_class));
    }
    return ep;
}

}  // namespace benchkit::splits
