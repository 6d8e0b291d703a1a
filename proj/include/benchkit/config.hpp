#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "benchkit/filesystem.hpp"

namespace benchkit::config {

class ConfigNode;

using Null = std::monostate;
using Scalar = std::variant<Null, bool, std::int64_t, double, std::string>;
/// Insertion-ordered; keys unique.
using Mapping = std::vector<std::pair<std::string, ConfigNode>>;
using Sequence = std::vector<ConfigNode>;

class ConfigNode {
public:
    ConfigNode() : value_(Scalar{}) {}
    ConfigNode(Scalar s) : value_(std::move(s)) {}  // NOLINT(google-explicit-constructor)
    ConfigNode(Mapping m) : value_(std::move(m)) {}  // NOLINT(google-explicit-constructor)
    ConfigNode(Sequence s) : value_(std::move(s)) {}  // NOLINT(google-explicit-constructor)

    static ConfigNode mapping() { return ConfigNode(Mapping{}); }

    bool is_mapping() const { return std::holds_alternative<Mapping>(value_); }
    bool is_sequence() const { return std::holds_alternative<Sequence>(value_); }
    bool is_scalar() const { return std::holds_alternative<Scalar>(value_); }

    const Mapping& as_mapping() const { return std::get<Mapping>(value_); }
    Mapping& as_mapping() { return std::get<Mapping>(value_); }
    const Sequence& as_sequence() const { return std::get<Sequence>(value_); }
    Sequence& as_sequence() { return std::get<Sequence>(value_); }
    const Scalar& as_scalar() const { return std::get<Scalar>(value_); }

    /// Mapping lookup; nullptr when absent or not a mapping.
    const ConfigNode* find(std::string_view key) const;
    /// Inserts or replaces, keeping the original position of an existing key.
    void set(std::string key, ConfigNode value);
    bool erase(std::string_view key);

    bool operator==(const ConfigNode&) const = default;

private:
    std::variant<Scalar, Mapping, Sequence> value_;
};

/// Recursive key-wise merge when both sides are mappings (overlay wins);
/// otherwise the overlay replaces the base.
ConfigNode merge(const ConfigNode& base, const ConfigNode& overlay);

/// Parses one YAML document (block/flow collections, plain or quoted scalars,
/// comments). Anchors, aliases, custom tags and multiple documents are
/// rejected. `source` names the input in error messages.
ConfigNode parse_yaml(std::string_view text, std::string_view source = "<input>");

/// Loads `path` and resolves `_base_` (a path or list of paths relative to the
/// including file): bases are folded left to right, then the file is merged on top.
ConfigNode load_config(const std::filesystem::path& path, const FileSystem& fs);

/// Walks mappings along a dot-separated key path.
std::optional<ConfigNode> get_path(const ConfigNode& cfg, std::string_view dotted);

/// JSON text with object keys sorted.
std::string to_canonical_json(const ConfigNode& cfg, int indent = 2);

}  // namespace benchkit::config
