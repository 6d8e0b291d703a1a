#include "benchkit/config.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "json.hpp"

#include "benchkit/error.hpp"

namespace benchkit::config {

namespace fs = std::filesystem;

const ConfigNode* ConfigNode::find(std::string_view key) const {
    if (!is_mapping()) {
        return nullptr;
    }
    for (const auto& [k, v] : as_mapping()) {
        if (k == key) {
            return &v;
        }
    }
    return nullptr;
}

void ConfigNode::set(std::string key, ConfigNode value) {
    auto& m = as_mapping();
    for (auto& [k, v] : m) {
        if (k == key) {
            v = std::move(value);
            return;
        }
    }
    m.emplace_back(std::move(key), std::move(value));
}

bool ConfigNode::erase(std::string_view key) {
    auto& m = as_mapping();
    auto it = std::find_if(m.begin(), m.end(), [&](const auto& kv) { return kv.first == key; });
    if (it == m.end()) {
        return false;
    }
    m.erase(it);
    return true;
}

ConfigNode merge(const ConfigNode& base, const ConfigNode& overlay) {
    if (!base.is_mapping() || !overlay.is_mapping()) {
        return overlay;
    }
    ConfigNode result = base;
    for (const auto& [key, value] : overlay.as_mapping()) {
        if (const auto* existing = result.find(key)) {
            result.set(key, merge(*existing, value));
        } else {
            result.set(key, value);
        }
    }
    return result;
}

std::optional<ConfigNode> get_path(const ConfigNode& cfg, std::string_view dotted) {
    const ConfigNode* node = &cfg;
    std::size_t pos = 0;
    while (true) {
        const auto dot = dotted.find('.', pos);
        const auto key = dotted.substr(pos, dot == std::string_view::npos ? std::string_view::npos : dot - pos);
        node = node->find(key);
        if (node == nullptr) {
            return std::nullopt;
        }
        if (dot == std::string_view::npos) {
            return *node;
        }
        pos = dot + 1;
    }
}

namespace {

constexpr std::string_view kBaseKey = "_base_";

void reject_nested_base(const ConfigNode& node, const std::string& where, const std::string& source) {
    if (node.is_mapping()) {
        for (const auto& [k, v] : node.as_mapping()) {
            if (k == kBaseKey) {
                throw ValidationError(source + ": '_base_' is only allowed at the top level (found under '" + where +
                                      "')");
            }
            reject_nested_base(v, where.empty() ? k : where + "." + k, source);
        }
    } else if (node.is_sequence()) {
        const auto& seq = node.as_sequence();
        for (std::size_t i = 0; i < seq.size(); ++i) {
            reject_nested_base(seq[i], where + "[" + std::to_string(i) + "]", source);
        }
    }
}

std::vector<std::string> base_list(const ConfigNode& value, const std::string& source) {
    auto as_path = [&](const ConfigNode& n) {
        if (!n.is_scalar() || !std::holds_alternative<std::string>(n.as_scalar())) {
            throw ValidationError(source + ": '_base_' entries must be strings");
        }
        return std::get<std::string>(n.as_scalar());
    };
    std::vector<std::string> out;
    if (value.is_sequence()) {
        for (const auto& n : value.as_sequence()) {
            out.push_back(as_path(n));
        }
    } else {
        out.push_back(as_path(value));
    }
    return out;
}

ConfigNode resolve(const fs::path& path, const FileSystem& fs, std::vector<fs::path>& chain) {
    const auto canonical = fs.canonical(path);
    if (auto it = std::find(chain.begin(), chain.end(), canonical); it != chain.end()) {
        std::string cycle;
        for (; it != chain.end(); ++it) {
            cycle += it->generic_string() + " -> ";
        }
        throw ValidationError("inheritance cycle: " + cycle + canonical.generic_string());
    }
    if (!fs.exists(canonical)) {
        throw IoError("config file not found: " + canonical.generic_string());
    }
    const auto source = canonical.generic_string();
    ConfigNode raw = parse_yaml(fs.read_file(canonical), source);
    if (raw.is_scalar() && std::holds_alternative<Null>(raw.as_scalar())) {
        raw = ConfigNode::mapping();
    }
    if (raw.is_mapping()) {
        for (const auto& [k, v] : raw.as_mapping()) {
            if (k != kBaseKey) {
                reject_nested_base(v, k, source);
            }
        }
    } else {
        reject_nested_base(raw, "", source);
    }
    const ConfigNode* base = raw.find(kBaseKey);
    if (base == nullptr) {
        return raw;
    }

    chain.push_back(canonical);
    ConfigNode folded = ConfigNode::mapping();
    for (const auto& rel : base_list(*base, source)) {
        folded = merge(folded, resolve(canonical.parent_path() / rel, fs, chain));
    }
    chain.pop_back();

    raw.erase(kBaseKey);
    return merge(folded, raw);
}

}  // namespace

ConfigNode load_config(const fs::path& path, const FileSystem& fs) {
    std::vector<fs::path> chain;
    return resolve(path, fs, chain);
}

namespace {

nlohmann::json to_json(const ConfigNode& node) {
    if (node.is_mapping()) {
        auto obj = nlohmann::json::object();
        for (const auto& [k, v] : node.as_mapping()) {
            obj[k] = to_json(v);
        }
        return obj;
    }
    if (node.is_sequence()) {
        auto arr = nlohmann::json::array();
        for (const auto& v : node.as_sequence()) {
            arr.push_back(to_json(v));
        }
        return arr;
    }
    return std::visit(
        [](const auto& v) -> nlohmann::json {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Null>) {
                return nullptr;
            } else if constexpr (std::is_same_v<T, double>) {
                // JSON has no inf/nan literals.
                if (!std::isfinite(v)) {
                    return std::isnan(v) ? ".nan" : (v > 0 ? ".inf" : "-.inf");
                }
                return v;
            } else {
                return v;
            }
        },
        node.as_scalar());
}

}  // namespace

std::string to_canonical_json(const ConfigNode& cfg, int indent) {
    return to_json(cfg).dump(indent);
}

}  // namespace benchkit::config
