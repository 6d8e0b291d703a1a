#include <cmath>
#include <limits>
#include <optional>
#include <regex>
#include <sstream>

#include <yaml-cpp/eventhandler.h>
#include <yaml-cpp/exceptions.h>
#include <yaml-cpp/mark.h>
#include <yaml-cpp/parser.h>

#include "benchkit/config.hpp"
#include "benchkit/error.hpp"

namespace benchkit::config {

namespace {

// YAML 1.2 core schema resolution for plain scalars.
Scalar resolve_plain(const std::string& v) {
    if (v.empty() || v == "~" || v == "null" || v == "Null" || v == "NULL") {
        return Null{};
    }
    if (v == "true" || v == "True" || v == "TRUE") {
        return true;
    }
    if (v == "false" || v == "False" || v == "FALSE") {
        return false;
    }
    static const std::regex int_re("[-+]?[0-9]+");
    static const std::regex oct_re("0o[0-7]+");
    static const std::regex hex_re("0x[0-9a-fA-F]+");
    static const std::regex float_re(R"([-+]?(\.[0-9]+|[0-9]+(\.[0-9]*)?)([eE][-+]?[0-9]+)?)");
    static const std::regex inf_re(R"([-+]?\.(inf|Inf|INF))");
    static const std::regex nan_re(R"(\.(nan|NaN|NAN))");

    try {
        if (std::regex_match(v, int_re)) {
            return static_cast<std::int64_t>(std::stoll(v, nullptr, 10));
        }
        if (std::regex_match(v, oct_re)) {
            return static_cast<std::int64_t>(std::stoll(v.substr(2), nullptr, 8));
        }
        if (std::regex_match(v, hex_re)) {
            return static_cast<std::int64_t>(std::stoll(v.substr(2), nullptr, 16));
        }
    } catch (const std::out_of_range&) {
        return std::stod(v);
    }
    if (std::regex_match(v, float_re)) {
        return std::stod(v);
    }
    if (std::regex_match(v, inf_re)) {
        return v.front() == '-' ? -std::numeric_limits<double>::infinity() : std::numeric_limits<double>::infinity();
    }
    if (std::regex_match(v, nan_re)) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    return v;
}

class TreeBuilder final : public YAML::EventHandler {
public:
    explicit TreeBuilder(std::string source) : source_(std::move(source)) {}

    std::optional<ConfigNode> result;

    void OnDocumentStart(const YAML::Mark&) override {}
    void OnDocumentEnd() override {}

    void OnNull(const YAML::Mark& mark, YAML::anchor_t anchor) override {
        check_anchor(mark, anchor);
        emit(mark, ConfigNode(Scalar{Null{}}), std::nullopt);
    }

    void OnAlias(const YAML::Mark& mark, YAML::anchor_t) override {
        fail(mark, "aliases are not supported");
    }

    void OnScalar(const YAML::Mark& mark, const std::string& tag, YAML::anchor_t anchor,
                  const std::string& value) override {
        check_anchor(mark, anchor);
        emit(mark, ConfigNode(typed_scalar(mark, tag, value)), value);
    }

    void OnSequenceStart(const YAML::Mark& mark, const std::string& tag, YAML::anchor_t anchor,
                         YAML::EmitterStyle::value) override {
        check_anchor(mark, anchor);
        check_collection_tag(mark, tag);
        if (expecting_key()) {
            fail(mark, "only scalar mapping keys are supported");
        }
        stack_.push_back({ConfigNode(Sequence{}), std::nullopt, mark});
    }

    void OnSequenceEnd() override { close(); }

    void OnMapStart(const YAML::Mark& mark, const std::string& tag, YAML::anchor_t anchor,
                    YAML::EmitterStyle::value) override {
        check_anchor(mark, anchor);
        check_collection_tag(mark, tag);
        if (expecting_key()) {
            fail(mark, "only scalar mapping keys are supported");
        }
        stack_.push_back({ConfigNode::mapping(), std::nullopt, mark});
    }

    void OnMapEnd() override { close(); }

private:
    struct Frame {
        ConfigNode node;
        std::optional<std::string> pending_key;
        YAML::Mark mark;
    };

    [[noreturn]] void fail(const YAML::Mark& mark, const std::string& what) const {
        throw ParseError(source_, static_cast<std::size_t>(mark.line + 1), static_cast<std::size_t>(mark.column + 1),
                         what);
    }

    void check_anchor(const YAML::Mark& mark, YAML::anchor_t anchor) const {
        if (anchor != YAML::NullAnchor) {
            fail(mark, "anchors are not supported");
        }
    }

    void check_collection_tag(const YAML::Mark& mark, const std::string& tag) const {
        if (!tag.empty() && tag != "?" && tag != "!" && tag != "tag:yaml.org,2002:map" &&
            tag != "tag:yaml.org,2002:seq") {
            fail(mark, "unsupported tag '" + tag + "'");
        }
    }

    Scalar typed_scalar(const YAML::Mark& mark, const std::string& tag, const std::string& value) const {
        if (tag == "?") {
            return resolve_plain(value);
        }
        if (tag == "!" || tag == "tag:yaml.org,2002:str") {
            return value;
        }
        if (tag == "tag:yaml.org,2002:int" || tag == "tag:yaml.org,2002:float" || tag == "tag:yaml.org,2002:bool" ||
            tag == "tag:yaml.org,2002:null") {
            auto resolved = resolve_plain(value);
            const bool ok = (tag.ends_with("int") && std::holds_alternative<std::int64_t>(resolved)) ||
                            (tag.ends_with("float") && (std::holds_alternative<double>(resolved) ||
                                                        std::holds_alternative<std::int64_t>(resolved))) ||
                            (tag.ends_with("bool") && std::holds_alternative<bool>(resolved)) ||
                            (tag.ends_with("null") && std::holds_alternative<Null>(resolved));
            if (!ok) {
                fail(mark, "value '" + value + "' does not match tag " + tag);
            }
            if (tag.ends_with("float") && std::holds_alternative<std::int64_t>(resolved)) {
                return static_cast<double>(std::get<std::int64_t>(resolved));
            }
            return resolved;
        }
        fail(mark, "unsupported tag '" + tag + "'");
    }

    bool expecting_key() const {
        return !stack_.empty() && stack_.back().node.is_mapping() && !stack_.back().pending_key;
    }

    void emit(const YAML::Mark& mark, ConfigNode node, const std::optional<std::string>& key_text) {
        if (expecting_key()) {
            if (!key_text) {
                fail(mark, "mapping keys must be non-null scalars");
            }
            if (stack_.back().node.find(*key_text) != nullptr) {
                fail(mark, "duplicate key '" + *key_text + "'");
            }
            stack_.back().pending_key = *key_text;
            return;
        }
        attach(std::move(node));
    }

    void attach(ConfigNode node) {
        if (stack_.empty()) {
            result = std::move(node);
            return;
        }
        auto& top = stack_.back();
        if (top.node.is_mapping()) {
            top.node.as_mapping().emplace_back(std::move(*top.pending_key), std::move(node));
            top.pending_key.reset();
        } else {
            top.node.as_sequence().push_back(std::move(node));
        }
    }

    void close() {
        auto frame = std::move(stack_.back());
        stack_.pop_back();
        attach(std::move(frame.node));
    }

    std::string source_;
    std::vector<Frame> stack_;
};

}  // namespace

ConfigNode parse_yaml(std::string_view text, std::string_view source) {
    std::istringstream in{std::string(text)};
    TreeBuilder builder{std::string(source)};
    try {
        YAML::Parser parser(in);
        if (!parser.HandleNextDocument(builder)) {
            return ConfigNode(Scalar{Null{}});
        }
        TreeBuilder extra{std::string(source)};
        if (parser.HandleNextDocument(extra)) {
            throw ParseError(std::string(source) + ": multi-document streams are not supported");
        }
    } catch (const YAML::Exception& e) {
        throw ParseError(std::string(source), static_cast<std::size_t>(e.mark.line + 1),
                         static_cast<std::size_t>(e.mark.column + 1), e.msg);
    }
    return builder.result ? std::move(*builder.result) : ConfigNode(Scalar{Null{}});
}

}  // namespace benchkit::config
