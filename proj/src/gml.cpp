#include "wanroute/gml.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdint>
#include <iterator>
#include <memory>
#include <sstream>
#include <unordered_map>
#include <variant>
#include <vector>

#include "wanroute/error.hpp"

namespace wanroute {
namespace {

struct GmlValue;
using GmlList = std::vector<std::pair<std::string, GmlValue>>;

struct GmlValue {
  std::variant<std::int64_t, double, std::string, std::unique_ptr<GmlList>> data;
  std::size_t offset = 0;

  const std::int64_t* as_int() const { return std::get_if<std::int64_t>(&data); }
  const std::string* as_string() const { return std::get_if<std::string>(&data); }
  const GmlList* as_list() const {
    auto* p = std::get_if<std::unique_ptr<GmlList>>(&data);
    return p ? p->get() : nullptr;
  }
};

class GmlReader {
 public:
  explicit GmlReader(std::string_view text) : text_(text) {}

  GmlList parse_document() {
    GmlList top = parse_list(/*nested=*/false);
    return top;
  }

 private:
  GmlList parse_list(bool nested) {
    GmlList items;
    for (;;) {
      skip_space();
      if (at_end()) {
        if (nested) throw ParseError("unbalanced brackets: missing ']'", pos_);
        return items;
      }
      if (peek() == ']') {
        if (!nested) throw ParseError("unbalanced brackets: unexpected ']'", pos_);
        ++pos_;
        return items;
      }
      std::string key = read_key();
      skip_space();
      if (at_end()) throw ParseError("missing value for key '" + key + "'", pos_);
      items.emplace_back(std::move(key), read_value());
    }
  }

  GmlValue read_value() {
    GmlValue value;
    value.offset = pos_;
    const char c = peek();
    if (c == '[') {
      ++pos_;
      value.data = std::make_unique<GmlList>(parse_list(/*nested=*/true));
    } else if (c == '"') {
      value.data = read_string();
    } else if (c == '-' || c == '+' || c == '.' || std::isdigit(static_cast<unsigned char>(c))) {
      read_number(value);
    } else {
      throw ParseError(std::string("unexpected character '") + c + "'", pos_);
    }
    return value;
  }

  std::string read_key() {
    const std::size_t start = pos_;
    const auto is_key_char = [](char ch) {
      return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_';
    };
    if (!std::isalpha(static_cast<unsigned char>(peek())) && peek() != '_') {
      throw ParseError(std::string("expected a key, found '") + peek() + "'", pos_);
    }
    while (!at_end() && is_key_char(peek())) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  std::string read_string() {
    const std::size_t start = pos_;
    ++pos_;  // opening quote
    const std::size_t close = text_.find('"', pos_);
    if (close == std::string_view::npos) throw ParseError("unterminated string", start);
    std::string out(text_.substr(pos_, close - pos_));
    pos_ = close + 1;
    return out;
  }

  void read_number(GmlValue& value) {
    const std::size_t start = pos_;
    if (peek() == '+') ++pos_;
    const std::size_t digits_start = pos_;
    bool real = false;
    while (!at_end()) {
      const char ch = peek();
      if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '-') {
        ++pos_;
      } else if (ch == '.' || ch == 'e' || ch == 'E') {
        real = true;
        ++pos_;
        if ((ch == 'e' || ch == 'E') && !at_end() && (peek() == '+' || peek() == '-')) ++pos_;
      } else {
        break;
      }
    }
    const char* first = text_.data() + digits_start;
    const char* last = text_.data() + pos_;
    if (real) {
      double d = 0;
      auto [ptr, ec] = std::from_chars(first, last, d);
      if (ec != std::errc{} || ptr != last) throw ParseError("malformed number", start);
      value.data = d;
    } else {
      std::int64_t i = 0;
      auto [ptr, ec] = std::from_chars(first, last, i);
      if (ec != std::errc{} || ptr != last) throw ParseError("malformed integer", start);
      value.data = i;
    }
  }

  void skip_space() {
    while (!at_end()) {
      const char ch = peek();
      if (std::isspace(static_cast<unsigned char>(ch))) {
        ++pos_;
      } else if (ch == '#') {
        while (!at_end() && peek() != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }

  std::string_view text_;
  std::size_t pos_ = 0;
};

const GmlValue* find_key(const GmlList& list, std::string_view key) {
  for (const auto& [k, v] : list) {
    if (k == key) return &v;
  }
  return nullptr;
}

std::int64_t require_int(const GmlList& list, std::string_view key, std::size_t owner_offset) {
  const GmlValue* v = find_key(list, key);
  if (v == nullptr) throw ParseError("missing '" + std::string(key) + "'", owner_offset);
  const auto* i = v->as_int();
  if (i == nullptr) throw ParseError("'" + std::string(key) + "' must be an integer", v->offset);
  return *i;
}

}  // namespace

Topology parse_gml(std::string_view text, std::string name) {
  const GmlList document = GmlReader(text).parse_document();
  const GmlValue* graph_value = find_key(document, "graph");
  if (graph_value == nullptr || graph_value->as_list() == nullptr) {
    throw ParseError("no 'graph [ ... ]' block", 0);
  }
  const GmlList& graph = *graph_value->as_list();

  if (name.empty()) {
    for (const char* key : {"Network", "label", "name"}) {
      const GmlValue* v = find_key(graph, key);
      if (v != nullptr && v->as_string() != nullptr) {
        name = *v->as_string();
        break;
      }
    }
  }

  std::unordered_map<std::int64_t, NodeId> dense;
  std::vector<std::string> labels;
  for (const auto& [key, value] : graph) {
    if (key != "node") continue;
    const GmlList* node = value.as_list();
    if (node == nullptr) throw ParseError("'node' must be a list", value.offset);
    const std::int64_t id = require_int(*node, "id", value.offset);
    const auto dense_id = static_cast<NodeId>(labels.size());
    if (!dense.emplace(id, dense_id).second) {
      throw ParseError("duplicate node id " + std::to_string(id), value.offset);
    }
    const GmlValue* label = find_key(*node, "label");
    if (label != nullptr && label->as_string() != nullptr) {
      labels.push_back(*label->as_string());
    } else {
      labels.push_back(std::to_string(id));
    }
  }

  std::vector<Link> links;
  for (const auto& [key, value] : graph) {
    if (key != "edge") continue;
    const GmlList* edge = value.as_list();
    if (edge == nullptr) throw ParseError("'edge' must be a list", value.offset);
    const std::int64_t source = require_int(*edge, "source", value.offset);
    const std::int64_t target = require_int(*edge, "target", value.offset);
    const auto s = dense.find(source);
    const auto t = dense.find(target);
    if (s == dense.end() || t == dense.end()) {
      const auto missing = s == dense.end() ? source : target;
      throw ParseError("edge references unknown node " + std::to_string(missing), value.offset);
    }
    links.push_back({s->second, t->second});
  }

  return Topology(std::move(name), std::move(labels), links);
}

Topology parse_gml(std::istream& in, std::string name) {
  const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  return parse_gml(std::string_view(text), std::move(name));
}

Topology parse_edge_list(std::string_view text, std::string name) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t offset = 0;
  std::size_t declared_nodes = 0;
  NodeId max_id = 0;
  bool any = false;
  std::vector<Link> links;
  while (std::getline(in, line)) {
    const std::size_t line_offset = offset;
    offset += line.size() + 1;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string first;
    if (!(fields >> first)) continue;
    if (first == "nodes") {
      if (!(fields >> declared_nodes)) throw ParseError("malformed 'nodes' line", line_offset);
      continue;
    }
    long long a = 0;
    long long b = 0;
    try {
      std::size_t used = 0;
      a = std::stoll(first, &used);
      if (used != first.size()) throw std::invalid_argument(first);
    } catch (const std::exception&) {
      throw ParseError("expected a node id, found '" + first + "'", line_offset);
    }
    if (!(fields >> b) || a < 0 || b < 0) throw ParseError("malformed link line", line_offset);
    links.push_back({static_cast<NodeId>(a), static_cast<NodeId>(b)});
    max_id = std::max({max_id, static_cast<NodeId>(a), static_cast<NodeId>(b)});
    any = true;
  }
  const std::size_t n = std::max<std::size_t>(declared_nodes, any ? max_id + 1 : 0);
  if (declared_nodes != 0 && any && max_id >= declared_nodes) {
    throw ParseError("link endpoint " + std::to_string(max_id) + " exceeds declared node count",
                     0);
  }
  std::vector<std::string> labels;
  labels.reserve(n);
  for (std::size_t i = 0; i < n; ++i) labels.push_back(std::to_string(i));
  return Topology(std::move(name), std::move(labels), links);
}

}  // namespace wanroute
