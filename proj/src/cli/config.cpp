#include "skewlab/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace skewlab {

namespace {

std::string located(SourceLocation loc, const std::string& message) {
  return "line " + std::to_string(loc.line) + ", column " +
         std::to_string(loc.column) + ": " + message;
}

bool identifier(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-'))
      return false;
  return true;
}

// [begin, end) of s without surrounding blanks.
std::pair<std::size_t, std::size_t> trimmed(std::string_view s, std::size_t b,
                                            std::size_t e) {
  while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
  return {b, e};
}

double parse_plain(const std::string& text, bool& ok) {
  ok = false;
  if (text.empty()) return 0.0;
  const char* begin = text.c_str();
  char* end = nullptr;
  double v = std::strtod(begin, &end);
  ok = end == begin + text.size() && std::isfinite(v);
  return v;
}

}  // namespace

ConfigError::ConfigError(SourceLocation loc, const std::string& message)
    : UsageError(located(loc, message)), loc_(loc) {}

double parse_number(const std::string& text, SourceLocation loc) {
  bool ok = false;
  double v = parse_plain(text, ok);
  if (ok) return v;
  auto slash = text.find('/');
  if (slash != std::string::npos) {
    bool ok_p = false, ok_q = false;
    double p = parse_plain(text.substr(0, slash), ok_p);
    double q = parse_plain(text.substr(slash + 1), ok_q);
    if (ok_p && ok_q && q != 0.0) return p / q;
  }
  throw ConfigError(loc, "expected a number, got '" + text + "'");
}

std::int64_t parse_integer(const std::string& text, SourceLocation loc) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec == std::errc() && ptr == text.data() + text.size()) return v;
  bool ok = false;
  double d = parse_plain(text, ok);
  if (ok && d == std::floor(d) && std::fabs(d) <= 0x1p53) return static_cast<std::int64_t>(d);
  throw ConfigError(loc, "expected an integer, got '" + text + "'");
}

std::vector<std::pair<std::string, SourceLocation>> split_list(const ConfigEntry& e) {
  std::vector<std::pair<std::string, SourceLocation>> out;
  std::size_t start = 0;
  const std::string& v = e.value;
  while (true) {
    std::size_t comma = v.find(',', start);
    std::size_t stop = comma == std::string::npos ? v.size() : comma;
    auto [b, s] = trimmed(v, start, stop);
    SourceLocation loc{e.value_loc.line, e.value_loc.column + static_cast<int>(b)};
    if (b == s) throw ConfigError(loc, "empty list item in '" + e.key + "'");
    out.emplace_back(v.substr(b, s - b), loc);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

ConfigBlock parse_config(std::string_view text) {
  ConfigBlock root;
  root.used = true;
  root.loc = {1, 1};
  std::vector<ConfigBlock*> stack{&root};
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    ++line_no;
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    std::size_t hash = line.find('#');
    auto [b, e] = trimmed(line, 0, hash == std::string_view::npos ? line.size() : hash);
    if (b == e) continue;
    SourceLocation at{line_no, static_cast<int>(b) + 1};
    std::string_view stmt = line.substr(b, e - b);
    ConfigBlock& top = *stack.back();
    if (stmt == "}") {
      if (stack.size() == 1) throw ConfigError(at, "'}' without an open block");
      stack.pop_back();
      continue;
    }
    if (stmt.back() == '{') {
      auto [nb, ne] = trimmed(line, b, e - 1);
      std::string name(line.substr(nb, ne - nb));
      if (!identifier(name)) throw ConfigError(at, "bad block name '" + name + "'");
      ConfigBlock child;
      child.name = name;
      child.path = top.path.empty() ? name : top.path + "." + name;
      child.loc = at;
      top.blocks.push_back(std::move(child));
      stack.push_back(&top.blocks.back());
      continue;
    }
    std::size_t eq = line.find('=', b);
    if (eq == std::string_view::npos || eq >= e)
      throw ConfigError(at, "expected 'key = value', 'name {' or '}'");
    auto [kb, ke] = trimmed(line, b, eq);
    auto [vb, ve] = trimmed(line, eq + 1, e);
    ConfigEntry entry;
    entry.key = std::string(line.substr(kb, ke - kb));
    entry.key_loc = at;
    entry.value = std::string(line.substr(vb, ve - vb));
    entry.value_loc = {line_no, static_cast<int>(vb) + 1};
    if (!identifier(entry.key)) throw ConfigError(at, "bad key '" + entry.key + "'");
    if (entry.value.empty()) throw ConfigError(entry.value_loc, "missing value for '" + entry.key + "'");
    for (const auto& other : top.entries)
      if (other.key == entry.key)
        throw ConfigError(at, "duplicate key '" + entry.key + "' (first on line " +
                                  std::to_string(other.key_loc.line) + ")");
    top.entries.push_back(std::move(entry));
  }
  if (stack.size() > 1)
    throw ConfigError(stack.back()->loc, "block '" + stack.back()->path + "' is never closed");
  return root;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool ConfigBlock::has(std::string_view key) const {
  for (const auto& e : entries)
    if (e.key == key) return true;
  return false;
}

const ConfigEntry* ConfigBlock::entry(std::string_view key) const {
  for (const auto& e : entries)
    if (e.key == key) {
      e.used = true;
      return &e;
    }
  return nullptr;
}

const ConfigBlock* ConfigBlock::block(std::string_view name) const {
  auto all = all_blocks(name);
  if (all.size() > 1)
    throw ConfigError(all[1]->loc, "block '" + all[1]->path + "' given twice");
  return all.empty() ? nullptr : all.front();
}

std::vector<const ConfigBlock*> ConfigBlock::all_blocks(std::string_view name) const {
  std::vector<const ConfigBlock*> out;
  for (const auto& b : blocks)
    if (b.name == name) {
      b.used = true;
      out.push_back(&b);
    }
  return out;
}

void ConfigBlock::fail(const std::string& message) const {
  throw ConfigError(loc, (path.empty() ? std::string("config") : "block '" + path + "'") + ": " + message);
}

void ConfigBlock::fail(std::string_view key, const std::string& message) const {
  const ConfigEntry* e = entry(key);
  if (!e) fail(message);
  throw ConfigError(e->value_loc, "'" + e->key + "': " + message);
}

const ConfigEntry& ConfigBlock::required(std::string_view key) const {
  const ConfigEntry* e = entry(key);
  if (!e) fail("missing required key '" + std::string(key) + "'");
  return *e;
}

std::string ConfigBlock::word(std::string_view key) const { return required(key).value; }

std::string ConfigBlock::word(std::string_view key, std::string fallback) const {
  const ConfigEntry* e = entry(key);
  return e ? e->value : fallback;
}

double ConfigBlock::number(std::string_view key) const {
  const ConfigEntry& e = required(key);
  return parse_number(e.value, e.value_loc);
}

double ConfigBlock::number(std::string_view key, double fallback) const {
  const ConfigEntry* e = entry(key);
  return e ? parse_number(e->value, e->value_loc) : fallback;
}

double ConfigBlock::positive(std::string_view key, double fallback) const {
  double v = number(key, fallback);
  if (!(v > 0.0)) fail(key, "must be strictly positive");
  return v;
}

std::int64_t ConfigBlock::integer(std::string_view key, std::int64_t fallback) const {
  const ConfigEntry* e = entry(key);
  return e ? parse_integer(e->value, e->value_loc) : fallback;
}

std::uint64_t ConfigBlock::count(std::string_view key, std::uint64_t fallback) const {
  const ConfigEntry* e = entry(key);
  if (!e) return fallback;
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(e->value.data(), e->value.data() + e->value.size(), v);
  if (ec == std::errc() && ptr == e->value.data() + e->value.size()) return v;
  std::int64_t s = parse_integer(e->value, e->value_loc);
  if (s < 0) throw ConfigError(e->value_loc, "'" + e->key + "' must not be negative");
  return static_cast<std::uint64_t>(s);
}

std::vector<std::string> ConfigBlock::words(std::string_view key) const {
  std::vector<std::string> out;
  for (auto& [s, loc] : split_list(required(key))) out.push_back(s);
  return out;
}

std::vector<double> ConfigBlock::numbers(std::string_view key) const {
  std::vector<double> out;
  for (auto& [s, loc] : split_list(required(key))) out.push_back(parse_number(s, loc));
  return out;
}

std::vector<std::int64_t> ConfigBlock::integers(std::string_view key) const {
  std::vector<std::int64_t> out;
  for (auto& [s, loc] : split_list(required(key))) out.push_back(parse_integer(s, loc));
  return out;
}

void ConfigBlock::reject_unused() const {
  for (const auto& e : entries)
    if (!e.used)
      throw ConfigError(e.key_loc, "unknown key '" + e.key + "'" +
                                       (path.empty() ? "" : " in block '" + path + "'"));
  for (const auto& b : blocks) {
    if (!b.used) throw ConfigError(b.loc, "unknown block '" + b.path + "'");
    b.reject_unused();
  }
}

}  // namespace skewlab
