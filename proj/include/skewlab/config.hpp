#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "skewlab/errors.hpp"

namespace skewlab {

struct SourceLocation {
  int line = 0;
  int column = 0;
};

// Malformed or invalid config. what() reads "line L, column C: message".
class ConfigError : public UsageError {
 public:
  ConfigError(SourceLocation loc, const std::string& message);
  const SourceLocation& location() const { return loc_; }

 private:
  SourceLocation loc_;
};

struct ConfigEntry {
  std::string key;
  std::string value;
  SourceLocation key_loc;
  SourceLocation value_loc;
  mutable bool used = false;
};

// One `name { ... }` block. Lookups mark entries as used; reject_unused()
// then reports the first key or block nobody asked for.
class ConfigBlock {
 public:
  std::string name;
  std::string path;  // dotted, empty for the root
  SourceLocation loc;
  std::vector<ConfigEntry> entries;
  std::vector<ConfigBlock> blocks;

  bool has(std::string_view key) const;
  const ConfigEntry* entry(std::string_view key) const;
  // At most one block of that name; nullptr when absent.
  const ConfigBlock* block(std::string_view name) const;
  std::vector<const ConfigBlock*> all_blocks(std::string_view name) const;

  std::string word(std::string_view key) const;
  std::string word(std::string_view key, std::string fallback) const;
  double number(std::string_view key) const;
  double number(std::string_view key, double fallback) const;
  // Strictly positive number.
  double positive(std::string_view key, double fallback) const;
  std::int64_t integer(std::string_view key, std::int64_t fallback) const;
  std::uint64_t count(std::string_view key, std::uint64_t fallback) const;
  std::vector<std::string> words(std::string_view key) const;
  std::vector<double> numbers(std::string_view key) const;
  std::vector<std::int64_t> integers(std::string_view key) const;

  [[noreturn]] void fail(const std::string& message) const;
  [[noreturn]] void fail(std::string_view key, const std::string& message) const;
  void reject_unused() const;

  mutable bool used = false;

 private:
  const ConfigEntry& required(std::string_view key) const;
};

// Grammar, one statement per line, '#' starts a comment:
//   name {        opens a block
//   }             closes it
//   key = value   value runs to the end of the line
// Keys and block names use [A-Za-z0-9_-]. Duplicate keys in one block fail.
ConfigBlock parse_config(std::string_view text);

// Numbers accept decimal, exponent and p/q forms ("1/128").
double parse_number(const std::string& text, SourceLocation loc);
std::int64_t parse_integer(const std::string& text, SourceLocation loc);

// Fields of a comma separated value with their locations.
std::vector<std::pair<std::string, SourceLocation>> split_list(const ConfigEntry& e);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace skewlab
