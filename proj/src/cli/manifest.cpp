#include <openssl/evp.h>

#include <cstdio>
#include <fstream>

#include "json.hpp"
#include "skewlab/cli.hpp"

namespace skewlab {

std::string sha256_hex(std::string_view data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr))
    throw std::runtime_error("sha256 failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[md[i] >> 4]);
    out.push_back(hex[md[i] & 15]);
  }
  return out;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view data) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw UsageError("cannot write " + tmp.string());
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
    out.close();
    if (!out) throw UsageError("cannot write " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw UsageError("cannot rename " + tmp.string() + ": " + ec.message());
  }
}

std::string manifest_json(const RunManifest& m) {
  nlohmann::ordered_json j;
  j["command"] = m.command;
  j["tool_version"] = m.version;
  j["config_sha256"] = m.config_sha256;
  j["seed"] = m.seed;
  j["exit_code"] = m.exit_code;
  j["wall_seconds"] = m.wall_seconds;
  auto& files = j["outputs"] = nlohmann::ordered_json::array();
  for (const auto& f : m.outputs)
    files.push_back({{"file", f.name}, {"sha256", f.sha256}, {"bytes", f.bytes}});
  return j.dump(2) + "\n";
}

RunManifest read_manifest(const std::filesystem::path& path) {
  auto j = nlohmann::json::parse(read_text_file(path));
  RunManifest m;
  m.command = j.at("command").get<std::string>();
  m.version = j.at("tool_version").get<std::string>();
  m.config_sha256 = j.at("config_sha256").get<std::string>();
  m.seed = j.at("seed").get<std::uint64_t>();
  m.exit_code = j.at("exit_code").get<int>();
  m.wall_seconds = j.at("wall_seconds").get<double>();
  for (const auto& f : j.at("outputs"))
    m.outputs.push_back({f.at("file").get<std::string>(), f.at("sha256").get<std::string>(),
                         f.at("bytes").get<std::uint64_t>()});
  return m;
}

}  // namespace skewlab
