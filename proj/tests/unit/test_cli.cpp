#include <filesystem>
#include <sstream>

#include "doctest.h"
#include "skewlab/cli.hpp"
#include "skewlab/constants.hpp"
#include "skewlab/rng.hpp"

using namespace skewlab;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("skewlab_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

SourceLocation error_at(const std::string& text) {
  try {
    ConfigBlock root = parse_config(text);
    if (const ConfigBlock* s = root.block("system")) build_system(*s);
    root.reject_unused();
  } catch (const ConfigError& e) {
    return e.location();
  }
  return {};
}

const char* kMinimal =
    "system {\n"
    "  base {\n"
    "    kind = rotation\n"
    "    alpha = golden\n"
    "  }\n"
    "  cocycle {\n"
    "    term {\n"
    "      freq = 1\n"
    "      amplitude = 0.5\n"
    "    }\n"
    "  }\n"
    "}\n";

struct Ran {
  int code = 0;
  std::string out, err;
};

Ran run(const std::string& command, const fs::path& cfg, const fs::path& out,
        std::optional<std::uint64_t> seed = std::nullopt) {
  std::ostringstream o, e;
  RunRequest req{command, cfg, seed, out};
  Ran r;
  r.code = run_command(req, o, e);
  r.out = o.str();
  r.err = e.str();
  return r;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("config grammar and locations") {
    ConfigBlock root = parse_config("# comment\na = 1\nb {\n  c = x, y , z  # tail\n}\n");
    CHECK(root.number("a") == 1.0);
    const ConfigBlock* b = root.block("b");
    REQUIRE(b);
    CHECK(b->path == "b");
    CHECK(b->words("c") == std::vector<std::string>{"x", "y", "z"});
    CHECK(parse_number("1/128", {}) == 1.0 / 128);
    CHECK(parse_integer("1e7", {}) == 10'000'000);
    CHECK_THROWS_AS(parse_integer("1.5", {}), ConfigError);

    auto dup = error_at("a = 1\na = 2\n");
    CHECK(dup.line == 2);
    auto open = error_at("x {\n  a = 1\n");
    CHECK(open.line == 1);
    auto stray = error_at("}\n");
    CHECK(stray.line == 1);
    auto junk = error_at("a = 1\n   what\n");
    CHECK(junk.line == 2);
    CHECK(junk.column == 4);

    std::string bad_num = kMinimal;
    bad_num.replace(bad_num.find("0.5"), 3, "zz");
    auto n = error_at(bad_num);
    CHECK(n.line == 9);
    CHECK(n.column == 19);

    std::string unknown = kMinimal;
    unknown.replace(unknown.find("      amplitude"), 0, "      colour = red\n");
    auto u = error_at(unknown);
    CHECK(u.line == 9);
    CHECK(u.column == 7);

    std::string missing = kMinimal;
    missing.replace(missing.find("    alpha = golden\n"), 19, "");
    auto m = error_at(missing);
    CHECK(m.line == 2);
  }

  TEST_CASE("minimal system builds") {
    ConfigBlock root = parse_config(kMinimal);
    SystemConfig s = build_system(*root.block("system"));
    root.reject_unused();
    CHECK(s.system.discrete());
    CHECK(s.system.base().rotation_vector()[0] == golden_rotation().turn);
    CHECK(s.start.x.dim() == 1);
    CHECK_FALSE(s.start.m.has_value());
  }

  TEST_CASE("emitted configs rebuild the shipped systems") {
    for (const auto& name : example_config_names()) {
      CAPTURE(name);
      std::string text = example_config_text(name);
      CHECK(text == example_config_text(name));
      ConfigBlock root = parse_config(text);
      SystemConfig s = build_system(*root.block("system"));
      ShippedExample ex = name == "example_zi.cfg"   ? example_zi()
                          : name == "example_pe.cfg" ? example_pe()
                          : name == "coboundary_sin.cfg" ? coboundary_sin()
                                                         : transient_fiber();
      CHECK(s.system.has_fiber() == ex.system.has_fiber());
      CHECK(s.system.perturbation_certificate() == ex.system.perturbation_certificate());
      Rng rng(3);
      for (int i = 0; i < 50; ++i) {
        Time t = ex.system.discrete() ? Time{rng.integer(-100000, 100000)} : Time{rng.uniform(-100.0, 100.0)};
        SkewPoint p = ex.start;
        for (std::size_t d = 0; d < p.x.dim(); ++d) p.x[d] = Turn(rng.next());
        CHECK(skew_act(s.system, t, p).a == skew_act(ex.system, t, p).a);
      }
    }
    std::string pe = example_config_text("example_pe.cfg");
    CHECK(pe.find("certificate = 0.02") != std::string::npos);
    CHECK(pe.find("<= 1/4") != std::string::npos);
  }

  TEST_CASE("emission writes four files, stable across runs") {
    fs::path a = scratch("emit_a"), b = scratch("emit_b");
    auto fa = emit_example_configs(a);
    auto fb = emit_example_configs(b);
    REQUIRE(fa.size() == 4);
    for (std::size_t i = 0; i < fa.size(); ++i)
      CHECK(sha256_hex(read_text_file(fa[i])) == sha256_hex(read_text_file(fb[i])));
    CHECK_THROWS_AS(emit_example_configs("/proc/skewlab_no_such_dir"), UsageError);
  }

  TEST_CASE("sha256 and atomic writes") {
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    fs::path d = scratch("atomic");
    write_file_atomic(d / "x.txt", "one");
    write_file_atomic(d / "x.txt", "two");
    CHECK(read_text_file(d / "x.txt") == "two");
    CHECK_FALSE(fs::exists(d / "x.txt.tmp"));
  }

  TEST_CASE("check-cocycle and essential-range on the ex:zi config") {
    fs::path d = scratch("zi");
    emit_example_configs(d);
    Ran c = run("check-cocycle", d / "example_zi.cfg", d / "out");
    CHECK(c.code == 0);
    std::string rep = read_text_file(d / "out" / "check_cocycle.txt");
    auto pos = rep.find("identity_residual=");
    REQUIRE(pos != std::string::npos);
    CHECK(std::stod(rep.substr(pos + 18)) < 1e-9);
    RunManifest m = read_manifest(d / "out" / "check-cocycle.manifest.json");
    CHECK(m.config_sha256 == sha256_hex(read_text_file(d / "example_zi.cfg")));
    CHECK(m.outputs.size() == 1);
    CHECK(m.outputs[0].sha256 == sha256_hex(rep));

    Ran e = run("essential-range", d / "example_zi.cfg", d / "out");
    CHECK(e.code == 0);
    CHECK(e.out.find("candidates={0}") != std::string::npos);
  }

  TEST_CASE("exit codes") {
    fs::path d = scratch("codes");
    emit_example_configs(d);
    CHECK(run("no-such-command", d / "example_zi.cfg", d / "out").code == 1);
    CHECK(run("orbit", d / "missing.cfg", d / "out").code == 1);

    // Certificate violation fails at validation, before any output.
    std::string pe = read_text_file(d / "example_pe.cfg");
    std::string big = pe;
    big.replace(big.find("      target = 0.02\n      certificate = 0.02\n"), 44, "");
    big.replace(big.find("    perturbation {\n"), 19,
                "    perturbation {\n      term {\n        freq = 1, 1\n        amplitude = 0.3\n      }\n");
    write_file_atomic(d / "bad.cfg", big);
    Ran bad = run("decompose", d / "bad.cfg", d / "bad_out");
    CHECK(bad.code == 1);
    CHECK(bad.err.find("line") != std::string::npos);
    CHECK_FALSE(fs::exists(d / "bad_out"));

    std::string unknown = pe;
    unknown.replace(unknown.find("analysis {\n"), 11, "analysis {\n  bogus {\n  }\n");
    write_file_atomic(d / "unknown.cfg", unknown);
    CHECK(run("check-cocycle", d / "unknown.cfg", d / "o").code == 1);

    // A start far outside the fiber window gives an empty set.
    std::string far = read_text_file(d / "example_zi.cfg");
    far.replace(far.find("    a = 0\n"), 10, "    a = 100\n");
    write_file_atomic(d / "far.cfg", far);
    Ran empty = run("prolongation", d / "far.cfg", d / "o");
    CHECK(empty.code == 1);
    CHECK(empty.err.find("hint:") != std::string::npos);

    // A violated expectation exits 2.
    std::string cs = read_text_file(d / "coboundary_sin.cfg");
    cs.replace(cs.find("expect = coboundary"), 19, "expect = not-coboundary");
    write_file_atomic(d / "cs.cfg", cs);
    CHECK(run("coboundary", d / "cs.cfg", d / "o").code == 2);
  }

  TEST_CASE("same config and seed give the same digests") {
    fs::path d = scratch("repro");
    emit_example_configs(d);
    for (const char* cmd : {"gap-scan", "orbit"}) {
      run(cmd, d / "example_zi.cfg", d / "a", 7);
      run(cmd, d / "example_zi.cfg", d / "b", 7);
      auto ma = read_manifest(d / "a" / (std::string(cmd) + ".manifest.json"));
      auto mb = read_manifest(d / "b" / (std::string(cmd) + ".manifest.json"));
      REQUIRE(ma.outputs.size() == mb.outputs.size());
      for (std::size_t i = 0; i < ma.outputs.size(); ++i)
        CHECK(ma.outputs[i].sha256 == mb.outputs[i].sha256);
      CHECK(ma.seed == 7);
    }
  }
}
