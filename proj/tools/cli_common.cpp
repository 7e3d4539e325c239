#include "cli_common.hpp"

#include <charconv>
#include <iostream>

#include "eulercs/construct.hpp"
#include "eulercs/error.hpp"
#include "eulercs/euler.hpp"
#include "eulercs/matrix_io.hpp"

namespace eulercs::cli {

std::vector<std::uint32_t> parse_uints(const std::string& text, std::size_t count, const std::string& flag) {
  std::vector<std::uint32_t> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    std::uint32_t v = 0;
    const char* first = text.data() + pos;
    const char* last = text.data() + comma;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || first == last) {
      throw Error(Errc::InvalidInput, flag + " expects comma-separated non-negative integers, got '" + text + "'");
    }
    out.push_back(v);
    pos = comma + 1;
  }
  if (count != 0 && out.size() != count) {
    throw Error(Errc::InvalidInput, flag + " expects " + std::to_string(count) + " values, got '" + text + "'");
  }
  return out;
}

RunManifest manifest_for(const CLI::App& sub, const std::string& name) {
  RunManifest m;
  m.subcommand = name;
  for (const CLI::Option* opt : sub.get_options()) {
    if (opt->count() == 0 || opt->get_name() == "--help") continue;
    std::string value;
    for (const auto& r : opt->results()) {
      if (!value.empty()) value += ',';
      value += r;
    }
    std::string key = opt->get_name();
    key.erase(0, key.find_first_not_of('-'));
    m.flags.emplace_back(key, value);
  }
  return m;
}

void write_manifest(RunManifest manifest, const std::string& artifact, const Globals& globals,
                    std::chrono::steady_clock::time_point start) {
  if (globals.timing) {
    manifest.wall_clock_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
  save_json(artifact + ".manifest.json", to_json(manifest));
}

SensingMatrix matrix_from_flags(const std::string& path, const std::string& index) {
  if (!path.empty()) return load_esm(path);
  const auto nk = parse_uints(index, 2, "--index");
  return build_binary_matrix(euler_square(nk[0], nk[1]));
}

void note(const std::string& line) { std::cerr << line << '\n'; }

}  // namespace eulercs::cli
