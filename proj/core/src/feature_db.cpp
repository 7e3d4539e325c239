#include <bit>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "eulercs/error.hpp"
#include "eulercs/imaging.hpp"
#include "eulercs/matrix_io.hpp"

namespace eulercs {

namespace {

constexpr char kMagic[4] = {'E', 'S', 'F', 'D'};
constexpr std::uint32_t kVersion = 1;

void put_u64(std::ostream& out, std::uint64_t v) {
  char bytes[8];
  for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((v >> (8 * i)) & 0xFFU);
  out.write(bytes, 8);
}

void put_u32(std::ostream& out, std::uint32_t v) {
  char bytes[4];
  for (int i = 0; i < 4; ++i) bytes[i] = static_cast<char>((v >> (8 * i)) & 0xFFU);
  out.write(bytes, 4);
}

std::uint64_t get_u64(std::istream& in) {
  unsigned char bytes[8];
  if (!in.read(reinterpret_cast<char*>(bytes), 8)) throw Error(Errc::ParseError, "feature blocks truncated");
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | bytes[i];
  return v;
}

std::uint32_t get_u32(std::istream& in) {
  unsigned char bytes[4];
  if (!in.read(reinterpret_cast<char*>(bytes), 4)) throw Error(Errc::ParseError, "feature blocks truncated");
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | bytes[i];
  return v;
}

std::string hex64(std::uint64_t v) {
  std::ostringstream s;
  s << std::hex << std::setw(16) << std::setfill('0') << v;
  return s.str();
}

}  // namespace

FeatureDB::FeatureDB(std::size_t edge, std::size_t levels, std::string matrix_provenance,
                     std::uint64_t matrix_hash)
    : edge_(edge), levels_(levels), provenance_(std::move(matrix_provenance)), hash_(matrix_hash) {}

void FeatureDB::add(FeatureEntry entry) {
  const auto len = static_cast<std::size_t>(entry.feature.size());
  if (entries_.empty()) {
    length_ = len;
  } else if (len != length_) {
    throw Error(Errc::ShapeError, "feature of '" + entry.id + "' has length " + std::to_string(len) +
                                      ", database uses " + std::to_string(length_));
  }
  for (const auto& e : entries_) {
    if (e.id == entry.id) throw Error(Errc::InvalidInput, "duplicate image id '" + entry.id + "'");
  }
  entries_.push_back(std::move(entry));
}

std::map<std::string, std::string> FeatureDB::labels() const {
  std::map<std::string, std::string> out;
  for (const auto& e : entries_) out[e.id] = e.label;
  return out;
}

void FeatureDB::save(const std::string& manifest_path, const std::string& blocks_path) const {
  std::ofstream manifest(manifest_path, std::ios::binary);
  if (!manifest) throw Error(Errc::IoError, "cannot write " + manifest_path);
  manifest << "# eulercs-featuredb v1 edge=" << edge_ << " levels=" << levels_ << " hash=" << hex64(hash_)
           << " matrix=" << provenance_ << '\n';
  for (const auto& e : entries_) manifest << e.id << '\t' << e.label << '\t' << e.path << '\n';

  std::ofstream blocks(blocks_path, std::ios::binary);
  if (!blocks) throw Error(Errc::IoError, "cannot write " + blocks_path);
  blocks.write(kMagic, 4);
  put_u32(blocks, kVersion);
  put_u64(blocks, entries_.size());
  put_u64(blocks, length_);
  put_u64(blocks, hash_);
  for (const auto& e : entries_) {
    for (Eigen::Index i = 0; i < e.feature.size(); ++i) put_u64(blocks, std::bit_cast<std::uint64_t>(e.feature(i)));
  }
}

FeatureDB FeatureDB::load(const std::string& manifest_path, const std::string& blocks_path) {
  std::ifstream manifest(manifest_path);
  if (!manifest) throw Error(Errc::IoError, "cannot open " + manifest_path);
  std::string line;
  if (!std::getline(manifest, line) || line.rfind("# eulercs-featuredb v1 ", 0) != 0) {
    throw Error(Errc::ParseError, "line 1: not an eulercs feature manifest");
  }
  std::size_t edge = 0, levels = 0;
  std::uint64_t hash = 0;
  std::string provenance;
  {
    std::istringstream header(line.substr(std::string("# eulercs-featuredb v1 ").size()));
    std::string tok;
    while (header >> tok) {
      if (tok.rfind("edge=", 0) == 0) {
        edge = std::stoul(tok.substr(5));
      } else if (tok.rfind("levels=", 0) == 0) {
        levels = std::stoul(tok.substr(7));
      } else if (tok.rfind("hash=", 0) == 0) {
        hash = std::stoull(tok.substr(5), nullptr, 16);
      } else if (tok.rfind("matrix=", 0) == 0) {
        std::string rest;
        std::getline(header, rest);
        provenance = tok.substr(7) + rest;
        break;
      }
    }
  }
  FeatureDB db(edge, levels, provenance, hash);

  std::ifstream blocks(blocks_path, std::ios::binary);
  if (!blocks) throw Error(Errc::IoError, "cannot open " + blocks_path);
  char magic[4];
  if (!blocks.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0) {
    throw Error(Errc::ParseError, blocks_path + ": bad feature block magic");
  }
  if (get_u32(blocks) != kVersion) throw Error(Errc::ParseError, blocks_path + ": unsupported version");
  const std::uint64_t count = get_u64(blocks);
  const std::uint64_t length = get_u64(blocks);
  const std::uint64_t block_hash = get_u64(blocks);
  if (block_hash != hash) throw Error(Errc::ParseError, "manifest and feature blocks disagree on matrix hash");

  std::size_t line_no = 1;
  while (std::getline(manifest, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream row(line);
    FeatureEntry e;
    if (!std::getline(row, e.id, '\t') || !std::getline(row, e.label, '\t')) {
      throw Error(Errc::ParseError, "line " + std::to_string(line_no) + ": expected id<TAB>class<TAB>path");
    }
    std::getline(row, e.path);
    e.feature.resize(static_cast<Eigen::Index>(length));
    for (std::uint64_t i = 0; i < length; ++i) {
      e.feature(static_cast<Eigen::Index>(i)) = std::bit_cast<double>(get_u64(blocks));
    }
    db.add(std::move(e));
  }
  if (db.size() != count) {
    throw Error(Errc::ParseError, "manifest lists " + std::to_string(db.size()) + " images, blocks hold " +
                                      std::to_string(count));
  }
  return db;
}

std::uint64_t matrix_fingerprint(const SensingMatrix& matrix) {
  std::ostringstream text;
  write_esm(text, matrix);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char c : text.str()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace eulercs
