#include "uaec/enumerate.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstring>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <thread>

#include "uaec/errors.hpp"
#include "uaec/hash.hpp"

namespace uaec {

namespace {

RunRecord make_record(const Bits& prefix, const ExecOutcome& out) {
  return RunRecord{prefix, out.status, out.output, out.emission_profile};
}

// Depth-first expansion of one checkpointed path to completion.
// Fork order is opcode value order; the final sort makes it irrelevant.
void expand_all(Interp machine, Bits prefix, std::vector<RunRecord>& sink,
                std::atomic<std::size_t>& total, std::size_t max_records) {
  struct Node {
    Interp m;
    Bits p;
  };
  std::vector<Node> stack;
  stack.push_back({std::move(machine), std::move(prefix)});
  while (!stack.empty()) {
    Node node = std::move(stack.back());
    stack.pop_back();
    if (node.m.advance() == Interp::Step::Done) {
      if (total.fetch_add(1, std::memory_order_relaxed) + 1 > max_records)
        fail(Errc::resource_budget, "record ceiling exceeded");
      sink.push_back(make_record(node.p, node.m.outcome()));
      continue;
    }
    for (int v = 7; v >= 0; --v) {
      Node child{node.m, node.p};
      child.m.supply((v >> 2) & 1, (v >> 1) & 1, v & 1);
      child.p.push_back((v & 4) ? '1' : '0');
      child.p.push_back((v & 2) ? '1' : '0');
      child.p.push_back((v & 1) ? '1' : '0');
      stack.push_back(std::move(child));
    }
  }
}

void finalize(RunSet& rs) {
  std::sort(rs.records.begin(), rs.records.end(),
            [](const RunRecord& a, const RunRecord& b) {
              return a.consumed_prefix < b.consumed_prefix;
            });
}

}  // namespace

RunSet explore(const MachineConfig& config, const ExploreOptions& opts) {
  config.validate();
  if (opts.threads < 1) fail(Errc::domain, "threads must be >= 1");

  RunSet rs;
  rs.config = config;
  std::atomic<std::size_t> total{0};

  // Split work at a fixed prefix depth into independent subtrees; paths
  // that terminate above the split are collected directly.
  const std::uint32_t split_bits =
      std::min<std::uint32_t>(6, (config.depth_cap / 3) * 3);

  struct Frontier {
    Interp m;
    Bits p;
  };
  std::vector<Frontier> frontier;
  std::vector<RunRecord> shallow;

  {
    std::vector<Frontier> stack;
    stack.push_back({Interp(config), Bits{}});
    while (!stack.empty()) {
      Frontier node = std::move(stack.back());
      stack.pop_back();
      if (node.m.advance() == Interp::Step::Done) {
        if (total.fetch_add(1, std::memory_order_relaxed) + 1 > opts.max_records)
          fail(Errc::resource_budget, "record ceiling exceeded");
        shallow.push_back(make_record(node.p, node.m.outcome()));
        continue;
      }
      if (node.p.size() >= split_bits) {
        frontier.push_back(std::move(node));
        continue;
      }
      for (int v = 7; v >= 0; --v) {
        Frontier child{node.m, node.p};
        child.m.supply((v >> 2) & 1, (v >> 1) & 1, v & 1);
        child.p.push_back((v & 4) ? '1' : '0');
        child.p.push_back((v & 2) ? '1' : '0');
        child.p.push_back((v & 1) ? '1' : '0');
        stack.push_back(std::move(child));
      }
    }
  }

  std::vector<std::vector<RunRecord>> results(frontier.size());
  if (opts.threads == 1 || frontier.size() <= 1) {
    for (std::size_t i = 0; i < frontier.size(); ++i)
      expand_all(std::move(frontier[i].m), std::move(frontier[i].p), results[i],
                 total, opts.max_records);
  } else {
    std::atomic<std::size_t> next{0};
    std::mutex err_mu;
    std::exception_ptr err;
    auto worker = [&]() {
      try {
        while (true) {
          std::size_t i = next.fetch_add(1);
          if (i >= frontier.size()) return;
          expand_all(std::move(frontier[i].m), std::move(frontier[i].p),
                     results[i], total, opts.max_records);
        }
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mu);
        if (!err) err = std::current_exception();
      }
    };
    std::vector<std::thread> pool;
    int n = std::min<int>(opts.threads, static_cast<int>(frontier.size()));
    pool.reserve(static_cast<std::size_t>(n));
    for (int t = 0; t < n; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
  }

  rs.records = std::move(shallow);
  for (auto& part : results)
    rs.records.insert(rs.records.end(), std::make_move_iterator(part.begin()),
                      std::make_move_iterator(part.end()));
  finalize(rs);
  return rs;
}

RunSet explore_naive(const MachineConfig& config) {
  config.validate();
  if (config.depth_cap > 24)
    fail(Errc::resource_budget, "explore_naive is limited to depth_cap <= 24");

  RunSet rs;
  rs.config = config;
  std::map<Bits, RunRecord> by_prefix;
  const std::uint64_t n = std::uint64_t{1} << config.depth_cap;
  Bits program(config.depth_cap, '0');
  for (std::uint64_t i = 0; i < n; ++i) {
    for (std::uint32_t b = 0; b < config.depth_cap; ++b)
      program[b] = (i >> (config.depth_cap - 1 - b)) & 1 ? '1' : '0';
    ExecOutcome out = run_fixed(config, program);
    Bits prefix = program.substr(0, out.consumed_bits);
    auto it = by_prefix.find(prefix);
    if (it == by_prefix.end()) {
      if (by_prefix.size() >= std::size_t{1} << 24)
        fail(Errc::resource_budget, "record ceiling exceeded");
      by_prefix.emplace(prefix, make_record(prefix, out));
    }
  }
  rs.records.reserve(by_prefix.size());
  for (auto& [prefix, rec] : by_prefix) rs.records.push_back(std::move(rec));
  // std::map iterates in lexicographic key order already.
  return rs;
}

Dyadic tiling_mass(const RunSet& rs) {
  Dyadic sum;
  for (const auto& rec : rs.records)
    sum += Dyadic::pow2_neg(static_cast<int>(rec.consumed_prefix.size()));
  return sum;
}

// ---------------------------------------------------------------- cache io

namespace {

constexpr char kMagic[4] = {'U', 'A', 'E', 'C'};
constexpr std::uint32_t kFormatVersion = 1;

void put_u32(std::vector<std::uint8_t>& buf, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) buf.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_u64(std::vector<std::uint8_t>& buf, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) buf.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_varint(std::vector<std::uint8_t>& buf, std::uint64_t v) {
  while (v >= 0x80) {
    buf.push_back(static_cast<std::uint8_t>(v) | 0x80);
    v >>= 7;
  }
  buf.push_back(static_cast<std::uint8_t>(v));
}

class Reader {
 public:
  Reader(const std::uint8_t* data, std::size_t len) : data_(data), len_(len) {}

  std::size_t pos() const { return pos_; }

  const std::uint8_t* take(std::size_t n) {
    if (pos_ + n > len_) fail(Errc::cache_corrupt, "truncated cache file");
    const std::uint8_t* p = data_ + pos_;
    pos_ += n;
    return p;
  }

  std::uint32_t u32() {
    const std::uint8_t* p = take(4);
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) |
           (static_cast<std::uint32_t>(p[3]) << 24);
  }

  std::uint64_t u64() {
    const std::uint8_t* p = take(8);
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
    return v;
  }

  std::uint64_t varint() {
    std::uint64_t v = 0;
    int shift = 0;
    while (true) {
      std::uint8_t b = *take(1);
      v |= static_cast<std::uint64_t>(b & 0x7f) << shift;
      if (!(b & 0x80)) return v;
      shift += 7;
      if (shift > 63) fail(Errc::cache_corrupt, "varint overflow");
    }
  }

  Bits bit_string() {
    std::uint32_t nbits = u32();
    if (nbits > (std::uint32_t{1} << 28)) fail(Errc::cache_corrupt, "bit string too long");
    std::size_t nbytes = (nbits + 7) / 8;
    const std::uint8_t* p = take(nbytes);
    return unpack_bits(std::vector<std::uint8_t>(p, p + nbytes), nbits);
  }

 private:
  const std::uint8_t* data_;
  std::size_t len_;
  std::size_t pos_ = 0;
};

void put_bit_string(std::vector<std::uint8_t>& buf, const Bits& s) {
  put_u32(buf, static_cast<std::uint32_t>(s.size()));
  auto packed = pack_bits(s);
  buf.insert(buf.end(), packed.begin(), packed.end());
}

}  // namespace

void save_runset(const RunSet& rs, const std::filesystem::path& destination) {
  std::vector<std::uint8_t> buf;
  buf.insert(buf.end(), kMagic, kMagic + 4);
  put_u32(buf, kFormatVersion);
  put_u32(buf, rs.config.depth_cap);
  put_u32(buf, rs.config.step_cap);
  auto digest = sha256(rs.config.aux_tape.data(), rs.config.aux_tape.size());
  buf.insert(buf.end(), digest.begin(), digest.end());
  put_u32(buf, static_cast<std::uint32_t>(rs.machine_version.size()));
  buf.insert(buf.end(), rs.machine_version.begin(), rs.machine_version.end());
  put_bit_string(buf, rs.config.aux_tape);

  put_u64(buf, rs.records.size());
  for (const auto& rec : rs.records) {
    put_bit_string(buf, rec.consumed_prefix);
    buf.push_back(static_cast<std::uint8_t>(rec.status));
    put_bit_string(buf, rec.output);
    std::uint32_t prev = 0;
    for (std::size_t i = 0; i < rec.emission_profile.size(); ++i) {
      std::uint32_t v = rec.emission_profile[i];
      put_varint(buf, i == 0 ? v : v - prev);
      prev = v;
    }
  }
  put_u64(buf, fnv1a64(buf.data(), buf.size()));

  auto tmp = destination;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(Errc::io, "cannot open " + tmp.string());
    out.write(reinterpret_cast<const char*>(buf.data()),
              static_cast<std::streamsize>(buf.size()));
    if (!out) fail(Errc::io, "short write to " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, destination, ec);
  if (ec) fail(Errc::io, "rename failed: " + ec.message());
}

RunSet load_runset(const std::filesystem::path& source) {
  std::ifstream in(source, std::ios::binary);
  if (!in) fail(Errc::io, "cannot open " + source.string());
  std::vector<std::uint8_t> buf((std::istreambuf_iterator<char>(in)),
                                std::istreambuf_iterator<char>());

  if (buf.size() < 12 + 32 + 8) fail(Errc::cache_corrupt, "file too short");
  std::uint64_t stored = 0;
  for (int i = 7; i >= 0; --i) stored = (stored << 8) | buf[buf.size() - 8 + i];
  if (fnv1a64(buf.data(), buf.size() - 8) != stored)
    fail(Errc::cache_corrupt, "checksum mismatch in " + source.string());

  Reader r(buf.data(), buf.size() - 8);
  if (std::memcmp(r.take(4), kMagic, 4) != 0)
    fail(Errc::cache_corrupt, "bad magic in " + source.string());
  std::uint32_t version = r.u32();
  if (version != kFormatVersion)
    fail(Errc::cache_version,
         "format version " + std::to_string(version) + ", expected " +
             std::to_string(kFormatVersion));

  RunSet rs;
  rs.config.depth_cap = r.u32();
  rs.config.step_cap = r.u32();
  auto* stored_digest = r.take(32);
  std::uint32_t ver_len = r.u32();
  const std::uint8_t* vp = r.take(ver_len);
  rs.machine_version.assign(reinterpret_cast<const char*>(vp), ver_len);
  if (rs.machine_version != kMachineVersion)
    fail(Errc::cache_version,
         "machine version '" + rs.machine_version + "', expected '" +
             kMachineVersion + "'");
  rs.config.aux_tape = r.bit_string();
  auto digest = sha256(rs.config.aux_tape.data(), rs.config.aux_tape.size());
  if (std::memcmp(stored_digest, digest.data(), 32) != 0)
    fail(Errc::cache_corrupt, "aux digest does not match aux bits");

  std::uint64_t count = r.u64();
  rs.records.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    RunRecord rec;
    rec.consumed_prefix = r.bit_string();
    std::uint8_t status = *r.take(1);
    if (status > 3) fail(Errc::cache_corrupt, "bad status byte");
    rec.status = static_cast<RunStatus>(status);
    rec.output = r.bit_string();
    rec.emission_profile.reserve(rec.output.size());
    std::uint32_t prev = 0;
    for (std::size_t k = 0; k < rec.output.size(); ++k) {
      prev += static_cast<std::uint32_t>(r.varint());
      rec.emission_profile.push_back(prev);
    }
    rs.records.push_back(std::move(rec));
  }
  if (r.pos() != buf.size() - 8)
    fail(Errc::cache_corrupt, "trailing garbage before checksum");
  return rs;
}

std::string cache_file_name(const MachineConfig& config) {
  return std::string(kMachineVersion) + "-d" + std::to_string(config.depth_cap) +
         "-s" + std::to_string(config.step_cap) + "-" +
         sha256_hex(config.aux_tape).substr(0, 16) + ".uaec";
}

RunSetProvider::RunSetProvider(MachineConfig base, ExploreOptions opts,
                               bool allow_build)
    : base_(std::move(base)), opts_(opts), allow_build_(allow_build) {
  base_.validate();
}

void RunSetProvider::put(RunSet rs) {
  Bits key = rs.config.aux_tape;
  by_aux_[std::move(key)] = std::move(rs);
}

const RunSet& RunSetProvider::get(const Bits& aux) {
  auto it = by_aux_.find(aux);
  if (it != by_aux_.end()) return it->second;

  MachineConfig config = base_;
  config.aux_tape = aux;

  if (!cache_dir_.empty()) {
    auto path = cache_dir_ / cache_file_name(config);
    if (std::filesystem::exists(path)) {
      RunSet rs = load_runset(path);
      if (rs.config != config)
        fail(Errc::cache_corrupt, "cache file content does not match its name: " +
                                      path.string());
      return by_aux_.emplace(aux, std::move(rs)).first->second;
    }
  }

  if (!allow_build_)
    fail(Errc::io, "cache missing for aux \"" + aux +
                       "\" at depth " + std::to_string(config.depth_cap) +
                       " (cache-only mode)");

  RunSet rs = explore(config, opts_);
  if (!cache_dir_.empty()) {
    std::filesystem::create_directories(cache_dir_);
    save_runset(rs, cache_dir_ / cache_file_name(config));
  }
  return by_aux_.emplace(aux, std::move(rs)).first->second;
}

}  // namespace uaec
