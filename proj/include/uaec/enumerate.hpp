#ifndef UAEC_ENUMERATE_HPP
#define UAEC_ENUMERATE_HPP

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "uaec/dyadic.hpp"
#include "uaec/machine.hpp"

namespace uaec {

// One terminated path of the demanded-bit tree. The consumed_prefix is the
// exact sequence of program bits the machine demanded; its weight under
// fair coin flips is 2^-|consumed_prefix|.
struct RunRecord {
  Bits consumed_prefix;
  RunStatus status = RunStatus::Faulted;
  Bits output;
  std::vector<std::uint32_t> emission_profile;

  bool operator==(const RunRecord&) const = default;
};

// The exhaustive set of terminated paths for one configuration. Records
// are sorted lexicographically by consumed_prefix, are pairwise
// prefix-incomparable, and tile the binary tree: their 2^-|prefix|
// weights sum to exactly one.
struct RunSet {
  MachineConfig config;
  std::string machine_version = kMachineVersion;
  std::vector<RunRecord> records;

  bool operator==(const RunSet&) const = default;
};

struct ExploreOptions {
  int threads = 1;
  // Hard ceiling on the record count; Errc::resource_budget beyond it.
  std::size_t max_records = std::size_t{1} << 24;
};

// Exhaustive exploration sharing interpreter state along each path:
// the machine is checkpointed at every fetch and forked eight ways.
// Deterministic and independent of the worker count.
RunSet explore(const MachineConfig& config, const ExploreOptions& opts = {});

// Independent oracle: runs run_fixed() on all 2^depth_cap programs and
// dedupes by consumed prefix. No state sharing by design.
RunSet explore_naive(const MachineConfig& config);

// Exact coin-flip mass of a set of records: sum of 2^-|consumed_prefix|.
Dyadic tiling_mass(const RunSet& rs);

// Cache file ("UAEC" format, version 1):
//   magic "UAEC"
//   u32   format version
//   u32   depth_cap, u32 step_cap
//   32B   SHA-256 of the aux tape bits
//   u32   machine_version length, bytes
//   u32   aux length in bits, aux bytes MSB-first
//   u64   record count, then per record:
//           u32 prefix bit length, prefix bytes MSB-first,
//           u8  status,
//           u32 output bit length, output bytes MSB-first,
//           emission profile as varints: first value, then deltas
//   u64   FNV-1a of all preceding bytes
// All integers little-endian. Writes are atomic (temp file + rename).
void save_runset(const RunSet& rs, const std::filesystem::path& destination);
RunSet load_runset(const std::filesystem::path& source);

// Canonical cache file name for a configuration:
// <machine_version>-d<depth>-s<steps>-<sha256(aux)[0:16]>.uaec
std::string cache_file_name(const MachineConfig& config);

// A family of RunSets sharing caps and differing only in aux tape.
// Conditional priors, NID and the substrate experiments all pull their
// RunSets from one of these. Optionally backed by a cache directory of
// .uaec files; optionally forbidden from exploring (cache-only mode).
class RunSetProvider {
 public:
  explicit RunSetProvider(MachineConfig base, ExploreOptions opts = {},
                          bool allow_build = true);

  // The RunSet for aux tape y, in memory after the first call.
  // Errc::io in cache-only mode when the cache file is absent.
  const RunSet& get(const Bits& aux);

  // Pre-seeds an entry (keyed by its config's aux tape).
  void put(RunSet rs);

  void set_cache_dir(const std::filesystem::path& dir) { cache_dir_ = dir; }

  const MachineConfig& base_config() const { return base_; }

 private:
  MachineConfig base_;
  ExploreOptions opts_;
  bool allow_build_;
  std::filesystem::path cache_dir_;
  std::map<Bits, RunSet> by_aux_;
};

}  // namespace uaec

#endif  // UAEC_ENUMERATE_HPP
