#ifndef UAEC_MACHINE_HPP
#define UAEC_MACHINE_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "uaec/bits.hpp"

namespace uaec {

// Version tag of the reference machine semantics. Bump on any change that
// could alter a single enumerated record; caches are keyed by it.
inline constexpr const char* kMachineVersion = "utm3-1";

// UTM-3: a binary machine with 3-bit opcodes demanded lazily from a
// coin-flip program stream.
//
//   000 HALT   stop; the only normal termination
//   001 LEFT   move work head one cell left
//   010 RIGHT  move work head one cell right
//   011 FLIP   toggle the cell under the head
//   100 OUT    emit the cell under the head to the output stream
//   101 JZ     if cell == 0, scan forward (fetching as needed, nesting
//              respected) to just past the matching JB; each opcode the
//              scan examines costs one step
//   110 JB     if no matching JZ exists among fetched opcodes: Faulted.
//              Otherwise, if cell == 1, jump to just after that JZ.
//              JB never fetches; its backward scan is free
//   111 AUX    copy the next auxiliary-tape bit into the cell and advance
//              the aux cursor; an exhausted aux tape yields 0 bits
//
// The work tape is unbounded, binary and initially all zero. Opcode bits
// are most-significant first. Fetches are atomic: three bits per opcode.
//
// Termination rules, checked in this order whenever the machine is about
// to fetch, execute or scan:
//   1. fuel: executing or scanning an opcode, or fetching a new one, with
//      steps_used == step_cap terminates with OutOfFuel;
//   2. depth: a fetch that would demand a bit beyond depth_cap terminates
//      with DepthExceeded from the main loop and with Faulted from inside
//      a JZ scan (an unmatched JZ is a fault, not an exhausted program);
//   3. a fixed-program oracle that cannot supply three more bits
//      terminates with DepthExceeded.
// An exhausted machine demands nothing, so consumed_bits never moves past
// the last complete opcode.

struct MachineConfig {
  std::uint32_t step_cap = 0;   // opcode executions (and scan examinations)
  std::uint32_t depth_cap = 0;  // maximum program bits demanded
  Bits aux_tape;                // conditioning string y; empty = unconditional

  // Throws Errc::domain on violation. depth_cap only needs to be >= 3;
  // with a cap that is not a multiple of 3 the trailing 1-2 bits are
  // simply never demandable.
  void validate() const;

  bool operator==(const MachineConfig&) const = default;
};

enum class RunStatus : std::uint8_t {
  Halted = 0,
  OutOfFuel = 1,
  DepthExceeded = 2,
  Faulted = 3,
};

const char* run_status_name(RunStatus s);

struct ExecOutcome {
  RunStatus status = RunStatus::Faulted;
  Bits output;
  std::uint32_t consumed_bits = 0;
  // consumed_bits at the moment each output bit was emitted; same length
  // as output, non-decreasing.
  std::vector<std::uint32_t> emission_profile;
  std::uint32_t steps_used = 0;

  bool operator==(const ExecOutcome&) const = default;
};

// Demand-driven program bit source: returns the next bit (0/1), or
// nullopt when it cannot answer (fixed strings replayed to their end).
using BitOracle = std::function<std::optional<int>()>;

ExecOutcome execute(const MachineConfig& config, const BitOracle& oracle);

// execute() with an oracle that replays `program`. pre: |program| <= depth_cap.
ExecOutcome run_fixed(const MachineConfig& config, const Bits& program);

// Resumable interpreter core. execute(), run_fixed() and the tree
// enumerator all drive this one implementation; there is no second
// semantics anywhere in the project.
class Interp {
 public:
  explicit Interp(const MachineConfig& config);

  enum class Step { NeedFetch, Done };

  // Runs until the machine either terminates (Done; see outcome()) or
  // needs three more program bits (NeedFetch; call supply()).
  Step advance();

  // Supplies the next opcode as three bits, most-significant first.
  void supply(int b0, int b1, int b2);

  bool done() const { return done_; }
  const ExecOutcome& outcome() const { return outcome_; }
  std::uint32_t consumed_bits() const {
    return static_cast<std::uint32_t>(ops_.size()) * 3;
  }

  // Value semantics on purpose: the enumerator forks paths by copying.

 private:
  int cell() const;
  void set_cell(int v);
  Step terminate(RunStatus s);

  std::uint32_t step_cap_;
  std::uint32_t depth_cap_;
  Bits aux_;

  std::vector<std::uint8_t> ops_;
  std::size_t pc_ = 0;
  bool scanning_ = false;
  std::size_t scan_pos_ = 0;
  int scan_depth_ = 0;

  std::vector<std::uint8_t> tape_right_;  // cells 0, 1, 2, ...
  std::vector<std::uint8_t> tape_left_;   // cells -1, -2, ...
  long long head_ = 0;
  std::size_t aux_cursor_ = 0;

  bool done_ = false;
  ExecOutcome outcome_;
};

}  // namespace uaec

#endif  // UAEC_MACHINE_HPP
