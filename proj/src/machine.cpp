#include "uaec/machine.hpp"

#include "uaec/errors.hpp"

namespace uaec {

namespace {

enum Op : std::uint8_t {
  kHalt = 0,
  kLeft = 1,
  kRight = 2,
  kFlip = 3,
  kOut = 4,
  kJz = 5,
  kJb = 6,
  kAux = 7,
};

}  // namespace

void MachineConfig::validate() const {
  if (step_cap < 1) fail(Errc::domain, "step_cap must be >= 1");
  if (depth_cap < 3) fail(Errc::domain, "depth_cap must be >= 3");
  require_bits(aux_tape, "aux_tape");
}

const char* run_status_name(RunStatus s) {
  switch (s) {
    case RunStatus::Halted: return "Halted";
    case RunStatus::OutOfFuel: return "OutOfFuel";
    case RunStatus::DepthExceeded: return "DepthExceeded";
    case RunStatus::Faulted: return "Faulted";
  }
  return "?";
}

Interp::Interp(const MachineConfig& config)
    : step_cap_(config.step_cap),
      depth_cap_(config.depth_cap),
      aux_(config.aux_tape) {
  config.validate();
}

int Interp::cell() const {
  if (head_ >= 0) {
    auto i = static_cast<std::size_t>(head_);
    return i < tape_right_.size() ? tape_right_[i] : 0;
  }
  auto i = static_cast<std::size_t>(-head_ - 1);
  return i < tape_left_.size() ? tape_left_[i] : 0;
}

void Interp::set_cell(int v) {
  auto& side = head_ >= 0 ? tape_right_ : tape_left_;
  auto i = static_cast<std::size_t>(head_ >= 0 ? head_ : -head_ - 1);
  if (i >= side.size()) side.resize(i + 1, 0);
  side[i] = static_cast<std::uint8_t>(v);
}

Interp::Step Interp::terminate(RunStatus s) {
  done_ = true;
  outcome_.status = s;
  outcome_.consumed_bits = consumed_bits();
  return Step::Done;
}

void Interp::supply(int b0, int b1, int b2) {
  ops_.push_back(static_cast<std::uint8_t>((b0 << 2) | (b1 << 1) | b2));
}

Interp::Step Interp::advance() {
  while (true) {
    if (scanning_) {
      if (scan_pos_ == ops_.size()) {
        if (outcome_.steps_used == step_cap_) return terminate(RunStatus::OutOfFuel);
        if (consumed_bits() + 3 > depth_cap_) return terminate(RunStatus::Faulted);
        return Step::NeedFetch;
      }
      if (outcome_.steps_used == step_cap_) return terminate(RunStatus::OutOfFuel);
      ++outcome_.steps_used;
      std::uint8_t op = ops_[scan_pos_];
      ++scan_pos_;
      if (op == kJz) {
        ++scan_depth_;
      } else if (op == kJb) {
        if (scan_depth_ == 0) {
          pc_ = scan_pos_;  // just past the matching JB
          scanning_ = false;
        } else {
          --scan_depth_;
        }
      }
      continue;
    }

    if (pc_ == ops_.size()) {
      if (outcome_.steps_used == step_cap_) return terminate(RunStatus::OutOfFuel);
      if (consumed_bits() + 3 > depth_cap_) return terminate(RunStatus::DepthExceeded);
      return Step::NeedFetch;
    }
    if (outcome_.steps_used == step_cap_) return terminate(RunStatus::OutOfFuel);
    ++outcome_.steps_used;

    switch (ops_[pc_]) {
      case kHalt:
        return terminate(RunStatus::Halted);
      case kLeft:
        --head_;
        ++pc_;
        break;
      case kRight:
        ++head_;
        ++pc_;
        break;
      case kFlip:
        set_cell(cell() ^ 1);
        ++pc_;
        break;
      case kOut:
        outcome_.output.push_back(cell() ? '1' : '0');
        outcome_.emission_profile.push_back(consumed_bits());
        ++pc_;
        break;
      case kJz:
        if (cell() == 0) {
          scanning_ = true;
          scan_pos_ = pc_ + 1;
          scan_depth_ = 0;
        } else {
          ++pc_;
        }
        break;
      case kJb: {
        // Backward match over fetched opcodes, nesting respected.
        int depth = 0;
        std::size_t j = pc_;
        bool matched = false;
        while (j > 0) {
          --j;
          if (ops_[j] == kJb) {
            ++depth;
          } else if (ops_[j] == kJz) {
            if (depth == 0) {
              matched = true;
              break;
            }
            --depth;
          }
        }
        if (!matched) return terminate(RunStatus::Faulted);
        if (cell() == 1)
          pc_ = j + 1;  // just after the matching JZ
        else
          ++pc_;
        break;
      }
      case kAux: {
        int bit = aux_cursor_ < aux_.size() ? (aux_[aux_cursor_] == '1') : 0;
        ++aux_cursor_;
        set_cell(bit);
        ++pc_;
        break;
      }
      default:
        return terminate(RunStatus::Faulted);  // unreachable: 3-bit opcodes
    }
  }
}

ExecOutcome execute(const MachineConfig& config, const BitOracle& oracle) {
  Interp m(config);
  while (m.advance() == Interp::Step::NeedFetch) {
    int b[3];
    bool exhausted = false;
    for (int i = 0; i < 3; ++i) {
      auto bit = oracle();
      if (!bit.has_value()) {
        exhausted = true;
        break;
      }
      if (*bit != 0 && *bit != 1) fail(Errc::domain, "oracle produced a non-bit");
      b[i] = *bit;
    }
    if (exhausted) {
      // Partial fetches never count: consumed_bits stays on the last
      // complete opcode boundary.
      ExecOutcome out = m.outcome();
      out.status = RunStatus::DepthExceeded;
      out.consumed_bits = m.consumed_bits();
      return out;
    }
    m.supply(b[0], b[1], b[2]);
  }
  return m.outcome();
}

ExecOutcome run_fixed(const MachineConfig& config, const Bits& program) {
  config.validate();
  require_bits(program, "program");
  if (program.size() > config.depth_cap)
    fail(Errc::domain, "program longer than depth_cap");
  std::size_t pos = 0;
  return execute(config, [&]() -> std::optional<int> {
    if (pos >= program.size()) return std::nullopt;
    return program[pos++] == '1' ? 1 : 0;
  });
}

}  // namespace uaec
