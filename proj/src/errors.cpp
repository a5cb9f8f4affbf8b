#include "uaec/errors.hpp"

namespace uaec {

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::domain: return "domain error";
    case Errc::width_mismatch: return "width mismatch";
    case Errc::zero_evidence: return "zero evidence";
    case Errc::zero_denominator: return "zero denominator";
    case Errc::unsupported_subject: return "unsupported subject";
    case Errc::zero_weight: return "zero weight";
    case Errc::infeasible: return "infeasible";
    case Errc::degenerate: return "degenerate result";
    case Errc::resource_budget: return "resource budget exceeded";
    case Errc::cache_version: return "cache version mismatch";
    case Errc::cache_corrupt: return "cache corrupt";
    case Errc::config: return "config error";
    case Errc::io: return "io error";
  }
  return "unknown error";
}

}  // namespace uaec
