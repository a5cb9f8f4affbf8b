#ifndef UAEC_ERRORS_HPP
#define UAEC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace uaec {

// Every failure the library can signal. CLI exit codes group these:
// usage/config -> 1, degenerate results -> 2, I/O and cache trouble -> 3.
enum class Errc {
  domain,            // argument outside its documented domain
  width_mismatch,    // mind-state widths disagree
  zero_evidence,     // conditioning state has zero posterior evidence
  zero_denominator,  // a ratio's denominator vanished
  unsupported_subject,  // no program found for the subject within caps
  zero_weight,       // a required weight vanished (resolution check)
  infeasible,        // quantity not estimable at current caps
  degenerate,        // all terms excluded, nothing to aggregate
  resource_budget,   // enumeration exceeded its record ceiling
  cache_version,     // cache written by a different machine/format version
  cache_corrupt,     // checksum or framing failure
  config,            // experiment config invalid
  io,                // filesystem failure
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& msg)
      : std::runtime_error(std::string(errc_name(code)) + ": " + msg),
        code_(code) {}

  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& msg) {
  throw Error(code, msg);
}

}  // namespace uaec

#endif  // UAEC_ERRORS_HPP
