#pragma once

#include <stdexcept>
#include <string>

namespace denslab {

// Error taxonomy shared by all modules. The CLI maps these to exit codes.
enum class Errc {
  validation,
  horizon_exceeded,
  invalid_window,
  invalid_k,
  invalid_eta,
  not_a_covering,
  param_error,
  threshold_unmet,
  too_few_witnesses,
  insufficient_samples,
  empty_grid,
  degenerate_ratio,
  consequence_violation,
  stalled_recursion,
  io_error,
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

}  // namespace denslab
