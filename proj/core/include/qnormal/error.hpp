#pragma once

#include <stdexcept>
#include <string>

namespace qnormal {

enum class Errc {
  bad_base,
  bad_length,
  empty_block,
  digit_out_of_range,
  too_long,
  out_of_range,
  unfeasible,
  degenerate_schedule,
  bad_scale,
  undefined_sequence,
  bad_config,
  internal,
};

const char* errc_name(Errc code);

/// Library error carrying a structured code alongside the message.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what);
  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] void raise(Errc code, const std::string& msg);

}  // namespace qnormal
