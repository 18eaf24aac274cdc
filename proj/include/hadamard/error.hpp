#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hadamard {

/// Failure categories raised by the library. Every thrown `Error` carries one.
enum class Errc {
  space_mismatch,
  base_mismatch,
  domain_error,
  no_extension,
  zero_direction,
  invalid_spec,
  unsupported_set,
  unsupported_space,
  prox_diverged,
  not_nonexpansive,
  no_zero_set,
  no_norm_bound,
  schedule_error,
  empty_tail,
  config_error,
};

constexpr std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::space_mismatch: return "SpaceMismatch";
    case Errc::base_mismatch: return "BaseMismatch";
    case Errc::domain_error: return "DomainError";
    case Errc::no_extension: return "NoExtension";
    case Errc::zero_direction: return "ZeroDirection";
    case Errc::invalid_spec: return "InvalidSpec";
    case Errc::unsupported_set: return "UnsupportedSet";
    case Errc::unsupported_space: return "UnsupportedSpace";
    case Errc::prox_diverged: return "ProxDiverged";
    case Errc::not_nonexpansive: return "NotNonexpansive";
    case Errc::no_zero_set: return "NoZeroSet";
    case Errc::no_norm_bound: return "NoNormBound";
    case Errc::schedule_error: return "ScheduleError";
    case Errc::empty_tail: return "EmptyTail";
    case Errc::config_error: return "ConfigError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace hadamard
