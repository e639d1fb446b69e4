#pragma once

#include <stdexcept>
#include <string>

namespace ycl {

// Machine-readable failure categories. The CLI maps config_invalid to exit
// code 2 and everything else to exit code 3.
enum class ErrorCode {
  config_invalid,
  grid_mismatch,
  singularity,
  not_an_insulator,
  metallic_configuration,
  degenerate_fermi_level,
  field_too_large,
  nu_too_large,
  budget_exceeded,
  ill_conditioned,
  krylov_stagnation,
  scf_not_converged,
  io_error,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace ycl
