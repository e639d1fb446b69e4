#include "ycl/errors.hpp"

namespace ycl {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::config_invalid: return "config_invalid";
    case ErrorCode::grid_mismatch: return "grid_mismatch";
    case ErrorCode::singularity: return "singularity";
    case ErrorCode::not_an_insulator: return "not_an_insulator";
    case ErrorCode::metallic_configuration: return "metallic_configuration";
    case ErrorCode::degenerate_fermi_level: return "degenerate_fermi_level";
    case ErrorCode::field_too_large: return "field_too_large";
    case ErrorCode::nu_too_large: return "nu_too_large";
    case ErrorCode::budget_exceeded: return "budget_exceeded";
    case ErrorCode::ill_conditioned: return "ill_conditioned";
    case ErrorCode::krylov_stagnation: return "krylov_stagnation";
    case ErrorCode::scf_not_converged: return "scf_not_converged";
    case ErrorCode::io_error: return "io_error";
  }
  return "unknown";
}

}  // namespace ycl
