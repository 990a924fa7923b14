#pragma once

#include <stdexcept>
#include <string>

namespace sessile {

enum class Errc {
  invalid_input,
  degenerate_point,
  zero_direction,
  dimension_unsupported,
  omega_out_of_range,
  omega_out_of_graph_range,
  index_out_of_range,
  empty_slice,
  empty_base,
  sigma_out_of_range,
  no_bracket,
  hypothesis_violated,
  degenerate_radius,
  stalled_inversion,
  out_of_range,
  non_convergence,
};

const char* errc_name(Errc e);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace sessile
