#include "sessile/error.hpp"

namespace sessile {

const char* errc_name(Errc e) {
  switch (e) {
    case Errc::invalid_input: return "InvalidInput";
    case Errc::degenerate_point: return "DegeneratePoint";
    case Errc::zero_direction: return "ZeroDirection";
    case Errc::dimension_unsupported: return "DimensionUnsupported";
    case Errc::omega_out_of_range: return "OmegaOutOfRange";
    case Errc::omega_out_of_graph_range: return "OmegaOutOfGraphRange";
    case Errc::index_out_of_range: return "IndexOutOfRange";
    case Errc::empty_slice: return "EmptySlice";
    case Errc::empty_base: return "EmptyBase";
    case Errc::sigma_out_of_range: return "SigmaOutOfRange";
    case Errc::no_bracket: return "NoBracket";
    case Errc::hypothesis_violated: return "HypothesisViolated";
    case Errc::degenerate_radius: return "DegenerateRadius";
    case Errc::stalled_inversion: return "StalledInversion";
    case Errc::out_of_range: return "OutOfRange";
    case Errc::non_convergence: return "NonConvergence";
  }
  return "Unknown";
}

}  // namespace sessile
