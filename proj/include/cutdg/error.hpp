#pragma once

#include <stdexcept>
#include <string>

namespace cutdg {

enum class Errc {
  invalid_extent,
  invalid_count,
  interface_outside_domain,
  interface_exits_domain,
  derivative_order_exceeds_degree,
  unsupported_point_count,
  empty_sub_extent,
  inconsistent_topologies,
  zero_speed,
  singular_mass,
  solver_failure,
  slab_sweeps_more_than_one_element,
  singular_system,
  sign_condition_violated,
  line_misses_domain,
  zero_normal_speed,
  ill_posed_interface,
  asymmetric_input,
  missing_stage_records,
  non_spd_input,
  unknown_preset,
  invalid_override,
  nonwritable_output_path,
};

inline const char* errc_name(Errc e) {
  switch (e) {
    case Errc::invalid_extent: return "invalid-extent";
    case Errc::invalid_count: return "invalid-count";
    case Errc::interface_outside_domain: return "interface-outside-domain";
    case Errc::interface_exits_domain: return "interface-exits-domain";
    case Errc::derivative_order_exceeds_degree: return "derivative-order-exceeds-degree";
    case Errc::unsupported_point_count: return "unsupported-point-count";
    case Errc::empty_sub_extent: return "empty-sub-extent";
    case Errc::inconsistent_topologies: return "inconsistent-topologies";
    case Errc::zero_speed: return "zero-speed";
    case Errc::singular_mass: return "singular-mass";
    case Errc::solver_failure: return "solver-failure";
    case Errc::slab_sweeps_more_than_one_element: return "slab-sweeps-more-than-one-element";
    case Errc::singular_system: return "singular-system";
    case Errc::sign_condition_violated: return "sign-condition-violated";
    case Errc::line_misses_domain: return "line-misses-domain";
    case Errc::zero_normal_speed: return "zero-normal-speed";
    case Errc::ill_posed_interface: return "ill-posed-interface";
    case Errc::asymmetric_input: return "asymmetric-input";
    case Errc::missing_stage_records: return "missing-stage-records";
    case Errc::non_spd_input: return "non-spd-input";
    case Errc::unknown_preset: return "unknown-preset";
    case Errc::invalid_override: return "invalid-override";
    case Errc::nonwritable_output_path: return "nonwritable-output-path";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace cutdg
