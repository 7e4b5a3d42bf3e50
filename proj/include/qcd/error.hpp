#pragma once

#include <stdexcept>
#include <string>

namespace qcd {

enum class errc {
  not_symmetric,
  dimension_mismatch,
  not_a_quaternionic_rep,
  dependent_input,
  patch_too_large,
  zero_weight,
  real_s,
  empty_kernel,
  ill_conditioned,
  rank_mismatch,
  size_mismatch,
  vanishing_section,
  no_intertwiner,
  invalid_argument,
};

inline const char* errc_name(errc c) noexcept {
  switch (c) {
    case errc::not_symmetric: return "NotSymmetric";
    case errc::dimension_mismatch: return "DimensionMismatch";
    case errc::not_a_quaternionic_rep: return "NotAQuaternionicRep";
    case errc::dependent_input: return "DependentInput";
    case errc::patch_too_large: return "PatchTooLarge";
    case errc::zero_weight: return "ZeroWeight";
    case errc::real_s: return "RealS";
    case errc::empty_kernel: return "EmptyKernel";
    case errc::ill_conditioned: return "IllConditioned";
    case errc::rank_mismatch: return "RankMismatch";
    case errc::size_mismatch: return "SizeMismatch";
    case errc::vanishing_section: return "VanishingSection";
    case errc::no_intertwiner: return "NoIntertwiner";
    case errc::invalid_argument: return "InvalidArgument";
  }
  return "Unknown";
}

// Numerical breakdowns, as opposed to caller mistakes.
inline bool is_numerical(errc c) noexcept {
  return c == errc::ill_conditioned || c == errc::empty_kernel ||
         c == errc::vanishing_section || c == errc::no_intertwiner;
}

class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

}  // namespace qcd
