#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace drgkit {

// Failure kinds, split into two groups: problems with the input or the
// requested model (rejected data, unsupported requests) and numerical
// breakdowns inside an otherwise valid computation.  The CLI maps the
// first group to exit code 2 and the second to exit code 3.
enum class errc {
  parse_error,
  self_loop,
  duplicate_edge,
  vertex_out_of_range,
  size_cap,
  disconnected,
  diameter_too_small,
  not_distance_regular,
  exact_mode_unsupported,
  oracle_cap_exceeded,
  zero_vector,
  bad_argument,

  degenerate_dual_eigenvalues,
  negative_krein,
  orthogonality_violation,
  irreducibility_not_certified,
  numeric_failure,
};

inline bool is_input_error(errc c) {
  switch (c) {
    case errc::parse_error:
    case errc::self_loop:
    case errc::duplicate_edge:
    case errc::vertex_out_of_range:
    case errc::size_cap:
    case errc::disconnected:
    case errc::diameter_too_small:
    case errc::not_distance_regular:
    case errc::exact_mode_unsupported:
    case errc::oracle_cap_exceeded:
    case errc::zero_vector:
    case errc::bad_argument:
      return true;
    default:
      return false;
  }
}

inline const char* errc_name(errc c) {
  switch (c) {
    case errc::parse_error: return "parse_error";
    case errc::self_loop: return "self_loop";
    case errc::duplicate_edge: return "duplicate_edge";
    case errc::vertex_out_of_range: return "vertex_out_of_range";
    case errc::size_cap: return "size_cap";
    case errc::disconnected: return "disconnected";
    case errc::diameter_too_small: return "diameter_too_small";
    case errc::not_distance_regular: return "not_distance_regular";
    case errc::exact_mode_unsupported: return "exact_mode_unsupported";
    case errc::oracle_cap_exceeded: return "oracle_cap_exceeded";
    case errc::zero_vector: return "zero_vector";
    case errc::bad_argument: return "bad_argument";
    case errc::degenerate_dual_eigenvalues: return "degenerate_dual_eigenvalues";
    case errc::negative_krein: return "negative_krein";
    case errc::orthogonality_violation: return "orthogonality_violation";
    case errc::irreducibility_not_certified: return "irreducibility_not_certified";
    case errc::numeric_failure: return "numeric_failure";
  }
  return "unknown";
}

class error : public std::runtime_error {
 public:
  error(errc kind, std::string msg)
      : std::runtime_error(std::move(msg)), kind_(kind) {}
  errc kind() const noexcept { return kind_; }

 private:
  errc kind_;
};

[[noreturn]] inline void fail(errc kind, const std::string& msg) {
  throw error(kind, std::string(errc_name(kind)) + ": " + msg);
}

// Witness for a regularity violation: the same (h,i,j) triple counted at two
// vertex pairs lying at equal distance h gave different counts.
struct regularity_witness {
  int h = 0, i = 0, j = 0;
  int x1 = 0, y1 = 0;
  long count1 = 0;
  int x2 = 0, y2 = 0;
  long count2 = 0;
};

class not_drg_error : public error {
 public:
  not_drg_error(regularity_witness w, std::string msg)
      : error(errc::not_distance_regular, std::move(msg)), witness_(w) {}
  const regularity_witness& witness() const noexcept { return witness_; }

 private:
  regularity_witness witness_;
};

}  // namespace drgkit
