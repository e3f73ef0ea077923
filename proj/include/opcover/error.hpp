#ifndef OPCOVER_ERROR_HPP
#define OPCOVER_ERROR_HPP

#include <stdexcept>
#include <string>

namespace opcover {

enum class ErrorKind {
  dimension_mismatch,
  not_hermitian,
  not_psd,
  domain,
  size_overflow,
  infeasible,
  budget_exhausted,
  invalid_argument,
  bound_violated,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::dimension_mismatch: return "dimension_mismatch";
    case ErrorKind::not_hermitian: return "not_hermitian";
    case ErrorKind::not_psd: return "not_psd";
    case ErrorKind::domain: return "domain";
    case ErrorKind::size_overflow: return "size_overflow";
    case ErrorKind::infeasible: return "infeasible";
    case ErrorKind::budget_exhausted: return "budget_exhausted";
    case ErrorKind::invalid_argument: return "invalid_argument";
    case ErrorKind::bound_violated: return "bound_violated";
  }
  return "unknown";
}

/// Every failure raised by the library carries a machine-readable kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline void require(bool condition, ErrorKind kind, const std::string& what) {
  if (!condition) throw Error(kind, what);
}

}  // namespace opcover

#endif  // OPCOVER_ERROR_HPP
