#pragma once

#include <stdexcept>
#include <string>

namespace bt {

enum class Errc {
  NonUnit,
  PrecisionExhausted,
  ZeroAtPrecision,
  CharPolyDoesNotSplit,
  NotNested,
  FlagNotAdmissible,
  NotNormalized,
  CombinatorialBlowup,
  SignatureMismatch,
  NotTrivialising,
  NotFactorable,
  DeterminantMismatch,
  ResonantResidue,
  FlagNotStable,
  SubspaceNotStable,
  NotLogarithmicAtInfinity,
  NotDiagonalizable,
  NotFound,
  CertificateInconsistent,
  BudgetExceeded,
  InvalidArgument,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
 public:
  Error(Errc code, std::string where, std::string detail);

  Errc code() const { return code_; }
  const std::string& where() const { return where_; }
  const std::string& detail() const { return detail_; }
  const char* name() const { return errc_name(code_); }

 private:
  Errc code_;
  std::string where_;
  std::string detail_;
};

[[noreturn]] void raise(Errc code, const std::string& where, const std::string& detail = {});

}  // namespace bt
