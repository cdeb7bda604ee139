#include "bt/error.hpp"

namespace bt {

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::NonUnit: return "NonUnit";
    case Errc::PrecisionExhausted: return "PrecisionExhausted";
    case Errc::ZeroAtPrecision: return "ZeroAtPrecision";
    case Errc::CharPolyDoesNotSplit: return "CharPolyDoesNotSplit";
    case Errc::NotNested: return "NotNested";
    case Errc::FlagNotAdmissible: return "FlagNotAdmissible";
    case Errc::NotNormalized: return "NotNormalized";
    case Errc::CombinatorialBlowup: return "CombinatorialBlowup";
    case Errc::SignatureMismatch: return "SignatureMismatch";
    case Errc::NotTrivialising: return "NotTrivialising";
    case Errc::NotFactorable: return "NotFactorable";
    case Errc::DeterminantMismatch: return "DeterminantMismatch";
    case Errc::ResonantResidue: return "ResonantResidue";
    case Errc::FlagNotStable: return "FlagNotStable";
    case Errc::SubspaceNotStable: return "SubspaceNotStable";
    case Errc::NotLogarithmicAtInfinity: return "NotLogarithmicAtInfinity";
    case Errc::NotDiagonalizable: return "NotDiagonalizable";
    case Errc::NotFound: return "NotFound";
    case Errc::CertificateInconsistent: return "CertificateInconsistent";
    case Errc::BudgetExceeded: return "BudgetExceeded";
    case Errc::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

static std::string compose(Errc code, const std::string& where, const std::string& detail) {
  std::string s = errc_name(code);
  s += " at ";
  s += where;
  if (!detail.empty()) {
    s += ": ";
    s += detail;
  }
  return s;
}

Error::Error(Errc code, std::string where, std::string detail)
    : std::runtime_error(compose(code, where, detail)),
      code_(code),
      where_(std::move(where)),
      detail_(std::move(detail)) {}

void raise(Errc code, const std::string& where, const std::string& detail) {
  throw Error(code, where, detail);
}

}  // namespace bt
