#include "umbra/error.hpp"

namespace umbra {

const char* errc_name(Errc code) {
    switch (code) {
        case Errc::NotPrime: return "NotPrime";
        case Errc::FieldTooLarge: return "FieldTooLarge";
        case Errc::FieldMismatch: return "FieldMismatch";
        case Errc::DivisionByZero: return "DivisionByZero";
        case Errc::QthRootNotExist: return "QthRootNotExist";
        case Errc::ConstantTermObstruction: return "ConstantTermObstruction";
        case Errc::SyntaxError: return "SyntaxError";
        case Errc::UnknownSymbol: return "UnknownSymbol";
        case Errc::NotPolynomial: return "NotPolynomial";
        case Errc::EnumerationTooLarge: return "EnumerationTooLarge";
        case Errc::NotDeltaOperator: return "NotDeltaOperator";
        case Errc::OrderExceeded: return "OrderExceeded";
        case Errc::ZeroToPrecision: return "ZeroToPrecision";
        case Errc::DivergentAtPoint: return "DivergentAtPoint";
        case Errc::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

Error::Error(Errc code, const std::string& what, std::optional<std::size_t> index)
    : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code), index_(index) {}

}  // namespace umbra
