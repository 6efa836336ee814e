#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace umbra {

enum class Errc {
    NotPrime,
    FieldTooLarge,
    FieldMismatch,
    DivisionByZero,
    QthRootNotExist,
    ConstantTermObstruction,
    SyntaxError,
    UnknownSymbol,
    NotPolynomial,
    EnumerationTooLarge,
    NotDeltaOperator,
    OrderExceeded,
    ZeroToPrecision,
    DivergentAtPoint,
    InvalidArgument,
};

const char* errc_name(Errc code);

// Every failure raised by the library. `index()` carries the location the
// error refers to: a character offset for SyntaxError, the first vanishing
// S_n for NotDeltaOperator, the offending term for DivergentAtPoint.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what, std::optional<std::size_t> index = std::nullopt);

    Errc code() const noexcept { return code_; }
    std::optional<std::size_t> index() const noexcept { return index_; }

private:
    Errc code_;
    std::optional<std::size_t> index_;
};

}  // namespace umbra
