#ifndef CLASSFORGE_ERRORS_HPP
#define CLASSFORGE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace classforge {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ZeroInput : Error {
    ZeroInput() : Error("input must be nonzero") {}
};

struct IncompatibleCongruence : Error {
    explicit IncompatibleCongruence(const std::string& what) : Error(what) {}
};

struct BadModulus : Error {
    explicit BadModulus(const std::string& what) : Error(what) {}
};

struct NotImaginary : Error {
    explicit NotImaginary(const std::string& what) : Error(what) {}
};

struct BadN : Error {
    explicit BadN(const std::string& what) : Error(what) {}
};

struct ScanExhausted : Error {
    explicit ScanExhausted(const std::string& what) : Error(what) {}
};

struct BadDiscriminant : Error {
    explicit BadDiscriminant(const std::string& what) : Error(what) {}
};

struct MismatchedDiscriminant : Error {
    explicit MismatchedDiscriminant(const std::string& what) : Error(what) {}
};

struct SquareDiscriminant : Error {
    explicit SquareDiscriminant(const std::string& what) : Error(what) {}
};

struct BudgetExceeded : Error {
    explicit BudgetExceeded(const std::string& what) : Error(what) {}
};

} // namespace classforge

#endif
