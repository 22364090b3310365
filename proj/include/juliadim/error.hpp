#pragma once

#include <stdexcept>
#include <string>

namespace juliadim {

enum class ErrorKind {
    AMBIGUOUS_BRANCH,
    NO_CONVERGENCE,
    LEVEL_EXCEEDED,
    OUT_OF_DOMAIN,
    POLE,
    BRANCH_CUT,
    WRONG_BRANCH,
    BRACKET_FAILURE,
    TOLERANCE_NOT_MET,
    INVALID_DIMENSION,
    NO_SIGN_CHANGE,
    PARSE_ERROR,
    IO_ERROR,
};

const char* to_string(ErrorKind k);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace juliadim
