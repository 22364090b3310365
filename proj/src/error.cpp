#include "juliadim/error.hpp"

namespace juliadim {

const char* to_string(ErrorKind k) {
    switch (k) {
        case ErrorKind::AMBIGUOUS_BRANCH: return "AMBIGUOUS_BRANCH";
        case ErrorKind::NO_CONVERGENCE: return "NO_CONVERGENCE";
        case ErrorKind::LEVEL_EXCEEDED: return "LEVEL_EXCEEDED";
        case ErrorKind::OUT_OF_DOMAIN: return "OUT_OF_DOMAIN";
        case ErrorKind::POLE: return "POLE";
        case ErrorKind::BRANCH_CUT: return "BRANCH_CUT";
        case ErrorKind::WRONG_BRANCH: return "WRONG_BRANCH";
        case ErrorKind::BRACKET_FAILURE: return "BRACKET_FAILURE";
        case ErrorKind::TOLERANCE_NOT_MET: return "TOLERANCE_NOT_MET";
        case ErrorKind::INVALID_DIMENSION: return "INVALID_DIMENSION";
        case ErrorKind::NO_SIGN_CHANGE: return "NO_SIGN_CHANGE";
        case ErrorKind::PARSE_ERROR: return "PARSE_ERROR";
        case ErrorKind::IO_ERROR: return "IO_ERROR";
    }
    return "UNKNOWN";
}

}  // namespace juliadim
