#ifndef JETKT_ERROR_HPP
#define JETKT_ERROR_HPP

#include <stdexcept>
#include <string>

namespace jetkt {

enum class ErrorCode {
    ContextMismatch,
    ParityMismatch,
    SignatureMismatch,
    InvalidArgument,
    NotConfluent,
    ValidationFailed,
    ComputationRejected,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

} // namespace jetkt

#endif
