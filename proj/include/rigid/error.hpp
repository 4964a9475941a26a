#pragma once

#include <stdexcept>
#include <string>

namespace rigid {

enum class ErrorKind {
    Syntax,
    Domain,
    OutsideSupport,
    TrackConflict,
    AppMismatch,
    MalformedShape,
    NotARedex,
    Budget,
    InvalidInterface,
    ChoiceMismatch,
    BrotherChain,
    Internal,
};

const char* error_kind_name(ErrorKind k);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& msg, std::string where = {})
        : std::runtime_error(msg), kind_(kind), where_(std::move(where)) {}

    ErrorKind kind() const { return kind_; }
    const std::string& where() const { return where_; }

private:
    ErrorKind kind_;
    std::string where_;
};

}  // namespace rigid
