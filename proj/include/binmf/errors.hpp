#pragma once

#include <stdexcept>
#include <string>

namespace binmf {

enum class ErrorKind {
    domain,   // value outside its admissible range
    shape,    // incompatible matrix dimensions
    bounds,   // index out of range
    config,   // invalid option combination
    numeric,  // non-finite or otherwise corrupt numeric result
    parse,    // malformed file content
    io,       // filesystem failure
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& msg) : std::runtime_error(msg), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

struct DomainError : Error {
    explicit DomainError(const std::string& msg) : Error(ErrorKind::domain, msg) {}
};
struct ShapeError : Error {
    explicit ShapeError(const std::string& msg) : Error(ErrorKind::shape, msg) {}
};
struct BoundsError : Error {
    explicit BoundsError(const std::string& msg) : Error(ErrorKind::bounds, msg) {}
};
struct ConfigError : Error {
    explicit ConfigError(const std::string& msg) : Error(ErrorKind::config, msg) {}
};
struct NumericError : Error {
    explicit NumericError(const std::string& msg) : Error(ErrorKind::numeric, msg) {}
};
struct ParseError : Error {
    explicit ParseError(const std::string& msg) : Error(ErrorKind::parse, msg) {}
};
struct IoError : Error {
    explicit IoError(const std::string& msg) : Error(ErrorKind::io, msg) {}
};

}  // namespace binmf
