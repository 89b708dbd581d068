#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace semnorm {

enum class ErrorKind {
    InvalidArgument,
    Io,
    Decode,
    Validation,
    NotFound,
};

/// Base exception for everything the library throws on purpose.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

enum class DecodeFault {
    BadMagic,
    UnsupportedVersion,
    Truncated,
    CountMismatch,
    Malformed,
};

const char* to_string(DecodeFault fault) noexcept;

/// Raised by stream readers. The offset is the byte position of the field or
/// line where decoding failed.
class DecodeError : public Error {
public:
    DecodeError(DecodeFault fault, std::uint64_t offset, const std::string& detail);

    DecodeFault fault() const noexcept { return fault_; }
    std::uint64_t offset() const noexcept { return offset_; }

private:
    DecodeFault fault_;
    std::uint64_t offset_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
    throw Error(kind, what);
}

} // namespace semnorm
