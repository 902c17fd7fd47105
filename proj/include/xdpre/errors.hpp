#pragma once

#include <stdexcept>
#include <string>

namespace xdpre {

// Base class for every domain error raised by the toolkit.  name() returns a
// stable identifier that the CLI prints on stderr and tests match against;
// what() carries a human-readable detail message.
class Error : public std::runtime_error {
public:
    Error(std::string name, const std::string& detail)
        : std::runtime_error(name + ": " + detail), name_(std::move(name)) {}

    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

#define XDPRE_DEFINE_ERROR(cls)                                      \
    class cls : public Error {                                       \
    public:                                                          \
        explicit cls(const std::string& detail) : Error(#cls, detail) {} \
    }

// group layer
XDPRE_DEFINE_ERROR(BackendMismatch);
XDPRE_DEFINE_ERROR(EmptyLabel);
XDPRE_DEFINE_ERROR(EmptyMessage);
XDPRE_DEFINE_ERROR(DecodeError);

// policy layer
XDPRE_DEFINE_ERROR(ReservedAttribute);
XDPRE_DEFINE_ERROR(PolicyNotSatisfied);
XDPRE_DEFINE_ERROR(NotAuthorized);

// scheme layer
XDPRE_DEFINE_ERROR(DuplicateAttribute);
XDPRE_DEFINE_ERROR(UnknownAttribute);
XDPRE_DEFINE_ERROR(TargetKeyNotDual);
XDPRE_DEFINE_ERROR(KeyMismatch);
XDPRE_DEFINE_ERROR(MissingProtectionKey);
XDPRE_DEFINE_ERROR(MissingRetainedKey);
XDPRE_DEFINE_ERROR(MalformedCiphertext);
XDPRE_DEFINE_ERROR(UnsupportedMode);
XDPRE_DEFINE_ERROR(IntegrityError);

// game / bench layer
XDPRE_DEFINE_ERROR(InvalidParameter);
XDPRE_DEFINE_ERROR(LengthMismatch);

// sites layer
XDPRE_DEFINE_ERROR(DeadlineInPast);
XDPRE_DEFINE_ERROR(InvalidTransition);
XDPRE_DEFINE_ERROR(WrongActor);
XDPRE_DEFINE_ERROR(TargetUserUnknown);

#undef XDPRE_DEFINE_ERROR

// Raised by the policy parser; records the 1-based position of the offending
// token and what the parser expected there.
class ParseError : public Error {
public:
    ParseError(int line, int col, const std::string& expected)
        : Error("ParseError",
                "line " + std::to_string(line) + ", col " + std::to_string(col) +
                    ": expected " + expected),
          line_(line), col_(col), expected_(expected) {}

    int line() const noexcept { return line_; }
    int col() const noexcept { return col_; }
    const std::string& expected() const noexcept { return expected_; }

private:
    int line_;
    int col_;
    std::string expected_;
};

} // namespace xdpre
