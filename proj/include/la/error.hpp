#ifndef LA_ERROR_HPP
#define LA_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace la {

// Every failure in the kernel carries a stable code string ("TooManyAtoms",
// "MiddleTermMismatch", ...). The codes are part of the wire contract: the
// CLI prints them and the agent loop feeds them back to the model verbatim.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(code + ": " + message), code_(std::move(code)) {}

    const std::string& code() const { return code_; }

private:
    std::string code_;
};

// Deterministic parse failure: same input, same bytes.
class ParseError : public Error {
public:
    ParseError(std::size_t position, std::string expected, std::string found)
        : Error("ParseError", render(position, expected, found)),
          position_(position),
          expected_(std::move(expected)),
          found_(std::move(found)) {}

    std::size_t position() const { return position_; }
    const std::string& expected() const { return expected_; }
    const std::string& found() const { return found_; }

private:
    static std::string render(std::size_t pos, const std::string& expected,
                              const std::string& found) {
        return "at " + std::to_string(pos) + ": expected " + expected + ", found '" +
               found + "'";
    }

    std::size_t position_;
    std::string expected_;
    std::string found_;
};

}  // namespace la

#endif
