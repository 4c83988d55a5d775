#pragma once

#include <stdexcept>
#include <string>

namespace rnla {

// Library errors carry a short machine-checkable code ("shape",
// "rank-deficient", ...) plus a human-readable message.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(code + ": " + message), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

inline void require(bool cond, const char* code, const std::string& message) {
    if (!cond) throw Error(code, message);
}

}  // namespace rnla
