#pragma once

#include <stdexcept>
#include <string>

namespace nlskt {

struct DegenerateKernel : std::runtime_error {
    explicit DegenerateKernel(const std::string& what) : std::runtime_error(what) {}
};

struct InvalidDelta : std::runtime_error {
    explicit InvalidDelta(const std::string& what) : std::runtime_error(what) {}
};

struct DegenerateState : std::runtime_error {
    explicit DegenerateState(const std::string& what) : std::runtime_error(what) {}
};

struct NoConvergence : std::runtime_error {
    explicit NoConvergence(const std::string& what) : std::runtime_error(what) {}
};

struct NonContracting : std::runtime_error {
    explicit NonContracting(const std::string& what) : std::runtime_error(what) {}
};

struct OutOfRange : std::runtime_error {
    explicit OutOfRange(const std::string& what) : std::runtime_error(what) {}
};

struct LedgerViolation : std::runtime_error {
    explicit LedgerViolation(const std::string& what) : std::runtime_error(what) {}
};

struct WindowTooLarge : std::runtime_error {
    explicit WindowTooLarge(const std::string& what) : std::runtime_error(what) {}
};

struct UnstableStep : std::runtime_error {
    explicit UnstableStep(const std::string& what) : std::runtime_error(what) {}
};

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace nlskt
