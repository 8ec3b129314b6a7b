#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace kpa {

enum class Status { pass, fail, degenerate, unsupported };

inline const char* status_name(Status s) {
    switch (s) {
        case Status::pass: return "pass";
        case Status::fail: return "fail";
        case Status::degenerate: return "degenerate";
        case Status::unsupported: return "unsupported";
    }
    return "unknown";
}

/// Location and canonical-form residual of the first failing check.
/// Indices are 1-based in reports, matching the usual tensor notation.
struct Witness {
    std::vector<std::size_t> indices;
    std::string residual;
};

struct Verdict {
    Status status = Status::pass;
    std::optional<Witness> witness;
    std::vector<std::string> notes;

    bool passed() const { return status == Status::pass || status == Status::degenerate; }

    static Verdict ok() { return {}; }

    static Verdict failure(std::vector<std::size_t> indices, std::string residual,
                           std::string note = {}) {
        Verdict v;
        v.status = Status::fail;
        v.witness = Witness{std::move(indices), std::move(residual)};
        if (!note.empty()) v.notes.push_back(std::move(note));
        return v;
    }
};

/// Thrown by certified constructors when a structural check fails.
class CheckError : public std::runtime_error {
public:
    CheckError(std::string what, Verdict verdict)
        : std::runtime_error(std::move(what)), verdict_(std::move(verdict)) {}

    const Verdict& verdict() const { return verdict_; }

private:
    Verdict verdict_;
};

/// Thrown when named inputs are malformed or unresolved (exit code 2 territory).
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Thrown for requests outside the supported fragment (exit code 3 territory).
class UnsupportedError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace kpa
