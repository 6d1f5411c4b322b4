#pragma once

#include <stdexcept>
#include <string>

namespace krein {

// Base of every library error. kind() is the stable machine tag used in CLI error JSON.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
    virtual const char* kind() const noexcept { return "error"; }
};

#define KREIN_ERROR(Name, Tag)                                                   \
    class Name : public Error {                                                  \
    public:                                                                      \
        explicit Name(const std::string& what) : Error(what) {}                  \
        const char* kind() const noexcept override { return Tag; }               \
    };

KREIN_ERROR(DomainError, "domain")
KREIN_ERROR(PoleError, "pole")
KREIN_ERROR(ConvergenceError, "convergence")
KREIN_ERROR(SingularityError, "singularity")
KREIN_ERROR(SelfIntersectionError, "self_intersection")
KREIN_ERROR(OverlapError, "overlap")
KREIN_ERROR(MismatchError, "mismatch")
KREIN_ERROR(SymmetryError, "symmetry")
KREIN_ERROR(InvalidModel, "invalid_model")
KREIN_ERROR(DegenerateError, "degenerate")
KREIN_ERROR(UnsupportedError, "unsupported")
KREIN_ERROR(NoSecondStateError, "single_state")
KREIN_ERROR(ContourError, "contour")
KREIN_ERROR(NoBoundStatesError, "no_bound_states")

#undef KREIN_ERROR

// Schema/config problems. path is a JSON pointer, line is 0 when unknown.
class ConfigError : public Error {
public:
    ConfigError(const std::string& what, std::string path = {}, int line = 0)
        : Error(what), path_(std::move(path)), line_(line) {}
    const char* kind() const noexcept override { return "config"; }
    const std::string& path() const noexcept { return path_; }
    int line() const noexcept { return line_; }

private:
    std::string path_;
    int line_;
};

}  // namespace krein
