#pragma once

#include <stdexcept>
#include <string>

namespace floatwave {

enum class ErrorCode {
    InvalidBody,
    NotSurfacePiercing,
    DegenerateImmersedPart,
    ObliqueAngleTooLarge,
    CutOff,
    Unstable,
    MeshQuality,
    SingularSystem,
    NearlySingularT,
    NotDeepEnough,
    BadConfig,
    IoError,
};

const char* to_string(ErrorCode c);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}
    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

} // namespace floatwave
