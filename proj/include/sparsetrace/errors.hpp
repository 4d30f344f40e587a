#pragma once

#include <stdexcept>
#include <string>

namespace sparsetrace {

// Violated input contract of an operation. The CLI maps this to exit code 2.
class PreconditionError : public std::invalid_argument {
public:
    explicit PreconditionError(const std::string& what) : std::invalid_argument(what) {}
};

// Input is structurally valid but exceeds a documented size cap.
class CapacityError : public std::invalid_argument {
public:
    explicit CapacityError(const std::string& what) : std::invalid_argument(what) {}
};

// A numerical continuation could not be completed. Never converted into a
// fail verdict; callers should resample the random data and retry.
class TrackingAbort : public std::runtime_error {
public:
    explicit TrackingAbort(const std::string& what, bool resample = true)
        : std::runtime_error(what), resample_recommended(resample) {}
    bool resample_recommended;
};

}  // namespace sparsetrace
