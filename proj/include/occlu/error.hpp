#pragma once

#include <stdexcept>
#include <string>

namespace occlu {

// Base class for every error the library throws.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// File missing, unreadable, or unwritable.
struct IoError : Error {
  using Error::Error;
};

// File exists but its contents violate the expected format.
struct FormatError : Error {
  using Error::Error;
};

// Caller violated an operation precondition.
struct InvalidInput : Error {
  using Error::Error;
};

// Face bounding box is below the minimum working size; callers may skip
// the frame instead of aborting.
struct FaceTooSmall : InvalidInput {
  using InvalidInput::InvalidInput;
};

// Face bounding box does not intersect the frame at all.
struct FaceOutsideFrame : InvalidInput {
  using InvalidInput::InvalidInput;
};

}  // namespace occlu
