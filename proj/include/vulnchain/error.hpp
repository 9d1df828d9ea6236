#pragma once

#include <stdexcept>
#include <string>

namespace vulnchain {

// Base of every error thrown by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// --- core model ---
struct MalformedCveId : Error { using Error::Error; };
struct MalformedVector : Error { using Error::Error; };
struct OutOfRange : Error { using Error::Error; };

// --- feeds ---
struct TransportError : Error { using Error::Error; };       // retryable
struct RateLimited : Error { using Error::Error; };          // back off per pacing contract
struct SchemaError : Error { using Error::Error; };
struct MalformedHeader : Error { using Error::Error; };
struct MalformedRow : Error { using Error::Error; };
struct DecompressError : Error { using Error::Error; };
struct CountMismatch : Error { using Error::Error; };

// --- store ---
struct StorageError : Error { using Error::Error; };
struct UnknownCve : Error { using Error::Error; };

// --- evaluation ---
struct EmptyPrioritySet : Error { using Error::Error; };
struct EmptyGroundTruth : Error { using Error::Error; };
struct InvalidRange : Error { using Error::Error; };
struct DivisionByZero : Error { using Error::Error; };

}  // namespace vulnchain
