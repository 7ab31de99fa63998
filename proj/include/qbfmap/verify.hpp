#pragma once

#include "qbfmap/model.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace qbfmap {

/// Raised when a configuration holds a selector code the encodings block
/// (code >= pool size or >= C(n,k)); such configurations never satisfy the
/// CNF side and indicate a decode bug.
class BlockedCodeError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Evaluates the circuit directly, no CNF involved.  `inputs` is a packed
/// word (bit i = input_word[i]); the result packs the outputs the same way.
/// The configuration must cover every CONFIG signal.
std::uint64_t simulate(const CircuitModel& model, const Configuration& config,
                       std::uint64_t inputs);

struct VerifyResult {
  bool ok = false;
  bool exhaustive = true;     ///< false when the input space was sampled
  std::uint64_t checked = 0;  ///< number of input words evaluated
  std::uint64_t inputs = 0;   ///< first mismatch, valid when !ok
  std::uint64_t got = 0;
  std::uint64_t want = 0;
};

/// Compares simulate() against the target for every input word.  Up to
/// `exhaustive_limit` input bits the sweep is exhaustive; wider models are
/// spot-checked with `samples` seeded random words and the result is flagged
/// as non-exhaustive.
VerifyResult verify_implements(const CircuitModel& model, const Configuration& config,
                               const TargetFunction& f, int exhaustive_limit = 16,
                               std::uint64_t samples = 1 << 16,
                               std::uint64_t seed = 1);

/// Human-readable decode of a configuration: per primitive the selector code
/// with the chosen pool signals, or the LUT truth table as a hex string.
std::string describe_configuration(const CircuitModel& model, const Configuration& config);

} // namespace qbfmap
