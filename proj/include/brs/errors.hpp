#ifndef BRS_ERRORS_HPP
#define BRS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace brs {

// Column/attribute names that do not line up with the schema.
struct SchemaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed input text (bad cell, bad file).
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Values outside their mathematical domain.
struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Invalid configuration (ranges too narrow, bad hyperparameters, ...).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A perturbation could not produce a valid granulization within the
// retry budget; callers treat this as a rejected proposal.
struct ProposalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace brs

#endif  // BRS_ERRORS_HPP
