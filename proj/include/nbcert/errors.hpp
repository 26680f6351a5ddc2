#pragma once

#include <stdexcept>
#include <string>

namespace nbcert {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Input / parsing errors
struct MalformedCsvError : Error { using Error::Error; };
struct NullLabelError : Error { using Error::Error; };
struct SchemaMismatchError : Error { using Error::Error; };
struct NonNumericError : Error { using Error::Error; };

// Dataset / point contract violations
struct EmptyDatasetError : Error { using Error::Error; };
struct IncompletePointError : Error { using Error::Error; };
struct NotCompleteError : Error { using Error::Error; };

// World enumeration
struct TooManyWorldsError : Error { using Error::Error; };
struct EmptyDomainError : Error { using Error::Error; };

// Poisoning
struct InfeasibleError : Error { using Error::Error; };
struct AllInfeasibleError : Error { using Error::Error; };
struct AmbiguousPredictionError : Error { using Error::Error; };
struct BudgetExhaustedError : Error { using Error::Error; };
struct StuckNoLegalStepError : Error { using Error::Error; };

}  // namespace nbcert
