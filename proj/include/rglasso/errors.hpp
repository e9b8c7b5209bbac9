#pragma once

#include <stdexcept>
#include <string>

namespace rglasso {

/// Symmetric eigensolver or SVD failed to converge. The message carries a
/// condition summary of the offending matrix (dimension, norms, entry range).
struct EigenSolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A solve aborted mid-run; the message carries the iteration index.
struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Data ingestion failed (unreadable file, ragged rows, too few usable
/// rows or columns, non-square matrix where one is required).
struct IngestError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace rglasso
