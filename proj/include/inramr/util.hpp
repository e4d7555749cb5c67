#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>

namespace inramr {

/// Precondition or API-contract violation (caller bug).
struct ContractError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed input file (weight file, report CSV).
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Degenerate or inconsistent numerical state (all-zero matrix, zero pivot).
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// File-system failure while reading or writing artifacts.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Sum with a fixed pairwise reduction tree. The result depends only on the
/// contents of `v`, never on threading or chunking done by callers.
double pairwise_sum(std::span<const double> v);

/// Static-partition parallel loop over [0, n). Work items must be independent;
/// results written to disjoint slots are reproducible for any worker count.
/// `threads <= 1` runs inline. Exceptions from `fn` are rethrown once.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

/// Shortest round-trip decimal for a double ("0.5", "1e-05", ...).
std::string format_shortest(double v);

/// Fixed 17-significant-digit decimal, for the report CSV.
std::string format_sig17(double v);

}  // namespace inramr
