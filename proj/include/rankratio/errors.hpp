#pragma once

#include <stdexcept>
#include <string>

namespace rankratio {

// Base class for all toolkit errors. The CLI maps these to exit code 1.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed input text (bad header, wrong field count, unparseable number).
struct parse_error : error {
    using error::error;
};

// A value violates a precondition (negative citations, r > g, x outside (0,100], ...).
struct domain_error : error {
    using error::error;
};

// Duplicate record id within one corpus.
struct uniqueness_error : error {
    using error::error;
};

// An operation that requires at least one record received none.
struct empty_input_error : error {
    using error::error;
};

// A requested group label is not present in the ranking.
struct lookup_error : error {
    using error::error;
};

// Groups that must be disjoint share papers (or a label is listed twice).
struct overlap_error : error {
    using error::error;
};

// A statistic is defined on more papers than the series holds.
struct insufficient_data_error : error {
    using error::error;
};

// A modification would produce a duplicate global rank within a series.
struct conflict_error : error {
    using error::error;
};

// Ratio with a zero denominator.
struct undefined_ratio_error : error {
    using error::error;
};

// Power-law fit from anchors that do not pin down a model (p1 = 0).
struct degenerate_fit_error : error {
    using error::error;
};

// Two power-law models with equal exponents never reach the requested factor,
// or the solution falls outside (0, 100].
struct no_crossover_error : error {
    using error::error;
};

// File could not be opened, written or renamed; message names the path.
struct io_error : error {
    using error::error;
};

}  // namespace rankratio
