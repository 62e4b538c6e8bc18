#ifndef CLAUSECOUNT_H
#define CLAUSECOUNT_H

/* Generated by cbindgen from the clausecount-capi crate; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Counting algorithm selector.
 */
typedef enum {
  /**
   * Branching counter for width-2 formulas.
   */
  CC_MC2 = 0,
  /**
   * Branching counter for width-3 formulas.
   */
  CC_MC3 = 1,
  /**
   * Exhaustive enumeration; capped at 25 occurring variables.
   */
  CC_ORACLE = 2,
  /**
   * Width-2 counter when every clause has width at most two, else width-3.
   */
  CC_AUTO = 3,
} CcAlgorithm;

/**
 * Result of a call across the C boundary.
 */
typedef enum {
  CC_OK = 0,
  CC_NULL_POINTER = 1,
  CC_INVALID_UTF8 = 2,
  CC_PARSE_ERROR = 3,
  CC_WIDTH_ERROR = 4,
  CC_CAP_EXCEEDED = 5,
  CC_INVALID_ARGUMENT = 6,
  CC_INTERNAL_ERROR = 7,
} CcStatus;

/**
 * Opaque handle to a parsed formula.
 */
typedef struct CcFormula CcFormula;

/**
 * Optional knobs; pass NULL for defaults. The count never depends on them.
 */
typedef struct {
  /**
   * Disable the five-vertex product rule.
   */
  bool five_vertex_disabled;
  /**
   * Evaluate polarity branches concurrently.
   */
  bool parallel;
} CcOptions;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static string; do not free.
 */
const char *cc_version(void);

/**
 * Most recent error message on this thread, or NULL. Free the returned
 * string with `cc_string_free`.
 */
char *cc_last_error_message(void);

/**
 * Parses DIMACS CNF text into a formula handle.
 *
 * # Safety
 * `text` must be a valid NUL-terminated string; `out_formula` must be a
 * valid pointer.
 */
CcStatus cc_formula_parse(const char *text, CcFormula **out_formula);

/**
 * Releases a formula handle; NULL is ignored.
 *
 * # Safety
 * `formula` must be NULL or a pointer returned by `cc_formula_parse`.
 */
void cc_formula_free(CcFormula *formula);

/**
 * Declared variable count; zero for a NULL handle.
 *
 * # Safety
 * `formula` must be NULL or a live formula handle.
 */
uint32_t cc_formula_num_vars(const CcFormula *formula);

/**
 * Clause count; zero for a NULL handle.
 *
 * # Safety
 * `formula` must be NULL or a live formula handle.
 */
uint64_t cc_formula_num_clauses(const CcFormula *formula);

/**
 * Serializes a formula back to canonical DIMACS.
 *
 * # Safety
 * `formula` must be a live handle; `out_text` must be a valid pointer.
 */
CcStatus cc_formula_to_dimacs(const CcFormula *formula, char **out_text);

/**
 * Counts the models of a formula over its declared universe, writing the
 * count as a decimal string.
 *
 * # Safety
 * `formula` must be a live handle; `options` must be NULL or valid;
 * `out_count` must be a valid pointer.
 */
CcStatus cc_count(const CcFormula *formula,
                  CcAlgorithm algorithm,
                  const CcOptions *options,
                  char **out_count);

/**
 * Counts under instrumentation and writes the run statistics as a JSON
 * object. The oracle carries no branching statistics and is rejected.
 *
 * # Safety
 * Same contract as `cc_count`.
 */
CcStatus cc_stats_json(const CcFormula *formula,
                       CcAlgorithm algorithm,
                       const CcOptions *options,
                       char **out_json);

/**
 * Generates a seeded random k-CNF instance and writes it as DIMACS text.
 *
 * # Safety
 * `out_text` must be a valid pointer.
 */
CcStatus cc_generate_dimacs(uint8_t k, uint32_t n, uint64_t m, uint64_t seed, char **out_text);

/**
 * Releases a string returned by this library; NULL is ignored.
 *
 * # Safety
 * `text` must be NULL or a pointer returned by this library.
 */
void cc_string_free(char *text);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* CLAUSECOUNT_H */
