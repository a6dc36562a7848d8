#ifndef CSYS_H
#define CSYS_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum CsysStatus {
  CSYS_STATUS_OK = 0,
  CSYS_STATUS_NULL_ARGUMENT = 1,
  CSYS_STATUS_INVALID_UTF8 = 2,
  CSYS_STATUS_PARSE_ERROR = 3,
  CSYS_STATUS_UNKNOWN_EXEMPLAR = 4,
  CSYS_STATUS_SIMULATION_ERROR = 5,
  CSYS_STATUS_SEARCH_ERROR = 6,
  CSYS_STATUS_PANIC = 7,
} CsysStatus;

/**
 * A validated computational system.
 */
typedef struct CsysSystem CsysSystem;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message describing the last failed call on this thread, or null. The
 * pointer stays valid until the next call into the library on this thread.
 */
const char *csys_last_error(void);

/**
 * Releases a string returned by the library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void csys_string_free(char *s);

/**
 * Parses a `csys v1` document.
 *
 * # Safety
 * `doc` must be a nul-terminated string and `out` a writable pointer.
 */
enum CsysStatus csys_system_parse(const char *doc, struct CsysSystem **out);

/**
 * Builds a shipped exemplar system by name (`line4`, `butterfly`, ...).
 *
 * # Safety
 * `name` must be a nul-terminated string and `out` a writable pointer.
 */
enum CsysStatus csys_system_exemplar(const char *name, struct CsysSystem **out);

/**
 * Builds the system simulating a `dfa v1` document.
 *
 * # Safety
 * `doc` must be a nul-terminated string and `out` a writable pointer.
 */
enum CsysStatus csys_system_from_dfa(const char *doc, struct CsysSystem **out);

/**
 * Releases a system handle. Null is ignored.
 *
 * # Safety
 * `sys` must come from this library and not have been freed.
 */
void csys_system_free(struct CsysSystem *sys);

/**
 * Number of nodes, or 0 for a null handle.
 *
 * # Safety
 * `sys` must be null or a live handle.
 */
size_t csys_system_node_count(const struct CsysSystem *sys);

/**
 * Canonical `csys v1` text of a system.
 *
 * # Safety
 * `sys` must be a live handle and `out` a writable pointer.
 */
enum CsysStatus csys_system_print(const struct CsysSystem *sys, char **out);

/**
 * Runs the system on one input and writes the outputs as text: one
 * `NAME = VALUE` line per output node (`.` if it never fired), then
 * `status complete` or `status timeout`. A zero `horizon` selects the
 * default for the input length.
 *
 * # Safety
 * `sys` must be a live handle, `input` a nul-terminated string and `out` a
 * writable pointer.
 */
enum CsysStatus csys_simulate(const struct CsysSystem *sys,
                              const char *input,
                              uint64_t horizon,
                              char **out);

/**
 * Compares a `dfa v1` document with a system on all words up to
 * `max_len`. Writes 1 to `equivalent` when they agree, 0 otherwise.
 *
 * # Safety
 * `dfa` must be a nul-terminated string, `sys` a live handle and
 * `equivalent` a writable pointer.
 */
enum CsysStatus csys_equiv(const char *dfa,
                           const struct CsysSystem *sys,
                           size_t max_len,
                           int32_t *equivalent);

/**
 * Verifies a solver (assembly text) against a system and a `family v1`
 * document under the bounds `l`, `m` bits and `q` queries. Writes the
 * verdict line (`Accept` or `Reject REASON`) to `verdict` and 1 to
 * `accepted` on acceptance, 0 otherwise.
 *
 * # Safety
 * `sys` must be a live handle, `family` and `solver` nul-terminated strings,
 * and `accepted` and `verdict` writable pointers.
 */
enum CsysStatus csys_verify(const struct CsysSystem *sys,
                            const char *family,
                            const char *solver,
                            size_t l,
                            uint64_t m,
                            uint64_t q,
                            int32_t *accepted,
                            char **verdict);

/**
 * Verifies a shipped exemplar's solver under its default bounds.
 *
 * # Safety
 * `name` must be a nul-terminated string, `accepted` and `verdict` writable
 * pointers.
 */
enum CsysStatus csys_verify_exemplar(const char *name, int32_t *accepted, char **verdict);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* CSYS_H */
