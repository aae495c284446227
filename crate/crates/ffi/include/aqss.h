/*
 * Copyright 2026 The aqss Authors
 * SPDX-License-Identifier: Apache-2.0
 */

#ifndef AQSS_H
#define AQSS_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes. Values 0 to 4 match the exit codes of the `aqss` binary.
 */
typedef enum AqssStatus {
  AQSS_STATUS_OK = 0,
  AQSS_STATUS_INPUT_ERROR = 1,
  AQSS_STATUS_VERIFICATION_FAILED = 2,
  AQSS_STATUS_UNSUPPORTED = 3,
  AQSS_STATUS_RESOURCE_CAP = 4,
  AQSS_STATUS_NULL_ARGUMENT = 5,
  AQSS_STATUS_PANIC = 6,
} AqssStatus;

/**
 * Verification backend selection.
 */
typedef enum AqssMode {
  AQSS_MODE_AUTO = 0,
  AQSS_MODE_FULL = 1,
  AQSS_MODE_COMPOSITIONAL = 2,
} AqssMode;

/**
 * Parsed access structure.
 */
typedef struct AqssStructure AqssStructure;

/**
 * Options for [`aqss_verify_json`]. Obtain defaults from
 * [`aqss_verify_options_default`].
 */
typedef struct AqssVerifyOptions {
  /**
   * An [`AqssMode`] value.
   */
  uint32_t mode;
  double tolerance;
  size_t max_amplitudes;
} AqssVerifyOptions;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses structure text (line syntax or JSON) into a new handle.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a valid pointer.
 */
enum AqssStatus aqss_structure_parse(const char *text, struct AqssStructure **out);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `handle` must come from [`aqss_structure_parse`] and not be used again.
 */
void aqss_structure_free(struct AqssStructure *handle);

/**
 * Number of minimal authorized sets.
 *
 * # Safety
 * `handle` must be a live handle and `out` a valid pointer.
 */
enum AqssStatus aqss_structure_set_count(const struct AqssStructure *handle, size_t *out);

/**
 * Minimum number of partially linked classes.
 *
 * # Safety
 * `handle` must be a live handle and `out` a valid pointer.
 */
enum AqssStatus aqss_structure_lambda(const struct AqssStructure *handle, size_t *out);

/**
 * Whether every pair of minimal sets overlaps, so that a plain quantum
 * threshold scheme without resident shares suffices.
 *
 * # Safety
 * `handle` must be a live handle and `out` a valid pointer.
 */
enum AqssStatus aqss_structure_conventional_ok(const struct AqssStructure *handle, bool *out);

/**
 * Builds the scheme tree for a minimum classification and returns it as
 * JSON.
 *
 * # Safety
 * `handle` must be a live handle and `out` a valid pointer.
 */
enum AqssStatus aqss_build_json(const struct AqssStructure *handle, char **out);

/**
 * Default verification options: automatic backend, tolerance 1e-9 and the
 * library's default amplitude cap.
 */
struct AqssVerifyOptions aqss_verify_options_default(void);

/**
 * Builds and verifies the scheme, returning the report as JSON. A completed
 * verification whose overall verdict is negative still writes the report
 * and returns [`AqssStatus::VerificationFailed`].
 *
 * # Safety
 * `handle` must be a live handle, `options` null or valid, and `out` a valid
 * pointer.
 */
enum AqssStatus aqss_verify_json(const struct AqssStructure *handle,
                                 const struct AqssVerifyOptions *options,
                                 char **out);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be used again.
 */
void aqss_string_free(char *s);

/**
 * Message for the last failed call on this thread, or null. The pointer
 * stays valid until the next call into this library on the same thread.
 */
const char *aqss_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *aqss_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* AQSS_H */
