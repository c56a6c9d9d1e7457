#ifndef SL2RECOG_H
#define SL2RECOG_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum Sl2Status {
  SL2_STATUS_OK = 0,
  SL2_STATUS_NULL_POINTER = 1,
  SL2_STATUS_INVALID_UTF8 = 2,
  SL2_STATUS_PARSE = 3,
  SL2_STATUS_INVALID_ARGUMENT = 4,
  SL2_STATUS_BAD_CHARACTERISTIC = 5,
  SL2_STATUS_RELATIONS_FAILED = 6,
  SL2_STATUS_REDUCIBLE = 7,
  SL2_STATUS_UNDECIDED = 8,
  SL2_STATUS_OUT_OF_SCOPE = 9,
  SL2_STATUS_RECOGNITION_FAILED = 10,
  SL2_STATUS_PANIC = 11,
} Sl2Status;

typedef enum Sl2Tag {
  SL2_TAG_NAT = 0,
  SL2_TAG_SYM2 = 1,
  SL2_TAG_SYM3 = 2,
  SL2_TAG_TWIST_TENSOR = 3,
} Sl2Tag;

/**
 * Opaque certificate handle.
 */
typedef struct Sl2Certificate Sl2Certificate;

/**
 * Opaque module handle.
 */
typedef struct Sl2Module Sl2Module;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL. Owned by the
 * library and valid until the next failing call.
 */
const char *sl2_last_error_message(void);

/**
 * # Safety
 * `s` must come from this library or be NULL.
 */
void sl2_string_free(char *s);

/**
 * Parses a module file. A `meta` member is ignored.
 *
 * # Safety
 * `json` must be a nul-terminated string; `out` a valid pointer.
 */
enum Sl2Status sl2_module_from_json(const char *json, struct Sl2Module **out);

/**
 * Canonical module over GF(p^m) with the default polynomial.
 * `twist_power` is read only for the twist tensor.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum Sl2Status sl2_module_construct(enum Sl2Tag tag,
                                    uint32_t p,
                                    size_t m,
                                    size_t twist_power,
                                    struct Sl2Module **out);

/**
 * New module conjugated by a seeded random change of basis.
 *
 * # Safety
 * `module` must be a live handle; `out` a valid pointer.
 */
enum Sl2Status sl2_module_scramble(const struct Sl2Module *module,
                                   uint64_t seed,
                                   struct Sl2Module **out);

/**
 * # Safety
 * `module` must be a live handle; `out` a valid pointer.
 */
enum Sl2Status sl2_module_to_json(const struct Sl2Module *module, char **out);

/**
 * Dimension over GF(p), or 0 for NULL.
 *
 * # Safety
 * `module` must be a live handle or NULL.
 */
size_t sl2_module_dim(const struct Sl2Module *module);

/**
 * # Safety
 * `module` must come from this library or be NULL.
 */
void sl2_module_free(struct Sl2Module *module);

/**
 * Recognizes `module`. On rejection the status names the reason and the
 * error message carries the JSON rejection record.
 *
 * # Safety
 * `module` must be a live handle; `out` a valid pointer.
 */
enum Sl2Status sl2_recognize(const struct Sl2Module *module,
                             uint64_t seed,
                             struct Sl2Certificate **out);

/**
 * # Safety
 * `cert` must be a live handle; `out` a valid pointer.
 */
enum Sl2Status sl2_certificate_tag(const struct Sl2Certificate *cert, enum Sl2Tag *out);

/**
 * Twist power, or -1 when the certificate has none.
 *
 * # Safety
 * `cert` must be a live handle; `out` a valid pointer.
 */
enum Sl2Status sl2_certificate_chi_power(const struct Sl2Certificate *cert, int64_t *out);

/**
 * # Safety
 * `cert` must be a live handle; `out` a valid pointer.
 */
enum Sl2Status sl2_certificate_to_json(const struct Sl2Certificate *cert, char **out);

/**
 * # Safety
 * `json` must be a nul-terminated string; `out` a valid pointer.
 */
enum Sl2Status sl2_certificate_from_json(const char *json, struct Sl2Certificate **out);

/**
 * # Safety
 * `cert` must come from this library or be NULL.
 */
void sl2_certificate_free(struct Sl2Certificate *cert);

/**
 * Checks `cert` against `module`. A failed check is not an error: the call
 * returns Ok and writes false. The failed check names go to the error message.
 *
 * # Safety
 * Both handles must be live; `passed` a valid pointer.
 */
enum Sl2Status sl2_verify(const struct Sl2Module *module,
                          const struct Sl2Certificate *cert,
                          bool *passed);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SL2RECOG_H */
