#ifndef INTENT_RAG_H
#define INTENT_RAG_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every call.
 */
typedef enum IragStatus {
  IRAG_STATUS_OK = 0,
  IRAG_STATUS_NULL_ARGUMENT = 1,
  IRAG_STATUS_INVALID_UTF8 = 2,
  IRAG_STATUS_INVALID_INPUT = 3,
  IRAG_STATUS_EMPTY_INDEX = 4,
  IRAG_STATUS_INDEX_NOT_FOUND = 5,
  IRAG_STATUS_UNRESOLVABLE = 6,
  IRAG_STATUS_SCHEMA_VIOLATION = 7,
  IRAG_STATUS_MODEL_ERROR = 8,
  IRAG_STATUS_IO_ERROR = 9,
  IRAG_STATUS_INTERNAL = 10,
  IRAG_STATUS_PANIC = 11,
} IragStatus;

/**
 * Opaque engine handle.
 */
typedef struct IragGateway IragGateway;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Create an engine with the mock backend and empty indices.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
enum IragStatus irag_gateway_new_mock(struct IragGateway **out);

/**
 * Create an engine from a TOML configuration file and load its indices.
 * A null `config_path` uses defaults plus environment overrides.
 *
 * # Safety
 * `config_path` is null or a NUL-terminated string; `out` is writable.
 */
enum IragStatus irag_gateway_open(const char *config_path, struct IragGateway **out);

/**
 * Release a handle. Null is ignored.
 *
 * # Safety
 * `gw` is null or a handle from this library that has not been freed.
 */
void irag_gateway_free(struct IragGateway *gw);

/**
 * Ingest one document into both indices. `format_hint` may be null
 * (markdown-like). `out_nodes`, when non-null, receives the node count.
 *
 * # Safety
 * String arguments are NUL-terminated; `gw` is a live handle.
 */
enum IragStatus irag_gateway_ingest_text(struct IragGateway *gw,
                                         const char *doc_id,
                                         const char *text,
                                         const char *format_hint,
                                         size_t *out_nodes);

/**
 * Write both indices under `dir`.
 *
 * # Safety
 * `dir` is NUL-terminated; `gw` is a live handle.
 */
enum IragStatus irag_gateway_save(const struct IragGateway *gw, const char *dir);

/**
 * Replace both indices with the ones stored under `dir`.
 *
 * # Safety
 * `dir` is NUL-terminated; `gw` is a live handle.
 */
enum IragStatus irag_gateway_load(struct IragGateway *gw, const char *dir);

/**
 * Translate an intent. `pipeline` is `intent_rag` (when null),
 * `vanilla_rag` or `no_rag`. On success `*out_json` owns the response JSON.
 *
 * # Safety
 * String arguments are NUL-terminated; `gw` is a live handle; `out_json` is writable.
 */
enum IragStatus irag_gateway_translate(const struct IragGateway *gw,
                                       const char *intent,
                                       const char *pipeline,
                                       char **out_json);

/**
 * Number of scenarios the engine can classify into.
 *
 * # Safety
 * `gw` is a live handle; `out_len` is writable.
 */
enum IragStatus irag_gateway_catalog_len(const struct IragGateway *gw, size_t *out_len);

/**
 * Parse model text into structured-intent JSON
 * (`scenario_type`, `kpis`, `provenance`, `violations`).
 *
 * # Safety
 * `text` is NUL-terminated; `out_json` is writable.
 */
enum IragStatus irag_parse_structured_intent(const char *text, char **out_json);

/**
 * Release a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` is null or a string from this library that has not been freed.
 */
void irag_string_free(char *s);

/**
 * Message for the last failed call on this thread, or null. The pointer
 * stays valid until the next call into the library on the same thread.
 */
const char *irag_last_error_message(void);

/**
 * Library version, statically allocated.
 */
const char *irag_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* INTENT_RAG_H */
