/* SPDX-License-Identifier: Apache-2.0 */
#ifndef DCLAB_DCLAB_H
#define DCLAB_DCLAB_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define DCLAB_API __declspec(dllexport)
#elif defined(__GNUC__)
#define DCLAB_API __attribute__((visibility("default")))
#else
#define DCLAB_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes. Nonzero values match dclab::ErrorCode. */
typedef enum dclab_status {
    DCLAB_OK = 0,
    DCLAB_INVALID_ARGUMENT = 1,
    DCLAB_INVALID_GEOMETRY = 2,
    DCLAB_DOMAIN = 3,
    DCLAB_MASKED_RAY = 4,
    DCLAB_BRACKET_FAILURE = 5,
    DCLAB_DEGENERATE_FIT = 6,
    DCLAB_DEGENERATE_SOURCE = 7,
    DCLAB_OUT_OF_RANGE = 8,
    DCLAB_IO = 9,
    DCLAB_PARSE = 10,
    DCLAB_INTERNAL = 11
} dclab_status;

typedef struct dclab_config dclab_config;
typedef struct dclab_result dclab_result;
typedef struct dclab_field dclab_field;

/* Library version string, e.g. "0.1.0". */
DCLAB_API const char* dclab_version(void);

/* Message of the last failing call on this thread; empty after success. */
DCLAB_API const char* dclab_last_error(void);

DCLAB_API const char* dclab_status_name(dclab_status status);

/* Configs. Every out-handle is set to NULL on failure. */
DCLAB_API dclab_status dclab_config_load(const char* path, dclab_config** out);
DCLAB_API dclab_status dclab_config_parse(const char* text, dclab_config** out);
DCLAB_API dclab_status dclab_config_set(dclab_config* cfg, const char* section, const char* key, const char* value);
/* Canonical value text of one key; lives until the next call on this handle or its release. */
DCLAB_API dclab_status dclab_config_get(dclab_config* cfg, const char* section, const char* key, const char** out);
/* Canonical text; the string lives until the next call on this handle or its release. */
DCLAB_API dclab_status dclab_config_serialize(dclab_config* cfg, const char** out);
DCLAB_API dclab_status dclab_config_hash(const dclab_config* cfg, uint64_t* out);
DCLAB_API dclab_status dclab_config_kind(const dclab_config* cfg, const char** out);
DCLAB_API void dclab_config_free(dclab_config* cfg);

/* FNV-1a 64 of the bytes. */
DCLAB_API uint64_t dclab_hash_bytes(const char* data, size_t size);

/* Runs the experiment named by the config. */
DCLAB_API dclab_status dclab_run(const dclab_config* cfg, dclab_result** out);
DCLAB_API int dclab_result_passed(const dclab_result* res);
DCLAB_API size_t dclab_result_assertion_count(const dclab_result* res);
/* Borrowed strings, valid until dclab_result_free. */
DCLAB_API dclab_status dclab_result_assertion(const dclab_result* res, size_t index, const char** name, int* pass,
                                              const char** detail);
DCLAB_API dclab_status dclab_result_csv(dclab_result* res, const char** out);
DCLAB_API dclab_status dclab_result_write(const dclab_result* res, const dclab_config* cfg, const char* dir);
DCLAB_API size_t dclab_result_field_count(const dclab_result* res);
/* Copy of field `index`; release with dclab_field_free. */
DCLAB_API dclab_status dclab_result_field(const dclab_result* res, size_t index, const char** name,
                                          dclab_field** out);
DCLAB_API void dclab_result_free(dclab_result* res);

/* DCLAB1 field dumps. */
DCLAB_API dclab_status dclab_field_read(const char* path, dclab_field** out);
DCLAB_API dclab_status dclab_field_write(const dclab_field* field, const char* path, int binary);
DCLAB_API int dclab_field_dim(const dclab_field* field);
/* Cells along `axis`; nodes along it are cells + 1. */
DCLAB_API int dclab_field_cells(const dclab_field* field, int axis);
DCLAB_API double dclab_field_spacing(const dclab_field* field);
DCLAB_API double dclab_field_origin(const dclab_field* field, int axis);
DCLAB_API size_t dclab_field_size(const dclab_field* field);
/* Row-major node values, `dclab_field_size` of them. */
DCLAB_API const double* dclab_field_data(const dclab_field* field);
DCLAB_API void dclab_field_free(dclab_field* field);

/* Radial coefficient for the power source lambda * t^gamma, gamma in [0, 3). */
DCLAB_API dclab_status dclab_upsilon(double lambda, double gamma, double* out);

#ifdef __cplusplus
}
#endif

#endif /* DCLAB_DCLAB_H */
