#ifndef IPLDPC_H
#define IPLDPC_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum IpldpcStatus {
  IPLDPC_STATUS_OK = 0,
  IPLDPC_STATUS_NULL_POINTER = 1,
  IPLDPC_STATUS_INVALID_ARGUMENT = 2,
  IPLDPC_STATUS_DIMENSION = 3,
  IPLDPC_STATUS_PARSE = 4,
  IPLDPC_STATUS_RESOURCE_GUARD = 5,
  IPLDPC_STATUS_IO = 6,
  IPLDPC_STATUS_PANIC = 7,
} IpldpcStatus;

typedef enum IpldpcPegVariant {
  IPLDPC_PEG_VARIANT_CIRCULANT = 0,
  IPLDPC_PEG_VARIANT_GENERIC = 1,
} IpldpcPegVariant;

// A product code together with its decoder.
typedef struct IpldpcProductCode IpldpcProductCode;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread; empty after a success.
// The pointer stays valid until the next call into this library.
const char *ipldpc_last_error_message(void);

// Library version as a static NUL-terminated string.
const char *ipldpc_version(void);

// Builds a direct (`perms_json` null) or interleaved product code from two
// component descriptors such as `"mscmpc:81:9,10"` or `"spc:3"`.
//
// # Safety
// String arguments must be NUL-terminated; `out` must be writable.
enum IpldpcStatus ipldpc_product_code_new(const char *comp_a,
                                          const char *comp_b,
                                          const char *perms_json,
                                          struct IpldpcProductCode **out);

// # Safety
// `code` must come from [`ipldpc_product_code_new`] or be null.
void ipldpc_product_code_free(struct IpldpcProductCode *code);

// Code length, or 0 for a null handle.
//
// # Safety
// `code` must be a live handle or null.
size_t ipldpc_product_code_n(const struct IpldpcProductCode *code);

// Code dimension, or 0 for a null handle.
//
// # Safety
// `code` must be a live handle or null.
size_t ipldpc_product_code_k(const struct IpldpcProductCode *code);

// Number of parity checks in the code's parity-check matrix.
//
// # Safety
// `code` must be a live handle or null.
size_t ipldpc_product_code_checks(const struct IpldpcProductCode *code);

// Encodes `k` information bits into `n` codeword bits.
//
// # Safety
// `info` must hold `info_len` bytes and `codeword` `codeword_len` bytes.
enum IpldpcStatus ipldpc_product_code_encode(const struct IpldpcProductCode *code,
                                             const uint8_t *info,
                                             size_t info_len,
                                             uint8_t *codeword,
                                             size_t codeword_len);

// Sum-product decoding of `n` channel LLRs (positive favours 0).
// `iterations` and `converged` may be null.
//
// # Safety
// `llr` must hold `n` doubles and `hard_bits` `n` bytes.
enum IpldpcStatus ipldpc_product_code_decode(const struct IpldpcProductCode *code,
                                             const double *llr,
                                             size_t n,
                                             size_t max_iter,
                                             uint8_t *hard_bits,
                                             size_t *iterations,
                                             bool *converged);

// Designs a column interleaver and returns it as permutation-array JSON
// (1-based). Release the string with [`ipldpc_string_free`].
//
// # Safety
// String arguments must be NUL-terminated; `out_json` must be writable.
enum IpldpcStatus ipldpc_peg_design(const char *comp_a,
                                    const char *comp_b,
                                    enum IpldpcPegVariant variant,
                                    uint64_t seed,
                                    char **out_json);

// # Safety
// `s` must come from this library or be null.
void ipldpc_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* IPLDPC_H */
