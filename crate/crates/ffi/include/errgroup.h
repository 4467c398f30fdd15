#ifndef ERRGROUP_H
#define ERRGROUP_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum EgStatus {
  EG_STATUS_OK = 0,
  EG_STATUS_NULL_POINTER = 1,
  EG_STATUS_INVALID_UTF8 = 2,
  EG_STATUS_INVALID_ARGUMENT = 3,
  // The computation ran and reported a mathematical or size failure.
  EG_STATUS_DOMAIN = 4,
  EG_STATUS_IO = 5,
  EG_STATUS_PANIC = 6,
} EgStatus;

// A nice error basis.
typedef struct EgBasis EgBasis;

// A named example together with its code.
typedef struct EgInstance EgInstance;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or NULL. The pointer is
// valid until the next call into the library on the same thread.
const char *eg_last_error(void);

// Library version as a static string.
const char *eg_version(void);

// # Safety
// `s` must be NULL or a string returned by this library, freed once.
void eg_string_free(char *s);

// Shift and clock basis on `C^p` for prime `p`.
enum EgStatus eg_basis_pauli(uint64_t p, struct EgBasis **out);

// # Safety
// `json` must be a NUL-terminated string.
enum EgStatus eg_basis_from_json(const char *json, struct EgBasis **out);

// Canonical JSON of the basis; free with [`eg_string_free`].
enum EgStatus eg_basis_to_json(const struct EgBasis *b, char **out);

enum EgStatus eg_basis_dim(const struct EgBasis *b, size_t *out);

// Checks the basis axioms; `pass` receives the verdict and `report`, if
// not NULL, the full report as JSON.
enum EgStatus eg_basis_verify(const struct EgBasis *b, bool *pass, char **report);

// # Safety
// `b` must be NULL or a live handle, freed once.
void eg_basis_free(struct EgBasis *b);

// One of the built-in examples by name.
//
// # Safety
// `name` must be a NUL-terminated string.
enum EgStatus eg_instance_new(const char *name, struct EgInstance **out);

enum EgStatus eg_instance_code_dim(const struct EgInstance *inst, size_t *out);

// Runs every invariant check; the JSON report carries an overall "pass".
enum EgStatus eg_instance_check_all(const struct EgInstance *inst, uint64_t seed, char **out);

// # Safety
// `inst` must be NULL or a live handle, freed once.
void eg_instance_free(struct EgInstance *inst);

// Runs the command line with `argv` (without the program name) and
// `stdin_text` (may be NULL) as standard input. The captured streams are
// returned as library strings; `exit_code` gets the process exit status.
//
// # Safety
// `argv` must point to `argc` NUL-terminated strings.
enum EgStatus eg_cli_run(size_t argc,
                         const char *const *argv,
                         const char *stdin_text,
                         int32_t *exit_code,
                         char **stdout_text,
                         char **stderr_text);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ERRGROUP_H */
