/* C interface to the purelab decision procedures. */

#ifndef PURELAB_H
#define PURELAB_H

/* Generated by cbindgen from crates/purelab-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Which property of a square to check.
typedef enum PlbSquareCheck {
  // All four legs pure and the induced map into the pushout a pure mono.
  PLB_SQUARE_CHECK_PURE_EFFECTIVE = 0,
  // The square is a pullback: K is exactly the intersection of A and B.
  PLB_SQUARE_CHECK_PULLBACK = 1,
} PlbSquareCheck;

// Status of one call.
typedef enum PlbStatus {
  // The call completed; out parameters are set.
  PLB_STATUS_OK = 0,
  // A pointer argument was null or a string was not valid UTF-8.
  PLB_STATUS_BAD_ARGUMENT = 1,
  // An input file was missing, malformed, or failed validation.
  PLB_STATUS_INPUT_ERROR = 2,
  // Inputs parsed but violate a precondition of the operation, for
  // example a purity check on a map that is not a monomorphism.
  PLB_STATUS_PRECONDITION_ERROR = 3,
} PlbStatus;

typedef struct PlbCategory PlbCategory;

typedef struct PlbHom PlbHom;

typedef struct PlbPresheaf PlbPresheaf;

// Version of the library as a static string; do not free.
const char *plb_version(void);

// Message of the last failing call on this thread, or the empty string.
// Valid until the next failing call on the same thread; do not free.
const char *plb_last_error(void);

// Frees a string returned through an out parameter.
//
// # Safety
// `s` must have been returned by this library and not freed before.
void plb_string_free(char *s);

// Loads and validates a category file.
//
// # Safety
// `path` must be NUL-terminated; `out` must be a valid pointer.
enum PlbStatus plb_category_load(const char *path, struct PlbCategory **out);

// # Safety
// `cat` must come from [`plb_category_load`] and not be freed twice.
void plb_category_free(struct PlbCategory *cat);

// Decides whether every span in the category factors through one of its
// legs; writes the verdict to `holds`.
//
// # Safety
// `cat` must be a live handle; `holds` must be a valid pointer.
enum PlbStatus plb_category_is_llp(const struct PlbCategory *cat, bool *holds);

// Like [`plb_category_is_llp`] but returns the full report as a JSON
// string in `out`; free it with [`plb_string_free`].
//
// # Safety
// `cat` must be a live handle; `out` must be a valid pointer.
enum PlbStatus plb_category_llp_json(const struct PlbCategory *cat, char **out);

// Loads a presheaf file together with the category it references.
//
// # Safety
// `path` must be NUL-terminated; `out` must be a valid pointer.
enum PlbStatus plb_presheaf_load(const char *path, struct PlbPresheaf **out);

// # Safety
// `p` must come from [`plb_presheaf_load`] and not be freed twice.
void plb_presheaf_free(struct PlbPresheaf *p);

// Total number of elements across all sorts; 0 for a null handle.
//
// # Safety
// `p` must be a live handle or null.
size_t plb_presheaf_size(const struct PlbPresheaf *p);

// Loads a hom file together with its source and target presheaves.
//
// # Safety
// `path` must be NUL-terminated; `out` must be a valid pointer.
enum PlbStatus plb_hom_load(const char *path, struct PlbHom **out);

// # Safety
// `h` must come from [`plb_hom_load`] and not be freed twice.
void plb_hom_free(struct PlbHom *h);

// Decides purity of a monomorphism; writes the verdict to `pure`.
// A non-mono input yields `PreconditionError`.
//
// # Safety
// `h` must be a live handle; `pure` must be a valid pointer.
enum PlbStatus plb_hom_is_pure(const struct PlbHom *h, bool *pure);

// Decides whether the monomorphism has a retraction.
//
// # Safety
// `h` must be a live handle; `split` must be a valid pointer.
enum PlbStatus plb_hom_is_split(const struct PlbHom *h, bool *split);

// Full purity certificate as JSON: either the retraction map or the
// falsifying system with its solution.  Free with [`plb_string_free`].
//
// # Safety
// `h` must be a live handle; `out` must be a valid pointer.
enum PlbStatus plb_hom_purity_json(const struct PlbHom *h, char **out);

// Loads a square file and checks the requested property, writing the
// verdict to `holds`.
//
// # Safety
// `path` must be NUL-terminated; `holds` must be a valid pointer.
enum PlbStatus plb_square_check(const char *path, enum PlbSquareCheck check, bool *holds);

// Runs all nine acceptance criteria with the given seed; writes whether
// every criterion passed to `all_passed`.
//
// # Safety
// `all_passed` must be a valid pointer.
enum PlbStatus plb_suite_run(uint64_t seed, bool *all_passed);

#endif  /* PURELAB_H */
