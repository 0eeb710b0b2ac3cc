#ifndef FGAC_H
#define FGAC_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum FgacStatus {
  FGAC_STATUS_OK = 0,
  FGAC_STATUS_NULL_POINTER = 1,
  FGAC_STATUS_INVALID_UTF8 = 2,
  FGAC_STATUS_INVALID_ARGUMENT = 3,
  FGAC_STATUS_IO = 4,
  FGAC_STATUS_MODEL = 5,
  FGAC_STATUS_PANIC = 6,
} FgacStatus;

/*
 A loaded model document. Opaque to C.
 */
typedef struct FgacModel FgacModel;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message of the last failed call on this thread, or null. Valid until the
 next call into this library on the same thread.
 */
const char *fgac_last_error_message(void);

/*
 Loads a model document from a file.

 # Safety
 `path` must be a nul-terminated string and `out` a valid pointer.
 */
enum FgacStatus fgac_model_load(const char *path, struct FgacModel **out);

/*
 Parses a model document from JSON text.

 # Safety
 `json` must be a nul-terminated string and `out` a valid pointer.
 */
enum FgacStatus fgac_model_from_json(const char *json, struct FgacModel **out);

/*
 Releases a model. Null is ignored.

 # Safety
 `model` must come from a load function and not be used afterwards.
 */
void fgac_model_free(struct FgacModel *model);

/*
 Number of classes, or 0 for a null handle.

 # Safety
 `model` must be null or a live handle.
 */
size_t fgac_model_class_count(const struct FgacModel *model);

/*
 Number of input columns a row must have, or 0 for a null handle.

 # Safety
 `model` must be null or a live handle.
 */
size_t fgac_model_column_count(const struct FgacModel *model);

/*
 Name of input column `index`, or null when out of range. Owned by the
 handle.

 # Safety
 `model` must be null or a live handle.
 */
const char *fgac_model_column_name(const struct FgacModel *model, size_t index);

/*
 1 when input column `index` is nominal, 0 otherwise.

 # Safety
 `model` must be null or a live handle.
 */
int32_t fgac_model_column_is_nominal(const struct FgacModel *model, size_t index);

/*
 Name of class `index`, or null when out of range. Owned by the handle.

 # Safety
 `model` must be null or a live handle.
 */
const char *fgac_model_class_name(const struct FgacModel *model, size_t index);

/*
 Predicts `n_rows` raw rows stored row-major in `values`
 (`n_rows × n_cols`, columns in the order of [`fgac_model_column_name`]).
 Numeric cells are raw attribute values; nominal cells are indices into
 the categories seen at fit time.

 Writes one class id per row to `out_classes`, and when `out_degrees` is
 not null, `n_rows × class_count` membership degrees row-major.

 # Safety
 `values` must hold `n_rows × n_cols` doubles, `out_classes` room for
 `n_rows` entries and `out_degrees` (if not null) room for
 `n_rows × class_count`.
 */
enum FgacStatus fgac_model_predict(const struct FgacModel *model,
                                   const double *values,
                                   size_t n_rows,
                                   size_t n_cols,
                                   size_t *out_classes,
                                   double *out_degrees);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FGAC_H */
