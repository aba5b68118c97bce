/* Prints the analytic efficiency table for the bundled summary.
 *
 *   cargo build -p chainratio-ffi --release
 *   cc crates/ffi/examples/smoke.c -Icrates/ffi/include \
 *      target/release/libchainratio_ffi.a -lpthread -ldl -lm -o smoke
 */
#include <stdio.h>

#include "chainratio.h"

int main(void) {
  CrSummary *summary = NULL;
  CrTable *table = NULL;

  if (cr_summary_anderson(&summary) != CR_STATUS_OK) {
    fprintf(stderr, "%s\n", cr_last_error_message());
    return 1;
  }
  CrStatus status = cr_evaluate(summary, 25, 10, 7, &table);
  if (status != CR_STATUS_OK) {
    fprintf(stderr, "error %d: %s\n", (int)status, cr_last_error_message());
    cr_summary_free(summary);
    return (int)status;
  }
  for (size_t i = 0; i < cr_table_len(table); i++) {
    CrRow row;
    cr_table_row(table, i, &row);
    printf("%-8s %12.4f %10.4f\n", cr_table_row_name(table, i), row.mse, row.pre);
  }
  cr_table_free(table);
  cr_summary_free(summary);
  return 0;
}
