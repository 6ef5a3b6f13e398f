#include <stdio.h>
#include <string.h>
#include "kksoergel.h"

int main(void) {
    KksDatum *d = NULL;
    if (kks_datum_preset("A2", &d) != KKS_STATUS_OK) return 10;
    size_t order = 0;
    if (kks_datum_order(d, &order) != KKS_STATUS_OK || order != 6) return 11;
    char *json = NULL;
    if (kks_report(d, "coinvariants", "Fp:3", NULL, 0, -1, &json) != KKS_STATUS_OK) return 12;
    if (strstr(json, "\"dim\":6") == NULL) return 13;
    kks_string_free(json);
    if (kks_datum_preset("E9", &d) != KKS_STATUS_PARSE) return 14;
    if (strlen(kks_last_error()) == 0) return 15;
    kks_datum_free(d);
    printf("%s\n", kks_version());
    return 0;
}
