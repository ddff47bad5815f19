#include <stdio.h>
#include <string.h>
#include "pseudodyn.h"

static const char *LINE =
    "{\"points\": [\"a\", \"b\", \"c\"],"
    " \"dist\": [[0, 1, 2], [1, 0, 1], [2, 1, 0]],"
    " \"generators\": [{\"name\": \"g\", \"map\": {\"a\": \"b\", \"b\": \"c\"}}],"
    " \"mu\": {\"a\": \"1/3\", \"b\": \"1/3\", \"c\": \"1/3\"}}";

int main(void) {
    PdModel *m = NULL;
    if (pd_model_from_json(LINE, &m) != PD_STATUS_OK) {
        fprintf(stderr, "load: %s\n", pd_last_error());
        return 1;
    }
    size_t a;
    if (pd_point_index(m, "a", &a) != PD_STATUS_OK || a != 0) return 2;
    uint8_t mask[3];
    if (pd_dyn_ball(m, a, 1, "3/2", true, mask, 3) != PD_STATUS_OK) return 3;
    if (!(mask[0] && mask[1] && !mask[2])) return 4;
    char *mass = NULL;
    if (pd_measure_of(m, mask, 3, &mass) != PD_STATUS_OK) return 5;
    int ok = strcmp(mass, "2/3") == 0;
    pd_string_free(mass);
    if (!ok) return 6;
    if (pd_dyn_ball(m, a, 1, "x/y", true, mask, 3) != PD_STATUS_INVALID_INPUT) return 7;
    if (pd_last_error() == NULL) return 8;
    pd_model_free(m);
    printf("ok %s\n", pd_version());
    return 0;
}
