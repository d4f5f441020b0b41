#include <math.h>
#include <stdio.h>
#include <string.h>
#include "epspect.h"

#define CHECK(cond) do { if (!(cond)) { fprintf(stderr, "line %d: %s\n", __LINE__, #cond); return 1; } } while (0)

int main(void) {
    EpsModel *m = NULL;
    CHECK(eps_model_new_shift(2, 0.0, 1.0, &m) == EPS_STATUS_OK);
    double re[2], im[2];
    CHECK(eps_model_spectrum(m, re, im, 2) == EPS_STATUS_OK);
    CHECK(fabs(re[0] + 1.0) < 1e-12 && fabs(re[1] - 1.0) < 1e-12);
    CHECK(eps_model_spectrum(m, re, im, 1) == EPS_STATUS_BUFFER_TOO_SMALL);
    CHECK(eps_last_error() != NULL);
    eps_model_free(m);

    EpsEpList *l = NULL;
    CHECK(eps_locate_eps(3, &l) == EPS_STATUS_OK);
    CHECK(eps_ep_list_len(l) == 2);
    double u, er, ei, res;
    CHECK(eps_ep_list_get(l, 1, &u, &er, &ei, &res) == EPS_STATUS_OK);
    CHECK(fabs(u - 0.3002831061) < 1e-9 && res < 1e-10);
    char *js = NULL;
    CHECK(eps_ep_list_json(l, &js) == EPS_STATUS_OK && js[0] == '[');
    eps_string_free(js);
    eps_ep_list_free(l);

    CHECK(eps_locate_eps(2, &l) == EPS_STATUS_COMPUTATION);
    CHECK(strstr(eps_last_error(), "E = u") != NULL);
    CHECK(eps_model_new_shift(1, 0.0, 0.0, &m) == EPS_STATUS_INVALID_ARGUMENT);
    CHECK(eps_model_spectrum(NULL, re, im, 2) == EPS_STATUS_NULL_POINTER);
    puts("ok");
    return 0;
}
