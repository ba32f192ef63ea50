#include <stdio.h>
#include "harmonic_na.h"

int main(void) {
    HnaAlgebra *alg = NULL;
    if (hna_algebra_new(3, 1, &alg) != HNA_STATUS_OK) {
        char msg[256];
        hna_last_error_message(msg, sizeof msg);
        fprintf(stderr, "error: %s\n", msg);
        return 1;
    }
    size_t n = 0;
    double q = 0.0;
    hna_algebra_dims(alg, NULL, NULL, &n, &q);

    double re = 0.0, im = 0.0;
    hna_spherical_phi(alg, 2.0, 0.0, 1.0, &re, &im);

    HnaAlgebra *bad = NULL;
    HnaStatus s = hna_algebra_new(5, 1, &bad);

    printf("version %s n=%zu Q=%g phi=%.6f status=%d\n", hna_version(), n, q, re, (int)s);
    hna_algebra_free(alg);
    return 0;
}
