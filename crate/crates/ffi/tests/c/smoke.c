#include <stdio.h>
#include <string.h>
#include "orbitavg.h"

#define CHECK(call) do { OrbitavgStatus st_ = (call); if (st_ != ORBITAVG_STATUS_OK) { \
    fprintf(stderr, "%s -> %d: %s\n", #call, (int)st_, orbitavg_last_error()); return 1; } } while (0)

int main(void) {
    OrbitavgPoly *q = NULL, *avg = NULL, *sigma = NULL, *reduced = NULL;
    char *s = NULL;
    CHECK(orbitavg_poly_parse("x1*x2", 3, &q));
    CHECK(orbitavg_sphere_radon(q, &avg));
    CHECK(orbitavg_poly_to_expr(avg, &s));
    printf("%s\n", s);
    orbitavg_string_free(s);
    orbitavg_poly_free(q);
    orbitavg_poly_free(avg);

    CHECK(orbitavg_poly_parse("x1", 3, &q));
    CHECK(orbitavg_sphere_second_correction(q, &sigma, &reduced));
    CHECK(orbitavg_poly_to_expr(reduced, &s));
    printf("%s\n", s);
    orbitavg_string_free(s);

    OrbitavgSpectrum *spec = NULL;
    CHECK(orbitavg_sphere_spectrum(0.1, 0.0, q, 2, 2, 0, &spec));
    double re, im;
    CHECK(orbitavg_spectrum_get(spec, 0, &re, &im));
    printf("%zu %.3f\n", orbitavg_spectrum_len(spec), re);
    orbitavg_spectrum_free(spec);

    if (orbitavg_poly_parse("x1 +", 3, &avg) != ORBITAVG_STATUS_PARSE) return 2;
    if (orbitavg_last_error() == NULL) return 3;
    orbitavg_poly_free(q);
    orbitavg_poly_free(sigma);
    orbitavg_poly_free(reduced);
    return 0;
}
