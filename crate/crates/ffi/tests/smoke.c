#include <math.h>
#include <stdio.h>

#include "hcorr.h"

int main(void) {
    double x[] = {1.0}, y[] = {1.0};
    HcorrSpectrum *sx = NULL, *sy = NULL;
    if (hcorr_spectrum_new(HCORR_FAMILY_O_EVEN, x, 1, &sx) != HCORR_STATUS_OK) return 1;
    if (hcorr_spectrum_new(HCORR_FAMILY_O_EVEN, y, 1, &sy) != HCORR_STATUS_OK) return 1;
    double z = 0.0;
    if (hcorr_partition(sx, sy, 0.3, &z) != HCORR_STATUS_OK) return 2;
    if (fabs(z - cosh(0.6)) > 1e-12) return 3;

    HcorrComplex xp = {2.0, 0.5}, yp = {3.0, -1.0};
    HcorrVector *v = NULL;
    if (hcorr_correlator(sx, sy, &xp, &yp, 1, 0.5, &v) != HCORR_STATUS_OK) return 4;
    HcorrComplex c;
    if (hcorr_vector_len(v) != 2 || hcorr_vector_get(v, 0, &c) != HCORR_STATUS_OK) return 5;

    HcorrSpectrum *bad = NULL;
    double dup[] = {1.0, 1.0};
    if (hcorr_spectrum_new(HCORR_FAMILY_SP, dup, 2, &bad) != HCORR_STATUS_COINCIDENT_EIGENVALUES) return 6;
    printf("hcorr %s: Z = %.15f, C0 = %.15f%+.15fi, error: %s\n", hcorr_version(), z, c.re, c.im, hcorr_last_error());

    hcorr_vector_free(v);
    hcorr_spectrum_free(sx);
    hcorr_spectrum_free(sy);
    return 0;
}
