#include <math.h>
#include <stdio.h>
#include "capaflat.h"

#define CHECK(cond) do { if (!(cond)) { fprintf(stderr, "failed: %s\n", #cond); return 1; } } while (0)

int main(void) {
    CapaflatMetric *metric = NULL;
    double cap = 0.0;
    CHECK(capaflat_metric_schwarzschild(2.0, 1.0, &metric) == CAPAFLAT_STATUS_OK);
    CHECK(capaflat_capacity(metric, 0.0, &cap) == CAPAFLAT_STATUS_OK);
    CHECK(fabs(cap - 2.0) < 1e-10);

    CapaflatPotential *pot = NULL;
    double phi = 0.0;
    CHECK(capaflat_potential_new(metric, 0.0, &pot) == CAPAFLAT_STATUS_OK);
    CHECK(capaflat_potential_phi(pot, 1.0, &phi) == CAPAFLAT_STATUS_OK);
    CHECK(fabs(phi) < 1e-12);
    capaflat_potential_free(pot);
    capaflat_metric_free(metric);

    CHECK(capaflat_metric_schwarzschild(4.0, 1.0, &metric) == CAPAFLAT_STATUS_INVALID_INPUT);
    CHECK(capaflat_last_error() != NULL);
    CHECK(capaflat_capacity(NULL, 0.0, &cap) == CAPAFLAT_STATUS_NULL_POINTER);
    printf("ok %.16e\n", cap);
    return 0;
}
