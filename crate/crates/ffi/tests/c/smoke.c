#include <math.h>
#include <stdio.h>
#include <string.h>

#include "bellopt.h"

#define CHECK(cond)                                                         \
    do {                                                                    \
        if (!(cond)) {                                                      \
            fprintf(stderr, "%s:%d: %s (%s)\n", __FILE__, __LINE__, #cond,  \
                    bellopt_last_error_message());                          \
            return 1;                                                       \
        }                                                                   \
    } while (0)

int main(void) {
    /* (|01> + |10>)/sqrt(2) in the basis |11>, |10>, |01>, |00> */
    double rho[32] = {0};
    rho[2 * (1 * 4 + 1)] = 0.5;
    rho[2 * (1 * 4 + 2)] = 0.5;
    rho[2 * (2 * 4 + 1)] = 0.5;
    rho[2 * (2 * 4 + 2)] = 0.5;

    BelloptState *bell = NULL;
    CHECK(bellopt_state_new(rho, BELLOPT_DEFAULT_OFF_X_TOL, &bell) == BELLOPT_STATUS_OK);

    double bmax = 0;
    CHECK(bellopt_bmax(bell, &bmax) == BELLOPT_STATUS_OK);
    CHECK(fabs(bmax - 2.0 * sqrt(2.0)) < 1e-12);

    BelloptAngles active, alternate;
    CHECK(bellopt_optimal_angles(bell, &active, &alternate) == BELLOPT_STATUS_OK);
    CHECK(active.set == 1 && active.tie && alternate.set == 2);
    double b = 0;
    CHECK(bellopt_bell_function(bell, alternate.theta, alternate.phi, &b) == BELLOPT_STATUS_OK);
    CHECK(fabs(b - bmax) < 1e-10);

    BelloptOracleConfig cfg = bellopt_oracle_config_default();
    double est = 0;
    CHECK(bellopt_oracle(bell, &cfg, &est) == BELLOPT_STATUS_OK);
    CHECK(fabs(est - bmax) < 1e-4);
    bellopt_state_free(bell);

    rho[0] = 1.0; /* trace 2 */
    BelloptState *bad = NULL;
    CHECK(bellopt_state_new(rho, BELLOPT_DEFAULT_OFF_X_TOL, &bad) == BELLOPT_STATUS_TRACE_NOT_ONE);
    CHECK(bad == NULL && strlen(bellopt_last_error_message()) > 0);

    double roots[2];
    size_t n = 0;
    CHECK(bellopt_crossing_roots(0.5, 1.0, roots, &n) == BELLOPT_STATUS_OK);
    CHECK(n == 2 && fabs(roots[0] - 1.0 / 3.0) < 1e-15 && fabs(roots[1] - 1.0) < 1e-15);

    BelloptState *ewl = NULL;
    CHECK(bellopt_state_ewl(0.3, 1.0, 0.0, &ewl) == BELLOPT_STATUS_OK);
    BelloptScan *scan = NULL;
    CHECK(bellopt_scan_run(ewl, "exp:1", 5.0, 500, &scan) == BELLOPT_STATUS_OK);
    CHECK(bellopt_scan_len(scan) == 500);
    size_t jumps = 0;
    for (size_t i = 0; i < bellopt_scan_event_count(scan); i++) {
        BelloptEvent e;
        CHECK(bellopt_scan_event(scan, i, &e) == BELLOPT_STATUS_OK);
        if (e.kind == BELLOPT_EVENT_KIND_SET_JUMP) jumps++;
        if (e.kind == BELLOPT_EVENT_KIND_VIOLATION_OFF) CHECK(fabs(e.bmax - 2.0) < 1e-8);
    }
    CHECK(jumps == 2);
    BelloptRecord rec;
    CHECK(bellopt_scan_record(scan, 500, &rec) == BELLOPT_STATUS_INVALID_ARGUMENT);
    bellopt_scan_free(scan);
    bellopt_state_free(ewl);

    printf("ok %s\n", bellopt_version());
    return 0;
}
