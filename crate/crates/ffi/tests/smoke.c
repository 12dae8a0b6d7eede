#include <math.h>
#include <stdio.h>
#include <stdlib.h>

#include "uc_chp.h"

#define CHECK(call)                                                        \
    do {                                                                   \
        UcStatus st_ = (call);                                             \
        if (st_ != UC_STATUS_OK) {                                         \
            fprintf(stderr, "%s -> %d: %s\n", #call, st_, uc_last_error()); \
            return 1;                                                      \
        }                                                                  \
    } while (0)

int main(int argc, char **argv) {
    if (argc != 2) {
        return 2;
    }
    UcInstance *inst = NULL;
    CHECK(uc_instance_load(argv[1], 0, &inst));

    UcReport *rep = NULL;
    CHECK(uc_compare(inst, &rep));
    double prices[3];
    size_t n = 0;
    CHECK(uc_report_prices(rep, 1, prices, 3, &n));
    double u_tlmp, u_chp, gap;
    CHECK(uc_report_summary(rep, 0, &u_tlmp, NULL, NULL, NULL));
    CHECK(uc_report_summary(rep, 1, &u_chp, NULL, NULL, &gap));
    printf("chp %.6f %.6f %.6f uplift %.6f %.6f gap %.6f\n", prices[0], prices[1], prices[2], u_tlmp, u_chp, gap);

    UcStatus st = uc_report_prices(rep, 5, prices, 3, &n);
    int ok = st == UC_STATUS_OUT_OF_RANGE && uc_last_error() != NULL && fabs(u_chp - 7.0) < 1e-6;

    uc_report_free(rep);
    uc_instance_free(inst);
    return ok ? 0 : 1;
}
