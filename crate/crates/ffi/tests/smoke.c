#include <math.h>
#include <stdio.h>
#include "simplicial_score.h"

int main(void) {
    const double d[9] = {0, 1, 1, 1, 0, 1, 1, 1, 0};
    SsComplex *k = NULL;
    if (ss_complex_from_distances(d, 3, 1.1, 2, &k) != SS_STATUS_OK) {
        fprintf(stderr, "%s\n", ss_last_error_message());
        return 1;
    }
    ss_complex_compute_weights(k, SS_WEIGHTS_UNIT);
    const double f[3] = {1, 0, 0};
    double score = 0;
    SsStatus s = ss_score_features(k, f, 1, 3, 0, SS_AGGREGATION_MEAN, &score);
    ss_complex_free(k);
    return s == SS_STATUS_OK && fabs(score - 3.0) < 1e-12 ? 0 : 1;
}
