#include <stdio.h>
#include <string.h>

#include "robinson_embed.h"

#define CHECK(cond)                                                   \
    do {                                                              \
        if (!(cond)) {                                                \
            fprintf(stderr, "check failed at line %d: %s\n", __LINE__, #cond); \
            return 1;                                                 \
        }                                                             \
    } while (0)

static const char *MATRIX_A =
    "5 2\n2 2 1 0 0\n2 2 2 1 1\n1 2 2 2 1\n0 1 2 2 2\n0 1 1 2 2\n";
static const char *MATRIX_B =
    "6 2\n2 2 1 0 0 0\n2 2 2 1 1 1\n1 2 2 2 1 1\n0 1 2 2 2 1\n0 1 1 2 2 2\n0 1 1 1 2 2\n";

int main(void) {
    RbeMatrix *a = NULL;
    CHECK(rbe_matrix_parse(MATRIX_A, &a) == RBE_STATUS_OK);
    CHECK(rbe_matrix_n(a) == 5 && rbe_matrix_k(a) == 2);

    RbeOutcome *outcome = NULL;
    CHECK(rbe_solve(a, RBE_METHOD_AUTO, &outcome) == RBE_STATUS_OK);
    CHECK(rbe_outcome_is_feasible(outcome));
    double d[2], pi[5];
    CHECK(rbe_outcome_values(outcome, d, 2, pi, 5) == RBE_STATUS_OK);
    CHECK(d[0] > d[1] && d[1] > 0.0 && pi[0] == 0.0);
    char *json = rbe_outcome_to_json(outcome);
    CHECK(json != NULL && strncmp(json, "{\"status\":\"feasible\"", 20) == 0);
    rbe_string_free(json);
    rbe_outcome_free(outcome);

    const char *known = "{\"d\":[\"8\",\"6\"],\"pi\":[\"0\",\"5\",\"6.5\",\"11.75\",\"12.75\"]}";
    CHECK(rbe_verify_json(a, known) == RBE_STATUS_OK);
    const char *ds[] = {"8", "6"};
    const char *moved[] = {"0", "6", "6.5", "11.75", "12.75"};
    CHECK(rbe_verify(a, ds, 2, moved, 5) == RBE_STATUS_INFEASIBLE);
    CHECK(rbe_last_error() != NULL);

    RbeMatrix *b = NULL;
    CHECK(rbe_matrix_parse(MATRIX_B, &b) == RBE_STATUS_OK);
    CHECK(rbe_solve(b, RBE_METHOD_RATIO, &outcome) == RBE_STATUS_INFEASIBLE);
    CHECK(!rbe_outcome_is_feasible(outcome));
    json = rbe_outcome_to_json(outcome);
    CHECK(strstr(json, "[1,2,6,4,1]") != NULL);
    rbe_string_free(json);
    rbe_outcome_free(outcome);

    RbeMatrix *bad = NULL;
    CHECK(rbe_matrix_parse("3 2\n2 1 2\n1 2 1\n2 1 2\n", &bad) == RBE_STATUS_INVALID_MATRIX);
    CHECK(bad == NULL);
    CHECK(rbe_matrix_parse(NULL, &bad) == RBE_STATUS_NULL_POINTER);

    rbe_matrix_free(a);
    rbe_matrix_free(b);
    printf("ok %s\n", rbe_version());
    return 0;
}
