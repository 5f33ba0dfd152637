#include <stdio.h>
#include <string.h>
#include "almost_invariant.h"

static const char *INSTANCE =
    "{\"kind\": \"set-majority\", \"x_size\": 2, \"generators\": [[1, 0]], \"a\": [0]}";

int main(void) {
    AiField *f = NULL;
    if (ai_field_new(2, 1, &f) != AI_STATUS_OK) return 10;
    uint32_t e1[] = {1, 0};
    uint32_t e2[] = {0, 1};
    AiSubspace *a = NULL, *b = NULL, *s = NULL;
    if (ai_subspace_span(f, e1, 1, 2, &a) != AI_STATUS_OK) return 11;
    if (ai_subspace_span(f, e2, 1, 2, &b) != AI_STATUS_OK) return 12;
    if (ai_subspace_sum(a, b, &s) != AI_STATUS_OK || ai_subspace_dim(s) != 2) return 13;
    size_t q = 0;
    if (ai_subspace_quotient_dim(a, b, &q) != AI_STATUS_OK || q != 1) return 14;
    char *cert = NULL;
    if (ai_run(NULL, INSTANCE, &cert) != AI_STATUS_OK) return 15;
    if (ai_verify(cert, INSTANCE) != AI_STATUS_OK) return 16;
    char *p = strstr(cert, "\"symdiff\": 1");
    if (p == NULL) return 17;
    p[12] = '0';
    if (ai_verify(cert, INSTANCE) != AI_STATUS_VERIFY_FAILED || ai_last_error() == NULL) return 18;
    if (ai_field_new(4, 1, &f) != AI_STATUS_INVALID_INPUT) return 19;
    ai_string_free(cert);
    ai_subspace_free(s);
    ai_subspace_free(b);
    ai_subspace_free(a);
    ai_field_free(f);
    puts("ok");
    return 0;
}
