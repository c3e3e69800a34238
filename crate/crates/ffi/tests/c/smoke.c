#include <stdio.h>
#include <string.h>

#include "qorbifold.h"

int main(int argc, char **argv) {
    if (argc != 2) {
        return 64;
    }
    QoScenario *s = NULL;
    if (qo_scenario_load(argv[1], &s) != QO_STATUS_OK) {
        fprintf(stderr, "%s\n", qo_last_error_message());
        return 1;
    }
    uint64_t count = 0;
    if (qo_matching_count(s, "gamma", &count) != QO_STATUS_OK) {
        return 2;
    }
    char *text = NULL;
    if (qo_expand_text(s, "gamma", true, &text) != QO_STATUS_OK) {
        return 3;
    }
    QoStatus missing = qo_matching_count(s, "nope", &count);
    printf("matchings %llu\n", (unsigned long long)count);
    printf("%s", text);
    printf("missing %d %s\n", (int)missing, strlen(qo_last_error_message()) > 0 ? "message" : "empty");
    qo_string_free(text);
    qo_scenario_free(s);
    return 0;
}
