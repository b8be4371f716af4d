#include <math.h>
#include <stdio.h>
#include "multicut.h"

int main(void) {
    McGraph *g = NULL;
    if (mc_graph_parse("MULTICUT\n0 1 1\n1 2 1\n0 2 -2\n", &g) != MC_STATUS_OK) return 1;
    McConfig cfg = mc_config_default(MC_MODE_PRIMAL_DUAL);
    cfg.threads = 1;
    cfg.mp_iterations = 1;
    McSolution *s = NULL;
    if (mc_solve(g, &cfg, &s) != MC_STATUS_OK) return 2;
    size_t labels[3];
    if (mc_solution_labels(s, labels, 3) != MC_STATUS_OK) return 3;
    printf("%g %g %zu\n", mc_solution_primal_cost(s), mc_solution_lower_bound(s), mc_solution_num_clusters(s));
    if (mc_graph_parse("nope", &g) != MC_STATUS_PARSE_ERROR) return 4;
    if (mc_last_error_message() == NULL) return 5;
    mc_solution_free(s);
    mc_graph_free(g);
    return 0;
}
