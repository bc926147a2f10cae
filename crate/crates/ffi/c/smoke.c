#include <stdio.h>
#include "qrg.h"

int main(void) {
    QrgGraph *g = NULL;
    if (qrg_graph_build(2.0, 0.5, 20000, 7, false, &g) != QRG_STATUS_OK) {
        fprintf(stderr, "build failed: %s\n", qrg_last_error_message());
        return 1;
    }
    size_t vertices = 0, edges = 0;
    qrg_graph_vertex_count(g, &vertices);
    qrg_graph_edge_count(g, &edges);
    QrgComponent giant;
    qrg_graph_component(g, 1, &giant);
    QrgTheory t;
    qrg_theory_predictions(2.0, 0.5, &t);
    printf("qrg %s: %zu vertices, %zu edges, giant %.4f (theory %.4f)\n", qrg_version(),
           vertices, edges, (double)giant.vertex_count / 20000.0, t.rho);
    qrg_graph_free(g);

    double x;
    if (qrg_critical_f(-1.0, 0.5, &x) != QRG_STATUS_INVALID_ARGUMENT) {
        return 1;
    }
    printf("expected error: %s\n", qrg_last_error_message());
    return 0;
}
