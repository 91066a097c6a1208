/* Build from this directory: cc rabi.c -I../include ../../../target/debug/libqdyn_ffi.a -lm -lpthread -ldl */
#include <stdio.h>
#include "qdyn.h"

int main(void) {
    QdynOperator *u = NULL;
    QdynComplex omega = {0.0, 0.5};
    if (qdyn_rabi_propagator(omega, 3.14159265358979, &u) != QDYN_STATUS_OK) {
        fprintf(stderr, "%s\n", qdyn_last_error());
        return 1;
    }
    QdynComplex m[4];
    qdyn_operator_data(u, m, 4);
    printf("|U01|^2 = %.12f\n", m[1].re * m[1].re + m[1].im * m[1].im);
    qdyn_operator_free(u);
    return 0;
}
