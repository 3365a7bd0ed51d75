#include <pybind11/pybind11.h>
PYBIND11_MODULE(gradedmodal, m) { m.doc() = "graded two-way modal logic toolkit"; }
