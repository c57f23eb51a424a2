#include <pybind11/pybind11.h>
PYBIND11_MODULE(_qit, m) { m.doc() = "placeholder"; }
