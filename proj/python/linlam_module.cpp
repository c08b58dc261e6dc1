#include <pybind11/pybind11.h>

namespace py = pybind11;

PYBIND11_MODULE(_linlam, m) {
    m.doc() = "linear lambda calculus workbench";
}
