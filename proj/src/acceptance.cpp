#include "linlam/infer.hpp"
