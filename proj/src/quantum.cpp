#include "linlam/term.hpp"
