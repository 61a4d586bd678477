#include "acceptance.hpp"
