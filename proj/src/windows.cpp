#include "ctsep/windows.hpp"

// Window profiles are header-only; this TU anchors the library target.
namespace ctsep {}
