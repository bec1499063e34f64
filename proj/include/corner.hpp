#pragma once

// Umbrella header for the corner calculus engine.

#include "corner/bordism.hpp"
#include "corner/io.hpp"
#include "corner/report.hpp"
#include "corner/suites.hpp"
