#pragma once

#include "ndphoton/analysis.hpp"
#include "ndphoton/beams.hpp"
#include "ndphoton/error.hpp"
#include "ndphoton/field.hpp"
#include "ndphoton/field_io.hpp"
#include "ndphoton/grid.hpp"
#include "ndphoton/optics.hpp"
#include "ndphoton/parallel.hpp"
#include "ndphoton/quadrature.hpp"
#include "ndphoton/special_functions.hpp"
#include "ndphoton/spdc.hpp"
#include "ndphoton/version.hpp"
