#pragma once

#include "ldg3/band_lu.hpp"
#include "ldg3/error_analysis.hpp"
#include "ldg3/field.hpp"
#include "ldg3/ldg.hpp"
#include "ldg3/manufactured.hpp"
#include "ldg3/mesh.hpp"
#include "ldg3/piecewise_poly.hpp"
#include "ldg3/problem.hpp"
#include "ldg3/projection.hpp"
#include "ldg3/quadrature.hpp"
#include "ldg3/study.hpp"
