#pragma once

// Umbrella header for the library (everything except the CLI front end).

#include "psr/error.hpp"
#include "psr/linalg.hpp"
#include "psr/polynomial.hpp"
#include "psr/parse.hpp"
#include "psr/jet.hpp"
#include "psr/homogeneous_function.hpp"
#include "psr/signature.hpp"
#include "psr/weierstrass.hpp"
#include "psr/hyperbolicity.hpp"
#include "psr/catalog.hpp"
#include "psr/rmap_curvature.hpp"
#include "psr/psr_metric.hpp"
#include "psr/scal_scan.hpp"
#include "psr/table.hpp"
#include "psr/app.hpp"
