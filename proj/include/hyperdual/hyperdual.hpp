#pragma once

#include "asympt.hpp"
#include "checks.hpp"
#include "cli.hpp"
#include "contour.hpp"
#include "errors.hpp"
#include "glrep.hpp"
#include "hyperint.hpp"
#include "integrand.hpp"
#include "model.hpp"
#include "ode.hpp"
#include "parallel.hpp"
#include "quadrature.hpp"
#include "selberg.hpp"
#include "special.hpp"
#include "suite.hpp"
#include "types.hpp"
