#pragma once

#include "errors.hpp"
#include "io.hpp"
#include "potential.hpp"
#include "radial_solver.hpp"
#include "scaling_hft.hpp"
#include "shooting.hpp"
#include "spectral_properties.hpp"
#include "tridiagonal.hpp"
#include "verify.hpp"
