#pragma once

#include "greens/composite_kernel.hpp"
#include "greens/dirichlet.hpp"
#include "greens/errors.hpp"
#include "greens/nonlinear.hpp"
#include "greens/numerics.hpp"
#include "greens/parallel.hpp"
#include "greens/quadrature.hpp"
#include "greens/reflection_kernel.hpp"
#include "greens/serialize.hpp"
#include "greens/sign_region.hpp"
#include "greens/version.hpp"
