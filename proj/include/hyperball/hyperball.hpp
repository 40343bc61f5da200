#ifndef HYPERBALL_HYPERBALL_HPP
#define HYPERBALL_HYPERBALL_HPP

#include "hyperball/errors.hpp"
#include "hyperball/vec.hpp"
#include "hyperball/parallel.hpp"
#include "hyperball/specfun.hpp"
#include "hyperball/quadrature.hpp"
#include "hyperball/spheregeom.hpp"
#include "hyperball/kernels.hpp"
#include "hyperball/hharmonic.hpp"
#include "hyperball/hardy.hpp"

#endif  // HYPERBALL_HYPERBALL_HPP
