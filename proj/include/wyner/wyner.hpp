#pragma once

#include "wyner/bounds.hpp"
#include "wyner/core.hpp"
#include "wyner/csv.hpp"
#include "wyner/entropy.hpp"
#include "wyner/envelope.hpp"
#include "wyner/models.hpp"
#include "wyner/quadrature.hpp"
#include "wyner/specfun.hpp"
