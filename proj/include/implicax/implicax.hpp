#pragma once

#include "implicax/errors.hpp"
#include "implicax/field.hpp"
#include "implicax/poly.hpp"
#include "implicax/gcd.hpp"
#include "implicax/matrix.hpp"
#include "implicax/parameterization.hpp"
#include "implicax/complexes.hpp"
#include "implicax/geometry.hpp"
#include "implicax/resultants.hpp"
#include "implicax/pipeline.hpp"
#include "implicax/problem.hpp"
