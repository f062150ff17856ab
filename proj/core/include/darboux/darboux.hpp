#pragma once

#include "darboux/calculus.hpp"
#include "darboux/chart.hpp"
#include "darboux/dual.hpp"
#include "darboux/dynamics.hpp"
#include "darboux/errors.hpp"
#include "darboux/field.hpp"
#include "darboux/integrator.hpp"
#include "darboux/jacobi.hpp"
#include "darboux/lifts.hpp"
#include "darboux/linalg.hpp"
#include "darboux/parser.hpp"
#include "darboux/submanifolds.hpp"
#include "darboux/symmetry.hpp"
