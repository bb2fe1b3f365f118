#pragma once

#include "qtoa/corrections.hpp"
#include "qtoa/errors.hpp"
#include "qtoa/imprint.hpp"
#include "qtoa/numerics/polynomial.hpp"
#include "qtoa/numerics/quadrature.hpp"
#include "qtoa/numerics/special.hpp"
#include "qtoa/phase_solver.hpp"
#include "qtoa/toa_distribution.hpp"
#include "qtoa/wavepacket.hpp"
