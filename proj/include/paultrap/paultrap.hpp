#pragma once

#include "paultrap/errors.hpp"
#include "paultrap/params.hpp"
#include "paultrap/numeric.hpp"
#include "paultrap/floquet.hpp"
#include "paultrap/invariant.hpp"
#include "paultrap/phase.hpp"
#include "paultrap/stability.hpp"
#include "paultrap/wavefunction.hpp"
#include "paultrap/interference.hpp"
