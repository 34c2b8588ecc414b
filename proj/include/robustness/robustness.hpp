#pragma once

#include "robustness/types.hpp"
#include "robustness/linalg.hpp"
#include "robustness/state.hpp"
#include "robustness/random.hpp"
#include "robustness/pure.hpp"
#include "robustness/bounds.hpp"
#include "robustness/families.hpp"
#include "robustness/solver.hpp"
#include "robustness/volume.hpp"
#include "robustness/io.hpp"
#include "robustness/cli.hpp"
