#pragma once

#include "otmorph/errors.hpp"
#include "otmorph/token_set.hpp"
#include "otmorph/ot/cost_matrix.hpp"
#include "otmorph/ot/assignment.hpp"
#include "otmorph/ot/transport_simplex.hpp"
#include "otmorph/ot/exact_ot.hpp"
#include "otmorph/ot/oracles.hpp"
#include "otmorph/barycenter.hpp"
#include "otmorph/trajectory.hpp"
#include "otmorph/selective.hpp"
#include "otmorph/toydemo.hpp"
#include "otmorph/token_io.hpp"
#include "otmorph/synthetic.hpp"
