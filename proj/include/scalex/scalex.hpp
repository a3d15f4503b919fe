#pragma once

// scalex: compute-optimal model/token allocation from loss-curve data.

#include "scalex/approaches.hpp"
#include "scalex/bootstrap.hpp"
#include "scalex/curves.hpp"
#include "scalex/fitting.hpp"
#include "scalex/flops.hpp"
#include "scalex/frontier.hpp"
#include "scalex/io.hpp"
#include "scalex/lbfgs.hpp"
#include "scalex/multistart.hpp"
#include "scalex/parallel.hpp"
#include "scalex/rng.hpp"
#include "scalex/synth.hpp"
#include "scalex/types.hpp"
