#pragma once

#include "teichflow/boundary.hpp"
#include "teichflow/errors.hpp"
#include "teichflow/flowlab.hpp"
#include "teichflow/ptorus.hpp"
#include "teichflow/qdiff.hpp"
#include "teichflow/selftest.hpp"
#include "teichflow/slopes.hpp"
#include "teichflow/svgplot.hpp"
#include "teichflow/torus.hpp"
#include "teichflow/trace.hpp"
