#pragma once

#include "analysis.hpp"
#include "series.hpp"
#include "specfun.hpp"
#include "waves1d.hpp"
#include "waves3d.hpp"
