#pragma once

#include "nsdde/analysis.hpp"
#include "nsdde/brownian.hpp"
#include "nsdde/condition_spec.hpp"
#include "nsdde/conditions.hpp"
#include "nsdde/error.hpp"
#include "nsdde/euler.hpp"
#include "nsdde/grid.hpp"
#include "nsdde/io.hpp"
#include "nsdde/model.hpp"
#include "nsdde/types.hpp"
#include "nsdde/version.hpp"
