#pragma once

#include "movpatch/config.hpp"
#include "movpatch/coupling.hpp"
#include "movpatch/exact.hpp"
#include "movpatch/examples.hpp"
#include "movpatch/geometry.hpp"
#include "movpatch/heterogeneity.hpp"
#include "movpatch/integrate.hpp"
#include "movpatch/io.hpp"
#include "movpatch/lattice.hpp"
#include "movpatch/merging.hpp"
#include "movpatch/metrics.hpp"
#include "movpatch/motion.hpp"
#include "movpatch/rk45.hpp"
#include "movpatch/runner.hpp"
