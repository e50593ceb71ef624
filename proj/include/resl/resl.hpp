// Umbrella header.
#pragma once

#include "resl/core.hpp"
#include "resl/gauge.hpp"
#include "resl/inverse.hpp"
#include "resl/io.hpp"
#include "resl/jost.hpp"
#include "resl/linalg.hpp"
#include "resl/matpoly.hpp"
#include "resl/roots.hpp"
#include "resl/scattering.hpp"
#include "resl/spectra.hpp"
#include "resl/sweep.hpp"
