#pragma once

// Umbrella header for the library (the CLI front end lives in gve/cli.hpp).

#include "gve/block_orthogonalizer.hpp"
#include "gve/cv_lasso.hpp"
#include "gve/dense_matrix.hpp"
#include "gve/error.hpp"
#include "gve/estimators.hpp"
#include "gve/io.hpp"
#include "gve/lasso.hpp"
#include "gve/random.hpp"
#include "gve/rip_probe.hpp"
#include "gve/simulation.hpp"
#include "gve/symmetric_eigen.hpp"
#include "gve/window.hpp"
#include "gve/window_selection.hpp"
