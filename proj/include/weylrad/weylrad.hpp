#pragma once

// Everything at once. Pull individual headers to keep compile times down.

#include "integer.hpp"
#include "exact_linalg.hpp"
#include "root_data.hpp"
#include "sparse.hpp"
#include "chevalley.hpp"
#include "parallel.hpp"
#include "lattice.hpp"
#include "weyl_module.hpp"
#include "schur.hpp"
#include "geometry.hpp"
#include "report.hpp"
