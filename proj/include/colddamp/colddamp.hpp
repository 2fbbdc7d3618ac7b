#pragma once

// Everything except the CLI-only helpers (config_io, csv, figures, checks).

#include "colddamp/error.hpp"
#include "colddamp/grid.hpp"
#include "colddamp/model.hpp"
#include "colddamp/qlimits.hpp"
#include "colddamp/response.hpp"
#include "colddamp/spectra.hpp"
#include "colddamp/thermo.hpp"
