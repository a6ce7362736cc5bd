#pragma once

#include "ehyp/error.hpp"
#include "ehyp/geometry.hpp"
#include "ehyp/grid_field.hpp"
#include "ehyp/density.hpp"
#include "ehyp/surfaces.hpp"
#include "ehyp/hodge_disc.hpp"
#include "ehyp/friedrichs.hpp"
#include "ehyp/energy_liouville.hpp"
#include "ehyp/field_io.hpp"
